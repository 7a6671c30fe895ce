#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace edhg {

// Local campus wall-clock time at minute resolution. No time zone is attached.
using Timestamp = std::chrono::sys_time<std::chrono::minutes>;

enum class Session : std::uint8_t { Morning = 0, Afternoon = 1, Evening = 2, Night = 3 };

inline constexpr int kDaysPerWeek = 7;
inline constexpr int kSessionsPerDay = 4;
inline constexpr int kWeekSlots = kDaysPerWeek * kSessionsPerDay;

struct TimeSlot {
  int id = 0;       // day * 4 + session
  int day = 0;      // Monday = 0
  int session = 0;  // Morning = 0 ... Night = 3

  friend bool operator==(const TimeSlot&, const TimeSlot&) = default;
};

// Slot granularity. Week28 is the default day-of-week x session index; Hour4
// keeps only the session, Dow7 only the day.
enum class TimeMode { Week28, Hour4, Dow7 };

Session session_of_hour(int hour);
TimeSlot time_index(Timestamp ts);
int slot_id(Timestamp ts, TimeMode mode);
int slot_count(TimeMode mode);

std::optional<TimeMode> parse_time_mode(std::string_view text);
std::string_view to_string(TimeMode mode);
std::optional<TimeMode> time_mode_for_slot_count(int count);

// Strict `YYYY-MM-DDTHH:MM`. Returns nullopt on any deviation, including
// impossible calendar dates.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

}  // namespace edhg
