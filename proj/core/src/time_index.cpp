#include "edhg/time_index.hpp"

#include <charconv>

#include <fmt/format.h>

namespace edhg {

namespace {

bool parse_fixed(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto res = std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return res.ec == std::errc{};
}

}  // namespace

Session session_of_hour(int hour) {
  if (hour >= 6 && hour < 12) return Session::Morning;
  if (hour >= 12 && hour < 17) return Session::Afternoon;
  if (hour >= 17) return Session::Evening;
  return Session::Night;
}

TimeSlot time_index(Timestamp ts) {
  using namespace std::chrono;
  const auto day_start = floor<days>(ts);
  const int day = static_cast<int>(weekday{day_start}.iso_encoding()) - 1;
  const int hour = static_cast<int>(duration_cast<hours>(ts - day_start).count());
  const int session = static_cast<int>(session_of_hour(hour));
  return TimeSlot{day * kSessionsPerDay + session, day, session};
}

int slot_id(Timestamp ts, TimeMode mode) {
  const TimeSlot slot = time_index(ts);
  switch (mode) {
    case TimeMode::Week28: return slot.id;
    case TimeMode::Hour4: return slot.session;
    case TimeMode::Dow7: return slot.day;
  }
  return slot.id;
}

int slot_count(TimeMode mode) {
  switch (mode) {
    case TimeMode::Week28: return kWeekSlots;
    case TimeMode::Hour4: return kSessionsPerDay;
    case TimeMode::Dow7: return kDaysPerWeek;
  }
  return kWeekSlots;
}

std::optional<TimeMode> parse_time_mode(std::string_view text) {
  if (text == "28") return TimeMode::Week28;
  if (text == "hour4") return TimeMode::Hour4;
  if (text == "dow7") return TimeMode::Dow7;
  return std::nullopt;
}

std::string_view to_string(TimeMode mode) {
  switch (mode) {
    case TimeMode::Week28: return "28";
    case TimeMode::Hour4: return "hour4";
    case TimeMode::Dow7: return "dow7";
  }
  return "28";
}

std::optional<TimeMode> time_mode_for_slot_count(int count) {
  for (TimeMode m : {TimeMode::Week28, TimeMode::Hour4, TimeMode::Dow7}) {
    if (slot_count(m) == count) return m;
  }
  return std::nullopt;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 16 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':') {
    return std::nullopt;
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  if (!parse_fixed(text, 0, 4, y) || !parse_fixed(text, 5, 2, mo) || !parse_fixed(text, 8, 2, d) ||
      !parse_fixed(text, 11, 2, h) || !parse_fixed(text, 14, 2, mi)) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Timestamp{sys_days{ymd}} + hours{h} + minutes{mi};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_start = floor<days>(ts);
  const year_month_day ymd{day_start};
  const auto minute_of_day = (ts - day_start).count();
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     minute_of_day / 60, minute_of_day % 60);
}

}  // namespace edhg
