#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "edhg/time_index.hpp"
#include "edhg/venue.hpp"

namespace edhg {

struct CheckIn {
  std::string user_id;
  Timestamp timestamp;
  std::string poi_id;

  friend bool operator==(const CheckIn&, const CheckIn&) = default;
};

struct LineError {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string reason;
};

// Half-open [begin, end).
struct ObservationWindow {
  Timestamp begin;
  Timestamp end;
  bool contains(Timestamp t) const { return t >= begin && t < end; }
};

struct ParseOptions {
  std::optional<ObservationWindow> window;
  double max_malformed_fraction = 0.01;
};

struct CheckInParse {
  std::vector<CheckIn> records;  // file order
  std::vector<LineError> malformed;
  std::vector<LineError> out_of_window;
};

// Throws ValidationError when the malformed share of data lines exceeds
// options.max_malformed_fraction; the message lists the first 10 offenders.
CheckInParse parse_checkins(std::istream& in, const ParseOptions& options = {});
CheckInParse read_checkins(const std::filesystem::path& path, const ParseOptions& options = {});

std::vector<VenueProfile> parse_venues(std::istream& in);
std::vector<VenueProfile> read_venues(const std::filesystem::path& path);

void write_checkins(std::ostream& out, std::span<const CheckIn> records);
void write_venues(std::ostream& out, std::span<const VenueProfile> venues);

// Interned check-in. `user` indexes Dataset::users(), `poi` indexes Dataset::venues().
struct Record {
  std::uint32_t user = 0;
  std::uint32_t poi = 0;
  Timestamp time;

  friend bool operator==(const Record&, const Record&) = default;
};

// Check-ins over a fixed user and POI universe, grouped by user and sorted by
// time within each user (stable on ties).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> users, std::vector<VenueProfile> venues,
          std::vector<Record> records);

  const std::vector<std::string>& users() const { return users_; }
  const std::vector<VenueProfile>& venues() const { return venues_; }
  const std::vector<Record>& records() const { return records_; }

  std::size_t user_count() const { return users_.size(); }
  std::size_t poi_count() const { return venues_.size(); }
  std::span<const Record> records_of(std::uint32_t user) const;

  std::optional<std::uint32_t> user_index(std::string_view id) const;
  std::optional<std::uint32_t> poi_index(std::string_view id) const;

  std::vector<CheckIn> to_checkins() const;

 private:
  std::vector<std::string> users_;
  std::vector<VenueProfile> venues_;
  std::vector<Record> records_;
  std::vector<std::size_t> offsets_;  // users_.size() + 1 entries
  std::unordered_map<std::string, std::uint32_t> user_lookup_;
  std::unordered_map<std::string, std::uint32_t> poi_lookup_;
};

// Keeps users with at least `min_checkins` records. Throws ValidationError on
// check-ins at POIs absent from `venues`, std::invalid_argument on min < 1.
Dataset filter_users(std::span<const CheckIn> checkins, std::span<const VenueProfile> venues,
                     int min_checkins = 100);

struct Stay {
  std::uint32_t poi = 0;
  Timestamp start;
  Timestamp end;
  std::size_t records = 0;

  friend bool operator==(const Stay&, const Stay&) = default;
};

// Collapses consecutive same-POI records no more than gap_minutes apart.
// Throws std::invalid_argument when `records` is not time-sorted.
std::vector<Stay> merge_stays(std::span<const Record> records, int gap_minutes = 10);

}  // namespace edhg
