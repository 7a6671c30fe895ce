#include "edhg/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "edhg/error.hpp"

namespace edhg {

namespace {

constexpr std::string_view kCheckInHeader = "user_id,timestamp,poi_id";
constexpr std::string_view kVenueHeader = "poi_id,category,functionalities";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::optional<Category> parse_category(std::string_view name) {
  for (int i = 0; i < kCategoryCount; ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::optional<Functionality> parse_functionality(std::string_view name) {
  for (int i = 0; i < kFunctionalityCount; ++i) {
    if (kFunctionalityNames[i] == name) return static_cast<Functionality>(i);
  }
  return std::nullopt;
}

CheckInParse parse_checkins(std::istream& in, const ParseOptions& options) {
  CheckInParse result;
  std::string line;
  if (!std::getline(in, line)) {
    if (in.bad()) throw IoError("failed to read check-in stream");
    throw ValidationError("check-in stream is empty (missing header)");
  }
  strip_cr(line);
  if (line != kCheckInHeader) {
    throw ValidationError(fmt::format("unexpected check-in header '{}'", line));
  }

  std::size_t line_no = 1;
  std::size_t data_lines = 0;
  while (std::getline(in, line)) {
    ++line_no;
    ++data_lines;
    strip_cr(line);
    const auto cols = split(line, ',');
    if (cols.size() != 3) {
      result.malformed.push_back({line_no, fmt::format("expected 3 columns, got {}", cols.size())});
      continue;
    }
    if (cols[0].empty() || cols[2].empty()) {
      result.malformed.push_back({line_no, "empty identifier"});
      continue;
    }
    const auto ts = parse_timestamp(cols[1]);
    if (!ts) {
      result.malformed.push_back({line_no, fmt::format("bad timestamp '{}'", cols[1])});
      continue;
    }
    if (options.window && !options.window->contains(*ts)) {
      result.out_of_window.push_back({line_no, "timestamp outside observation window"});
      continue;
    }
    result.records.push_back(CheckIn{std::string(cols[0]), *ts, std::string(cols[2])});
  }
  if (in.bad()) throw IoError("failed while reading check-in stream");

  if (data_lines > 0 && static_cast<double>(result.malformed.size()) >
                            options.max_malformed_fraction * static_cast<double>(data_lines)) {
    std::string offenders;
    for (std::size_t i = 0; i < result.malformed.size() && i < 10; ++i) {
      if (i) offenders += ", ";
      offenders += std::to_string(result.malformed[i].line);
    }
    throw ValidationError(fmt::format("{} of {} check-in lines are malformed (first offenders: {})",
                                      result.malformed.size(), data_lines, offenders));
  }
  return result;
}

CheckInParse read_checkins(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open check-in file {}", path.string()));
  return parse_checkins(in, options);
}

std::vector<VenueProfile> parse_venues(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    if (in.bad()) throw IoError("failed to read venue stream");
    throw ValidationError("venue stream is empty (missing header)");
  }
  strip_cr(line);
  if (line != kVenueHeader) throw ValidationError(fmt::format("unexpected venue header '{}'", line));

  std::vector<VenueProfile> venues;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto cols = split(line, ',');
    if (cols.size() != 3 || cols[0].empty()) {
      throw ValidationError(fmt::format("venue line {}: malformed", line_no));
    }
    VenueProfile venue;
    venue.poi_id = std::string(cols[0]);
    const auto cat = parse_category(cols[1]);
    if (!cat) throw ValidationError(fmt::format("venue line {}: unknown category '{}'", line_no, cols[1]));
    venue.category = *cat;
    for (auto name : split(cols[2], '|')) {
      const auto f = parse_functionality(name);
      if (!f) {
        throw ValidationError(
            fmt::format("venue line {}: unknown functionality '{}'", line_no, name));
      }
      venue.functionalities.push_back(*f);
    }
    std::sort(venue.functionalities.begin(), venue.functionalities.end());
    venue.functionalities.erase(
        std::unique(venue.functionalities.begin(), venue.functionalities.end()),
        venue.functionalities.end());
    if (!seen.emplace(venue.poi_id, venues.size()).second) {
      throw ValidationError(fmt::format("venue line {}: duplicate poi '{}'", line_no, venue.poi_id));
    }
    venues.push_back(std::move(venue));
  }
  if (in.bad()) throw IoError("failed while reading venue stream");
  return venues;
}

std::vector<VenueProfile> read_venues(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open venue file {}", path.string()));
  return parse_venues(in);
}

void write_checkins(std::ostream& out, std::span<const CheckIn> records) {
  out << kCheckInHeader << '\n';
  for (const auto& r : records) {
    out << r.user_id << ',' << format_timestamp(r.timestamp) << ',' << r.poi_id << '\n';
  }
}

void write_venues(std::ostream& out, std::span<const VenueProfile> venues) {
  out << kVenueHeader << '\n';
  for (const auto& v : venues) {
    out << v.poi_id << ',' << to_string(v.category) << ',';
    for (std::size_t i = 0; i < v.functionalities.size(); ++i) {
      if (i) out << '|';
      out << to_string(v.functionalities[i]);
    }
    out << '\n';
  }
}

Dataset::Dataset(std::vector<std::string> users, std::vector<VenueProfile> venues,
                 std::vector<Record> records)
    : users_(std::move(users)), venues_(std::move(venues)), records_(std::move(records)) {
  for (const auto& r : records_) {
    if (r.user >= users_.size() || r.poi >= venues_.size()) {
      throw ValidationError("record references a node outside the dataset universe");
    }
  }
  std::stable_sort(records_.begin(), records_.end(), [](const Record& a, const Record& b) {
    if (a.user != b.user) return a.user < b.user;
    return a.time < b.time;
  });
  offsets_.assign(users_.size() + 1, 0);
  for (const auto& r : records_) ++offsets_[r.user + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  for (std::size_t i = 0; i < users_.size(); ++i) {
    user_lookup_.emplace(users_[i], static_cast<std::uint32_t>(i));
  }
  for (std::size_t i = 0; i < venues_.size(); ++i) {
    poi_lookup_.emplace(venues_[i].poi_id, static_cast<std::uint32_t>(i));
  }
}

std::span<const Record> Dataset::records_of(std::uint32_t user) const {
  if (user >= users_.size()) return {};
  return std::span<const Record>(records_).subspan(offsets_[user],
                                                   offsets_[user + 1] - offsets_[user]);
}

std::optional<std::uint32_t> Dataset::user_index(std::string_view id) const {
  auto it = user_lookup_.find(std::string(id));
  if (it == user_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Dataset::poi_index(std::string_view id) const {
  auto it = poi_lookup_.find(std::string(id));
  if (it == poi_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<CheckIn> Dataset::to_checkins() const {
  std::vector<CheckIn> out;
  out.reserve(records_.size());
  for (const auto& r : records_) {
    out.push_back(CheckIn{users_[r.user], r.time, venues_[r.poi].poi_id});
  }
  return out;
}

Dataset filter_users(std::span<const CheckIn> checkins, std::span<const VenueProfile> venues,
                     int min_checkins) {
  if (min_checkins < 1) throw std::invalid_argument("min_checkins must be >= 1");

  std::unordered_map<std::string_view, std::uint32_t> poi_of;
  for (std::size_t i = 0; i < venues.size(); ++i) {
    poi_of.emplace(venues[i].poi_id, static_cast<std::uint32_t>(i));
  }
  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& c : checkins) {
    if (!poi_of.contains(c.poi_id)) {
      throw ValidationError(fmt::format("check-in references unknown poi '{}'", c.poi_id));
    }
    ++counts[c.user_id];
  }

  std::vector<std::string> users;
  for (const auto& [id, n] : counts) {
    if (n >= static_cast<std::size_t>(min_checkins)) users.emplace_back(id);
  }
  std::sort(users.begin(), users.end());
  std::unordered_map<std::string_view, std::uint32_t> user_of;
  for (std::size_t i = 0; i < users.size(); ++i) {
    user_of.emplace(users[i], static_cast<std::uint32_t>(i));
  }

  std::vector<Record> records;
  for (const auto& c : checkins) {
    auto it = user_of.find(c.user_id);
    if (it == user_of.end()) continue;
    records.push_back(Record{it->second, poi_of.at(c.poi_id), c.timestamp});
  }
  return Dataset(std::move(users), std::vector<VenueProfile>(venues.begin(), venues.end()),
                 std::move(records));
}

std::vector<Stay> merge_stays(std::span<const Record> records, int gap_minutes) {
  if (gap_minutes < 1) throw std::invalid_argument("gap_minutes must be >= 1");
  std::vector<Stay> stays;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Record& r = records[i];
    if (i > 0 && r.time < records[i - 1].time) {
      throw std::invalid_argument("merge_stays requires time-sorted records");
    }
    if (!stays.empty()) {
      Stay& cur = stays.back();
      if (cur.poi == r.poi && (r.time - cur.end).count() <= gap_minutes) {
        cur.end = r.time;
        ++cur.records;
        continue;
      }
    }
    stays.push_back(Stay{r.poi, r.time, r.time, 1});
  }
  return stays;
}

}  // namespace edhg
