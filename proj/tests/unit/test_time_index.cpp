#include <doctest.h>

#include <set>

#include "edhg/time_index.hpp"

using namespace edhg;
using namespace std::chrono;

namespace {
Timestamp ts(const char* s) { return *parse_timestamp(s); }
}  // namespace

TEST_CASE("time_index maps the documented instants") {
  // 2016-09-05 is a Monday.
  CHECK(time_index(ts("2016-09-05T08:00")) == TimeSlot{0, 0, 0});
  CHECK(time_index(ts("2016-09-11T23:59")) == TimeSlot{26, 6, 2});
  CHECK(time_index(ts("2016-09-07T05:59")) == TimeSlot{11, 2, 3});
}

TEST_CASE("session boundaries") {
  CHECK(session_of_hour(0) == Session::Night);
  CHECK(session_of_hour(5) == Session::Night);
  CHECK(session_of_hour(6) == Session::Morning);
  CHECK(session_of_hour(11) == Session::Morning);
  CHECK(session_of_hour(12) == Session::Afternoon);
  CHECK(session_of_hour(16) == Session::Afternoon);
  CHECK(session_of_hour(17) == Session::Evening);
  CHECK(session_of_hour(23) == Session::Evening);
}

TEST_CASE("night stays on its calendar day") {
  // Tuesday 00:30 is Tuesday night, not Monday night.
  CHECK(time_index(ts("2016-09-06T00:30")) == TimeSlot{7, 1, 3});
}

TEST_CASE("image of a week is exactly 0..27 with id = day*4 + session") {
  std::set<int> seen;
  const Timestamp monday = ts("2016-09-05T00:00");
  for (int m = 0; m < 7 * 24 * 60; ++m) {
    const TimeSlot s = time_index(monday + minutes{m});
    CHECK(s.id == s.day * 4 + s.session);
    seen.insert(s.id);
  }
  CHECK(seen.size() == 28);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 27);
}

TEST_CASE("alternative granularities") {
  const Timestamp sat_evening = ts("2016-09-10T18:00");
  CHECK(slot_id(sat_evening, TimeMode::Week28) == 22);
  CHECK(slot_id(sat_evening, TimeMode::Hour4) == 2);
  CHECK(slot_id(sat_evening, TimeMode::Dow7) == 5);
  CHECK(slot_count(TimeMode::Week28) == 28);
  CHECK(slot_count(TimeMode::Hour4) == 4);
  CHECK(slot_count(TimeMode::Dow7) == 7);
  CHECK(parse_time_mode("28") == TimeMode::Week28);
  CHECK(parse_time_mode("hour4") == TimeMode::Hour4);
  CHECK(parse_time_mode("dow7") == TimeMode::Dow7);
  CHECK_FALSE(parse_time_mode("hour").has_value());
  for (auto mode : {TimeMode::Week28, TimeMode::Hour4, TimeMode::Dow7}) {
    CHECK(parse_time_mode(to_string(mode)) == mode);
    CHECK(time_mode_for_slot_count(slot_count(mode)) == mode);
  }
  CHECK_FALSE(time_mode_for_slot_count(5).has_value());
}

TEST_CASE("timestamp parsing is strict") {
  CHECK(parse_timestamp("2016-09-05T08:15").has_value());
  CHECK_FALSE(parse_timestamp("not-a-date").has_value());
  CHECK_FALSE(parse_timestamp("2016-02-30T08:15").has_value());
  CHECK_FALSE(parse_timestamp("2016-09-05 08:15").has_value());
  CHECK_FALSE(parse_timestamp("2016-09-05T24:00").has_value());
  CHECK_FALSE(parse_timestamp("2016-09-05T08:60").has_value());
  CHECK_FALSE(parse_timestamp("2016-9-05T08:15").has_value());
  CHECK_FALSE(parse_timestamp("2016-09-05T08:15:00").has_value());
  CHECK_FALSE(parse_timestamp("").has_value());
  CHECK(parse_timestamp("2016-02-29T23:59").has_value());
}

TEST_CASE("format_timestamp inverts parse_timestamp") {
  for (const char* s : {"2016-09-05T08:15", "2000-01-01T00:00", "2016-02-29T23:59"}) {
    CHECK(format_timestamp(ts(s)) == s);
  }
}
