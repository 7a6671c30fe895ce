#pragma once

#include <string>
#include <vector>

#include "edhg/ingest.hpp"
#include "edhg/time_index.hpp"
#include "edhg/venue.hpp"

namespace edhg::fixtures {

inline Timestamp at(const char* text) { return *parse_timestamp(text); }

inline VenueProfile venue(std::string id, Category c, std::vector<Functionality> f) {
  return VenueProfile{std::move(id), c, std::move(f)};
}

// Two users, three buildings, three slots, three activities: the eight-record
// toy campus.
inline std::vector<VenueProfile> toy_venues() {
  return {
      venue("b1", Category::Academic, {Functionality::Classrooms}),
      venue("b2", Category::Auxiliary, {Functionality::Dining, Functionality::Recreation}),
      venue("b3", Category::Residential, {Functionality::Residence}),
  };
}

inline std::vector<CheckIn> toy_checkins() {
  return {
      {"u1", at("2016-09-05T08:15"), "b1"},  // Mon morning
      {"u1", at("2016-09-05T12:30"), "b2"},  // Mon afternoon
      {"u1", at("2016-09-05T13:10"), "b2"},  // Mon afternoon
      {"u1", at("2016-09-12T09:00"), "b1"},  // Mon morning
      {"u2", at("2016-09-05T08:40"), "b1"},  // Mon morning
      {"u2", at("2016-09-05T19:00"), "b3"},  // Mon evening
      {"u2", at("2016-09-06T19:30"), "b3"},  // Tue evening
      {"u2", at("2016-09-05T12:45"), "b2"},  // Mon afternoon
  };
}

}  // namespace edhg::fixtures
