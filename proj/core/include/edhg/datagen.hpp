#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "edhg/ingest.hpp"
#include "edhg/time_index.hpp"
#include "edhg/venue.hpp"

namespace edhg {

// Synthetic campus: users belong to planted clusters, each cluster prefers its
// own disjoint block of POIs, and visit propensity depends on the time slot
// through the POI's functionalities.
struct GenConfig {
  std::size_t n_users = 6250;
  std::size_t n_pois = 221;
  std::size_t n_clusters = 2;
  std::size_t records_per_user = 150;
  std::uint64_t seed = 7;
  int weeks = 16;
  double cluster_poi_affinity = 0.8;  // mass on the cluster's own POI block
  double temporal_sharpness = 1.0;    // 0 disables time-of-week modulation
  // Cold-start protocol: per user one POI of the cluster block is withheld
  // from the main log and emitted only in a supplementary file with this many
  // records. 0 disables censoring.
  std::size_t censored_records_per_user = 4;
  Timestamp start = Timestamp{std::chrono::sys_days{std::chrono::year{2016} / 8 / 22}};

  // Throws ValidationError on inconsistent fields.
  void validate() const;
};

struct GroundTruth {
  std::size_t n_clusters = 0;
  std::vector<int> cluster_of;                       // per user
  std::vector<std::vector<std::uint32_t>> preferred; // per cluster, its POI block
  std::vector<std::vector<double>> preference;       // [cluster * 28 + slot] -> POI distribution
  std::vector<std::int64_t> censored_poi;            // per user, -1 when censoring is off

  const std::vector<double>& row(int cluster, int slot) const {
    return preference[static_cast<std::size_t>(cluster) * kWeekSlots + static_cast<std::size_t>(slot)];
  }
};

struct Population {
  std::vector<std::string> user_ids;  // sorted
  std::vector<VenueProfile> venues;
  GroundTruth truth;
};

struct GeneratedData {
  Dataset checkins;
  Dataset censored;  // supplementary cold-start records, same universe
};

Population gen_population(const GenConfig& config);
GeneratedData gen_checkins(const GenConfig& config, const Population& population);

// Fixed session prior used for timestamps: Morning .3, Afternoon .3, Evening .3, Night .1.
inline constexpr double kSessionPrior[kSessionsPerDay] = {0.3, 0.3, 0.3, 0.1};

// `user_id,cluster`
void write_truth(std::ostream& out, const Population& population);

}  // namespace edhg
