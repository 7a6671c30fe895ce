#include "edhg/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "edhg/alias_table.hpp"
#include "edhg/error.hpp"
#include "edhg/rng.hpp"

namespace edhg {

namespace {

// Session minutes: Morning 06-12, Afternoon 12-17, Evening 17-24, Night 00-06.
constexpr int kSessionStartMinute[kSessionsPerDay] = {6 * 60, 12 * 60, 17 * 60, 0};
constexpr int kSessionLengthMinutes[kSessionsPerDay] = {360, 300, 420, 360};

// Propensity in [-1, 1] per functionality, [weekday | weekend][session].
constexpr double kModulation[kFunctionalityCount][2][kSessionsPerDay] = {
    /* Residence   */ {{-0.3, -0.5, 0.5, 1.0}, {0.2, 0.0, 0.6, 1.0}},
    /* Recreation  */ {{-0.6, 0.0, 0.6, -0.8}, {0.0, 0.6, 0.8, -0.5}},
    /* Dining      */ {{-0.2, 0.9, 0.8, -1.0}, {-0.2, 1.0, 0.4, -1.0}},
    /* Exercise    */ {{-0.3, -0.2, 1.0, -0.9}, {0.2, 0.5, 0.6, -0.9}},
    /* Library/Lab */ {{0.2, 0.6, 0.6, -0.6}, {-0.4, 0.8, 0.5, -0.7}},
    /* Classrooms  */ {{1.0, 0.7, -0.5, -1.0}, {-0.2, -0.8, -0.9, -1.0}},
    /* Others      */ {{0.4, 0.4, -0.5, -1.0}, {-0.6, -0.6, -0.8, -1.0}},
};

Functionality primary_functionality(Category c, std::size_t ordinal) {
  switch (c) {
    case Category::Academic:
      return ordinal % 2 == 0 ? Functionality::Classrooms : Functionality::LibraryLab;
    case Category::Residential: return Functionality::Residence;
    case Category::Administration: return Functionality::Others;
    case Category::Auxiliary: {
      constexpr Functionality aux[] = {Functionality::Dining, Functionality::Recreation,
                                       Functionality::Exercise};
      return aux[ordinal % 3];
    }
  }
  return Functionality::Others;
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(static_cast<std::uint32_t>(i))]);
  }
}

std::vector<double> zipf_over(std::vector<std::uint32_t> items, std::size_t n, double exponent,
                              Rng& rng) {
  shuffle(items, rng);
  std::vector<double> w(n, 0.0);
  for (std::size_t r = 0; r < items.size(); ++r) {
    w[items[r]] = 1.0 / std::pow(static_cast<double>(r + 1), exponent);
  }
  return w;
}

void normalize(std::vector<double>& v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= total;
}

Timestamp draw_time(const GenConfig& cfg, int week_lo, int week_hi, int day, int session, Rng& rng) {
  const int week = week_lo + static_cast<int>(rng.below(static_cast<std::uint32_t>(week_hi - week_lo)));
  const int minute = kSessionStartMinute[session] +
                     static_cast<int>(rng.below(static_cast<std::uint32_t>(kSessionLengthMinutes[session])));
  return cfg.start + std::chrono::days{week * 7 + day} + std::chrono::minutes{minute};
}

}  // namespace

void GenConfig::validate() const {
  if (n_users < 1 || n_clusters < 1 || records_per_user < 1 || weeks < 1) {
    throw ValidationError("users, clusters, records per user and weeks must be positive");
  }
  if (n_clusters > n_users) throw ValidationError("more clusters than users");
  if (n_pois < static_cast<std::size_t>(kCategoryCount)) throw ValidationError("need at least 4 POIs");
  if (n_pois / (n_clusters + 1) < 1) throw ValidationError("too few POIs for the cluster count");
  if (!(cluster_poi_affinity > 0.0 && cluster_poi_affinity <= 1.0)) {
    throw ValidationError("cluster_poi_affinity must lie in (0, 1]");
  }
  if (!(temporal_sharpness >= 0.0)) throw ValidationError("temporal_sharpness must be >= 0");
}

Population gen_population(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Population pop;

  const int width = static_cast<int>(std::to_string(cfg.n_users - 1).size());
  for (std::size_t u = 0; u < cfg.n_users; ++u) pop.user_ids.push_back(fmt::format("u{:0{}d}", u, width));
  const int poi_width = static_cast<int>(std::to_string(cfg.n_pois - 1).size());
  std::array<std::size_t, kCategoryCount> per_category{};
  for (std::size_t b = 0; b < cfg.n_pois; ++b) {
    VenueProfile v;
    v.poi_id = fmt::format("b{:0{}d}", b, poi_width);
    v.category = static_cast<Category>(b % kCategoryCount);
    v.functionalities.push_back(primary_functionality(v.category, per_category[b % kCategoryCount]++));
    if (rng.uniform01() < 0.4) {
      v.functionalities.push_back(static_cast<Functionality>(rng.below(kFunctionalityCount)));
    }
    std::sort(v.functionalities.begin(), v.functionalities.end());
    v.functionalities.erase(std::unique(v.functionalities.begin(), v.functionalities.end()),
                            v.functionalities.end());
    pop.venues.push_back(std::move(v));
  }

  GroundTruth& truth = pop.truth;
  truth.n_clusters = cfg.n_clusters;
  truth.cluster_of.resize(cfg.n_users);
  for (std::size_t u = 0; u < cfg.n_users; ++u) truth.cluster_of[u] = static_cast<int>(u % cfg.n_clusters);
  shuffle(truth.cluster_of, rng);

  std::vector<std::uint32_t> pois(cfg.n_pois);
  std::iota(pois.begin(), pois.end(), 0u);
  shuffle(pois, rng);
  const std::size_t block = cfg.n_pois / (cfg.n_clusters + 1);
  truth.preferred.resize(cfg.n_clusters);
  for (std::size_t c = 0; c < cfg.n_clusters; ++c) {
    truth.preferred[c].assign(pois.begin() + static_cast<std::ptrdiff_t>(c * block),
                              pois.begin() + static_cast<std::ptrdiff_t>((c + 1) * block));
    std::sort(truth.preferred[c].begin(), truth.preferred[c].end());
  }

  std::vector<std::uint32_t> all(cfg.n_pois);
  std::iota(all.begin(), all.end(), 0u);
  const std::vector<double> global = zipf_over(all, cfg.n_pois, 0.7, rng);

  // Time weights per POI and slot, with a small per-POI jitter so POIs sharing
  // a functionality still differ.
  std::vector<double> time_weight(cfg.n_pois * kWeekSlots);
  for (std::size_t b = 0; b < cfg.n_pois; ++b) {
    double jitter[kSessionsPerDay];
    for (double& j : jitter) j = 0.6 * rng.uniform01() - 0.3;
    const auto& funcs = pop.venues[b].functionalities;
    for (int slot = 0; slot < kWeekSlots; ++slot) {
      const int day = slot / kSessionsPerDay;
      const int session = slot % kSessionsPerDay;
      const int weekend = day >= 5 ? 1 : 0;
      double m = 0.0;
      for (Functionality f : funcs) m += kModulation[static_cast<int>(f)][weekend][session];
      m = m / static_cast<double>(funcs.size()) + jitter[session];
      time_weight[b * kWeekSlots + static_cast<std::size_t>(slot)] = std::exp(cfg.temporal_sharpness * m);
    }
  }

  truth.preference.resize(cfg.n_clusters * kWeekSlots);
  for (std::size_t c = 0; c < cfg.n_clusters; ++c) {
    const std::vector<double> own = zipf_over(truth.preferred[c], cfg.n_pois, 0.5, rng);
    for (int slot = 0; slot < kWeekSlots; ++slot) {
      std::vector<double> own_t(cfg.n_pois), global_t(cfg.n_pois);
      for (std::size_t b = 0; b < cfg.n_pois; ++b) {
        const double tw = time_weight[b * kWeekSlots + static_cast<std::size_t>(slot)];
        own_t[b] = own[b] * tw;
        global_t[b] = global[b] * tw;
      }
      normalize(own_t);
      normalize(global_t);
      std::vector<double> row(cfg.n_pois);
      for (std::size_t b = 0; b < cfg.n_pois; ++b) {
        row[b] = cfg.cluster_poi_affinity * own_t[b] + (1.0 - cfg.cluster_poi_affinity) * global_t[b];
      }
      normalize(row);
      truth.preference[c * kWeekSlots + static_cast<std::size_t>(slot)] = std::move(row);
    }
  }

  truth.censored_poi.assign(cfg.n_users, -1);
  if (cfg.censored_records_per_user > 0) {
    for (std::size_t u = 0; u < cfg.n_users; ++u) {
      const auto& block_pois = truth.preferred[static_cast<std::size_t>(truth.cluster_of[u])];
      if (block_pois.size() < 2) continue;
      truth.censored_poi[u] = block_pois[rng.below(static_cast<std::uint32_t>(block_pois.size()))];
    }
  }
  return pop;
}

GeneratedData gen_checkins(const GenConfig& cfg, const Population& pop) {
  cfg.validate();
  Rng rng(cfg.seed ^ 0xc2b2ae3d27d4eb4fULL);
  const GroundTruth& truth = pop.truth;

  std::vector<AliasTable> tables;
  tables.reserve(truth.preference.size());
  for (const auto& row : truth.preference) tables.emplace_back(row);
  const AliasTable sessions(std::span<const double>(kSessionPrior, kSessionsPerDay));

  std::vector<Record> main, supplement;
  main.reserve(cfg.n_users * cfg.records_per_user);
  for (std::uint32_t u = 0; u < cfg.n_users; ++u) {
    const int cluster = truth.cluster_of[u];
    const std::int64_t censored = truth.censored_poi[u];
    for (std::size_t r = 0; r < cfg.records_per_user; ++r) {
      const int day = static_cast<int>(rng.below(kDaysPerWeek));
      const int session = static_cast<int>(sessions.sample(rng));
      const Timestamp t = draw_time(cfg, 0, cfg.weeks, day, session, rng);
      const auto& table = tables[static_cast<std::size_t>(cluster) * kWeekSlots +
                                 static_cast<std::size_t>(day * kSessionsPerDay + session)];
      std::uint32_t poi = table.sample(rng);
      while (static_cast<std::int64_t>(poi) == censored) poi = table.sample(rng);
      main.push_back(Record{u, poi, t});
    }

    if (censored < 0) continue;
    // Slots for the withheld POI follow P(slot | POI) under the session prior.
    std::vector<double> slot_mass(kWeekSlots);
    for (int slot = 0; slot < kWeekSlots; ++slot) {
      slot_mass[static_cast<std::size_t>(slot)] =
          kSessionPrior[slot % kSessionsPerDay] * truth.row(cluster, slot)[static_cast<std::size_t>(censored)];
    }
    const AliasTable slot_table(slot_mass);
    const int late_weeks = std::max(1, cfg.weeks / 5);
    for (std::size_t r = 0; r < cfg.censored_records_per_user; ++r) {
      const int slot = static_cast<int>(slot_table.sample(rng));
      const Timestamp t = draw_time(cfg, cfg.weeks - late_weeks, cfg.weeks, slot / kSessionsPerDay,
                                    slot % kSessionsPerDay, rng);
      supplement.push_back(Record{u, static_cast<std::uint32_t>(censored), t});
    }
  }
  return GeneratedData{Dataset(pop.user_ids, pop.venues, std::move(main)),
                       Dataset(pop.user_ids, pop.venues, std::move(supplement))};
}

void write_truth(std::ostream& out, const Population& population) {
  out << "user_id,cluster\n";
  for (std::size_t u = 0; u < population.user_ids.size(); ++u) {
    out << population.user_ids[u] << ',' << population.truth.cluster_of[u] << '\n';
  }
}

}  // namespace edhg
