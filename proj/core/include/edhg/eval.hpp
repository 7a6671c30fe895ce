#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "edhg/embedding.hpp"
#include "edhg/ingest.hpp"
#include "edhg/predict.hpp"
#include "edhg/time_index.hpp"

namespace edhg {

// ---------------------------------------------------------------------------
// Chronological split

struct Split {
  Dataset train;
  Dataset test;
};

// ceil(frac * n), robust to frac * n landing a rounding error above an integer.
std::size_t prefix_size(std::size_t n, double frac);

// Per user, the first ceil(frac * n) records go to train. Users with fewer
// than 2 records keep everything in train.
Split split_chrono(const Dataset& data, double train_frac = 0.8);

// Per user, the first ceil(frac * n) records of `train`.
Dataset truncate_per_user(const Dataset& train, double frac);

// ---------------------------------------------------------------------------
// accuracy@k

// Returns at least the top `k` POIs for (user, time).
using Predictor = std::function<RankedList(std::uint32_t user, Timestamp time, std::size_t k)>;

struct BucketCount {
  std::size_t hits = 0;
  std::size_t n = 0;
  double accuracy() const { return n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0; }
};

enum class Bucket { Visited, Unvisited, Total };

struct AccuracyRow {
  std::size_t k = 0;
  BucketCount visited;
  BucketCount unvisited;
  BucketCount total;

  const BucketCount& operator[](Bucket b) const;
};

struct AccuracyReport {
  std::vector<AccuracyRow> rows;  // ascending k
  const AccuracyRow& at(std::size_t k) const;
};

inline const std::vector<std::size_t> kDefaultKs = {1, 3, 5, 10};

// A test record (u, t, b) hits at k when b is in the predictor's top k; it is
// `visited` when u has a train record at b.
AccuracyReport accuracy_at_k(const Predictor& predictor, const Dataset& train,
                             const Dataset& test, std::span<const std::size_t> ks = kDefaultKs);
inline AccuracyReport accuracy_at_k(const Predictor& predictor, const Split& split,
                                    std::span<const std::size_t> ks = kDefaultKs) {
  return accuracy_at_k(predictor, split.train, split.test, ks);
}

// `bucket,k,hits,n,accuracy`
void write_accuracy_csv(std::ostream& out, const AccuracyReport& report);

Predictor embedding_predictor(const EmbeddingStore& store, TimeMode mode);

// ---------------------------------------------------------------------------
// Naive Bayes baseline: score(b | u, t) = count(u, t, b) / total, unsmoothed.

class NbcModel {
 public:
  // Throws std::invalid_argument on an empty train set.
  static NbcModel fit(const Dataset& train, TimeMode mode = TimeMode::Week28);

  std::size_t total() const { return total_; }
  std::size_t poi_count(std::uint32_t poi) const { return poi_counts_[poi]; }
  std::size_t count(std::uint32_t user, std::uint32_t slot, std::uint32_t poi) const;
  double score(std::uint32_t user, std::uint32_t slot, std::uint32_t poi) const;
  TimeMode time_mode() const { return mode_; }

  // Ranked by count(u,t,b), then count(b), then ascending index.
  RankedList predict(std::uint32_t user, std::uint32_t slot, std::size_t k) const;

 private:
  TimeMode mode_ = TimeMode::Week28;
  std::size_t slots_ = 0;
  std::size_t total_ = 0;
  std::vector<std::size_t> poi_counts_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint32_t, std::size_t>>> cells_;
};

Predictor nbc_predictor(const NbcModel& model);

// ---------------------------------------------------------------------------
// Co-visitation and location proxies for friendship

// Symmetric overlap minutes, stored once per unordered pair.
class CovisitMatrix {
 public:
  void add(std::uint32_t u, std::uint32_t v, std::int64_t minutes);
  std::int64_t get(std::uint32_t u, std::uint32_t v) const;
  std::size_t pair_count() const { return cells_.size(); }
  // (u, v, minutes) with u < v, ascending.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>> pairs() const;

 private:
  std::unordered_map<std::uint64_t, std::int64_t> cells_;
};

// stays[u] are user u's stays (from merge_stays). Overlap minutes are summed
// per POI over pairs of users whose stays intersect.
CovisitMatrix covisit(std::span<const std::vector<Stay>> stays);
std::vector<std::vector<Stay>> stays_per_user(const Dataset& data, int gap_minutes = 10);

// POIs by descending visit count, ties and unvisited POIs by ascending index.
std::vector<std::uint32_t> poi_ranking(const Dataset& data, std::uint32_t user);
// Discordant pairs / C(n, 2) between two permutations of the same n items.
double kendall_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
double location_distance(const Dataset& train, std::uint32_t u, std::uint32_t v);

// Top `n` users by train record count, ties by ascending index.
std::vector<std::uint32_t> active_users(const Dataset& train, std::size_t n);
// Users with the largest overlap with u, ties by ascending index.
std::vector<std::uint32_t> covisit_friends(const CovisitMatrix& m, std::size_t user_count,
                                           std::uint32_t user, std::size_t n = 10);
// Users with the smallest Kendall distance to u, ties by ascending index.
std::vector<std::uint32_t> location_friends(std::span<const std::vector<std::uint32_t>> rankings,
                                            std::uint32_t user, std::size_t n = 10);

// (1/|U|) sum_{i in U} sum_{j in F_i} 1/rank_i(j). Throws
// std::invalid_argument when a truth set has the wrong size or a member is
// missing from the suggestion list.
double mrr(const std::map<std::uint32_t, RankedList>& suggestions,
           const std::map<std::uint32_t, std::vector<std::uint32_t>>& truth,
           std::span<const std::uint32_t> active, std::size_t truth_size = 10);

// ---------------------------------------------------------------------------
// Learning curves

using TrainFn = std::function<Predictor(const Dataset& train_subset)>;

struct CurvePoint {
  double fraction = 0.0;
  AccuracyReport report;
};

// Trains on growing per-user prefixes of split.train and evaluates each on
// split.test. The visited bucket always refers to the full train split.
std::vector<CurvePoint> learning_curve(const Split& split, std::span<const double> fractions,
                                       const TrainFn& train_fn,
                                       std::span<const std::size_t> ks = kDefaultKs);

// `fraction,bucket,k,accuracy`
void write_learning_curve_csv(std::ostream& out, std::span<const CurvePoint> curve);

// ---------------------------------------------------------------------------
// Embedding diagnostics

// Mean share of each user's k nearest (Euclidean) users that carry the same label.
double knn_label_purity(const EmbeddingStore& store, std::span<const int> label,
                        std::size_t k = 2);

}  // namespace edhg
