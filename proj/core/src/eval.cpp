#include "edhg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "edhg/log.hpp"

namespace edhg {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::uint64_t inversions(std::vector<std::uint32_t>& v, std::vector<std::uint32_t>& tmp,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t count = inversions(v, tmp, lo, mid) + inversions(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, o = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      count += mid - i;
      tmp[o++] = v[j++];
    } else {
      tmp[o++] = v[i++];
    }
  }
  while (i < mid) tmp[o++] = v[i++];
  while (j < hi) tmp[o++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo), tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return count;
}

constexpr std::string_view bucket_name(Bucket b) {
  switch (b) {
    case Bucket::Visited: return "visited";
    case Bucket::Unvisited: return "unvisited";
    case Bucket::Total: return "total";
  }
  return "total";
}

constexpr Bucket kBuckets[] = {Bucket::Visited, Bucket::Unvisited, Bucket::Total};

}  // namespace

std::size_t prefix_size(std::size_t n, double frac) {
  const double exact = frac * static_cast<double>(n);
  auto size = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::min(size, n);
}

Split split_chrono(const Dataset& data, double train_frac) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw std::invalid_argument("train_frac must lie in (0, 1)");
  }
  std::vector<Record> train, test;
  for (std::uint32_t u = 0; u < data.user_count(); ++u) {
    const auto recs = data.records_of(u);
    std::size_t cut = prefix_size(recs.size(), train_frac);
    if (recs.size() < 2) {
      if (!recs.empty()) log().info("user {} has {} record(s); all kept in train", data.users()[u], recs.size());
      cut = recs.size();
    }
    train.insert(train.end(), recs.begin(), recs.begin() + static_cast<std::ptrdiff_t>(cut));
    test.insert(test.end(), recs.begin() + static_cast<std::ptrdiff_t>(cut), recs.end());
  }
  return Split{Dataset(data.users(), data.venues(), std::move(train)),
               Dataset(data.users(), data.venues(), std::move(test))};
}

Dataset truncate_per_user(const Dataset& train, double frac) {
  std::vector<Record> kept;
  for (std::uint32_t u = 0; u < train.user_count(); ++u) {
    const auto recs = train.records_of(u);
    const std::size_t cut = prefix_size(recs.size(), frac);
    kept.insert(kept.end(), recs.begin(), recs.begin() + static_cast<std::ptrdiff_t>(cut));
  }
  return Dataset(train.users(), train.venues(), std::move(kept));
}

const BucketCount& AccuracyRow::operator[](Bucket b) const {
  switch (b) {
    case Bucket::Visited: return visited;
    case Bucket::Unvisited: return unvisited;
    case Bucket::Total: return total;
  }
  return total;
}

const AccuracyRow& AccuracyReport::at(std::size_t k) const {
  for (const auto& row : rows) {
    if (row.k == k) return row;
  }
  throw std::out_of_range(fmt::format("no accuracy row for k={}", k));
}

AccuracyReport accuracy_at_k(const Predictor& predictor, const Dataset& train,
                             const Dataset& test, std::span<const std::size_t> ks) {
  std::vector<std::size_t> sorted_ks(ks.begin(), ks.end());
  std::sort(sorted_ks.begin(), sorted_ks.end());
  sorted_ks.erase(std::unique(sorted_ks.begin(), sorted_ks.end()), sorted_ks.end());
  AccuracyReport report;
  if (sorted_ks.empty()) return report;
  const std::size_t k_max = sorted_ks.back();

  const std::size_t n_pois = train.poi_count();
  std::vector<std::uint8_t> visited(train.user_count() * n_pois, 0);
  for (const Record& r : train.records()) visited[r.user * n_pois + r.poi] = 1;

  for (std::size_t k : sorted_ks) report.rows.push_back(AccuracyRow{k, {}, {}, {}});
  for (const Record& r : test.records()) {
    const bool seen = r.user < train.user_count() && visited[r.user * n_pois + r.poi];
    const RankedList list = predictor(r.user, r.time, k_max);
    std::size_t rank = list.size();  // 0-based position, list.size() when absent
    for (std::size_t p = 0; p < list.size(); ++p) {
      if (list[p].index == r.poi) {
        rank = p;
        break;
      }
    }
    for (auto& row : report.rows) {
      const bool hit = rank < row.k;
      BucketCount& bucket = seen ? row.visited : row.unvisited;
      ++bucket.n;
      ++row.total.n;
      if (hit) {
        ++bucket.hits;
        ++row.total.hits;
      }
    }
  }
  return report;
}

void write_accuracy_csv(std::ostream& out, const AccuracyReport& report) {
  out << "bucket,k,hits,n,accuracy\n";
  for (Bucket b : kBuckets) {
    for (const auto& row : report.rows) {
      const BucketCount& c = row[b];
      out << fmt::format("{},{},{},{},{:.6f}\n", bucket_name(b), row.k, c.hits, c.n, c.accuracy());
    }
  }
}

Predictor embedding_predictor(const EmbeddingStore& store, TimeMode mode) {
  return [&store, mode](std::uint32_t user, Timestamp time, std::size_t k) {
    const std::size_t n = store.count(NodeKind::Poi);
    return top_k_pois(store, Query{user, time}, mode, std::min(k, n));
  };
}

NbcModel NbcModel::fit(const Dataset& train, TimeMode mode) {
  if (train.records().empty()) throw std::invalid_argument("NBC needs a non-empty train set");
  NbcModel m;
  m.mode_ = mode;
  m.slots_ = static_cast<std::size_t>(slot_count(mode));
  m.total_ = train.records().size();
  m.poi_counts_.assign(train.poi_count(), 0);
  std::unordered_map<std::uint64_t, std::map<std::uint32_t, std::size_t>> cells;
  for (const Record& r : train.records()) {
    ++m.poi_counts_[r.poi];
    const auto slot = static_cast<std::uint64_t>(slot_id(r.time, mode));
    ++cells[static_cast<std::uint64_t>(r.user) * m.slots_ + slot][r.poi];
  }
  for (auto& [key, row] : cells) {
    m.cells_.emplace(key, std::vector<std::pair<std::uint32_t, std::size_t>>(row.begin(), row.end()));
  }
  return m;
}

std::size_t NbcModel::count(std::uint32_t user, std::uint32_t slot, std::uint32_t poi) const {
  auto it = cells_.find(static_cast<std::uint64_t>(user) * slots_ + slot);
  if (it == cells_.end()) return 0;
  auto pos = std::lower_bound(it->second.begin(), it->second.end(), poi,
                              [](const auto& cell, std::uint32_t b) { return cell.first < b; });
  return (pos != it->second.end() && pos->first == poi) ? pos->second : 0;
}

double NbcModel::score(std::uint32_t user, std::uint32_t slot, std::uint32_t poi) const {
  return static_cast<double>(count(user, slot, poi)) / static_cast<double>(total_);
}

RankedList NbcModel::predict(std::uint32_t user, std::uint32_t slot, std::size_t k) const {
  const std::size_t n = poi_counts_.size();
  std::vector<std::size_t> joint(n, 0);
  if (auto it = cells_.find(static_cast<std::uint64_t>(user) * slots_ + slot); it != cells_.end()) {
    for (const auto& [b, c] : it->second) joint[b] = c;
  }
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t b = 0; b < n; ++b) order[b] = b;
  const auto before = [&](std::uint32_t a, std::uint32_t b) {
    return std::tie(joint[b], poi_counts_[b], a) < std::tie(joint[a], poi_counts_[a], b);
  };
  k = std::min(k, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), before);
  RankedList out;
  out.reserve(k);
  for (std::size_t p = 0; p < k; ++p) {
    out.push_back(Scored{order[p], static_cast<double>(joint[order[p]]) / static_cast<double>(total_)});
  }
  return out;
}

Predictor nbc_predictor(const NbcModel& model) {
  return [&model](std::uint32_t user, Timestamp time, std::size_t k) {
    return model.predict(user, static_cast<std::uint32_t>(slot_id(time, model.time_mode())), k);
  };
}

void CovisitMatrix::add(std::uint32_t u, std::uint32_t v, std::int64_t minutes) {
  if (u == v || minutes <= 0) return;
  if (u > v) std::swap(u, v);
  cells_[pair_key(u, v)] += minutes;
}

std::int64_t CovisitMatrix::get(std::uint32_t u, std::uint32_t v) const {
  if (u == v) return 0;
  if (u > v) std::swap(u, v);
  auto it = cells_.find(pair_key(u, v));
  return it == cells_.end() ? 0 : it->second;
}

std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>> CovisitMatrix::pairs() const {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>> out;
  out.reserve(cells_.size());
  for (const auto& [key, minutes] : cells_) {
    out.emplace_back(static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key), minutes);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CovisitMatrix covisit(std::span<const std::vector<Stay>> stays) {
  struct Interval {
    Timestamp start;
    Timestamp end;
    std::uint32_t user;
  };
  std::unordered_map<std::uint32_t, std::vector<Interval>> by_poi;
  for (std::uint32_t u = 0; u < stays.size(); ++u) {
    for (const Stay& s : stays[u]) {
      if (s.end > s.start) by_poi[s.poi].push_back(Interval{s.start, s.end, u});
    }
  }
  CovisitMatrix m;
  for (auto& [poi, intervals] : by_poi) {
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
      return std::tie(a.start, a.end, a.user) < std::tie(b.start, b.end, b.user);
    });
    for (std::size_t a = 0; a < intervals.size(); ++a) {
      for (std::size_t b = a + 1; b < intervals.size() && intervals[b].start < intervals[a].end; ++b) {
        const auto overlap = std::min(intervals[a].end, intervals[b].end) - intervals[b].start;
        m.add(intervals[a].user, intervals[b].user, overlap.count());
      }
    }
  }
  return m;
}

std::vector<std::vector<Stay>> stays_per_user(const Dataset& data, int gap_minutes) {
  std::vector<std::vector<Stay>> out(data.user_count());
  for (std::uint32_t u = 0; u < data.user_count(); ++u) out[u] = merge_stays(data.records_of(u), gap_minutes);
  return out;
}

std::vector<std::uint32_t> poi_ranking(const Dataset& data, std::uint32_t user) {
  const std::size_t n = data.poi_count();
  std::vector<std::size_t> counts(n, 0);
  for (const Record& r : data.records_of(user)) ++counts[r.poi];
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t b = 0; b < n; ++b) order[b] = b;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return counts[a] > counts[b]; });
  return order;
}

double kendall_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("rankings differ in length");
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  std::vector<std::uint32_t> pos_b(n);
  for (std::uint32_t p = 0; p < n; ++p) pos_b[b[p]] = p;
  std::vector<std::uint32_t> seq(n), tmp(n);
  for (std::size_t p = 0; p < n; ++p) seq[p] = pos_b[a[p]];
  const auto discordant = inversions(seq, tmp, 0, n);
  return static_cast<double>(discordant) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double location_distance(const Dataset& train, std::uint32_t u, std::uint32_t v) {
  return kendall_distance(poi_ranking(train, u), poi_ranking(train, v));
}

std::vector<std::uint32_t> active_users(const Dataset& train, std::size_t n) {
  std::vector<std::uint32_t> users(train.user_count());
  for (std::uint32_t u = 0; u < users.size(); ++u) users[u] = u;
  std::stable_sort(users.begin(), users.end(), [&](std::uint32_t a, std::uint32_t b) {
    return train.records_of(a).size() > train.records_of(b).size();
  });
  users.resize(std::min(n, users.size()));
  return users;
}

std::vector<std::uint32_t> covisit_friends(const CovisitMatrix& m, std::size_t user_count,
                                           std::uint32_t user, std::size_t n) {
  std::vector<std::pair<std::int64_t, std::uint32_t>> cand;
  cand.reserve(user_count);
  for (std::uint32_t v = 0; v < user_count; ++v) {
    if (v != user) cand.emplace_back(-m.get(user, v), v);
  }
  n = std::min(n, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(n), cand.end());
  std::vector<std::uint32_t> out;
  for (std::size_t p = 0; p < n; ++p) out.push_back(cand[p].second);
  return out;
}

std::vector<std::uint32_t> location_friends(std::span<const std::vector<std::uint32_t>> rankings,
                                            std::uint32_t user, std::size_t n) {
  std::vector<std::pair<double, std::uint32_t>> cand;
  for (std::uint32_t v = 0; v < rankings.size(); ++v) {
    if (v != user) cand.emplace_back(kendall_distance(rankings[user], rankings[v]), v);
  }
  n = std::min(n, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(n), cand.end());
  std::vector<std::uint32_t> out;
  for (std::size_t p = 0; p < n; ++p) out.push_back(cand[p].second);
  return out;
}

double mrr(const std::map<std::uint32_t, RankedList>& suggestions,
           const std::map<std::uint32_t, std::vector<std::uint32_t>>& truth,
           std::span<const std::uint32_t> active, std::size_t truth_size) {
  if (active.empty()) throw std::invalid_argument("mrr needs at least one active user");
  double total = 0.0;
  for (std::uint32_t i : active) {
    const auto t = truth.find(i);
    const auto s = suggestions.find(i);
    if (t == truth.end() || s == suggestions.end()) {
      throw std::invalid_argument(fmt::format("user {} lacks truth or suggestions", i));
    }
    if (t->second.size() != truth_size) {
      throw std::invalid_argument(
          fmt::format("user {} has {} truth friends, expected {}", i, t->second.size(), truth_size));
    }
    std::unordered_map<std::uint32_t, std::size_t> rank_of;
    for (std::size_t p = 0; p < s->second.size(); ++p) rank_of.emplace(s->second[p].index, p + 1);
    double sum = 0.0;
    for (std::uint32_t j : t->second) {
      auto r = rank_of.find(j);
      if (r == rank_of.end()) {
        throw std::invalid_argument(fmt::format("truth friend {} of user {} not in suggestions", j, i));
      }
      sum += 1.0 / static_cast<double>(r->second);
    }
    total += sum;
  }
  return total / static_cast<double>(active.size());
}

std::vector<CurvePoint> learning_curve(const Split& split, std::span<const double> fractions,
                                       const TrainFn& train_fn, std::span<const std::size_t> ks) {
  std::vector<CurvePoint> curve;
  double prev = 0.0;
  for (double f : fractions) {
    if (!(f > prev && f <= 1.0)) {
      throw std::invalid_argument("learning-curve fractions must ascend within (0, 1]");
    }
    prev = f;
    const Dataset subset = f >= 1.0 ? split.train : truncate_per_user(split.train, f);
    const Predictor predictor = train_fn(subset);
    curve.push_back(CurvePoint{f, accuracy_at_k(predictor, split.train, split.test, ks)});
  }
  return curve;
}

void write_learning_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "fraction,bucket,k,accuracy\n";
  for (const auto& point : curve) {
    for (Bucket b : kBuckets) {
      for (const auto& row : point.report.rows) {
        out << fmt::format("{},{},{},{:.6f}\n", point.fraction, bucket_name(b), row.k, row[b].accuracy());
      }
    }
  }
}

double knn_label_purity(const EmbeddingStore& store, std::span<const int> label, std::size_t k) {
  const std::size_t n = store.count(NodeKind::User);
  if (label.size() != n) throw std::invalid_argument("one label per user required");
  if (n <= k) throw std::invalid_argument("need more users than neighbours");
  std::vector<double> sq(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    const auto z = store.row(NodeKind::User, u);
    sq[u] = dot(z, z);
  }
  double purity = 0.0;
  std::vector<std::pair<double, std::uint32_t>> dist(n - 1);
  for (std::uint32_t u = 0; u < n; ++u) {
    const auto z_u = store.row(NodeKind::User, u);
    std::size_t p = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (v == u) continue;
      dist[p++] = {sq[u] + sq[v] - 2.0 * dot(z_u, store.row(NodeKind::User, v)), v};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::size_t same = 0;
    for (std::size_t q = 0; q < k; ++q) same += label[dist[q].second] == label[u] ? 1 : 0;
    purity += static_cast<double>(same) / static_cast<double>(k);
  }
  return purity / static_cast<double>(n);
}

}  // namespace edhg
