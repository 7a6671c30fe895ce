#include "edhg/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "edhg/error.hpp"

namespace edhg {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kKindNames = {"user", "poi", "time",
                                                                     "activity"};

std::vector<Edge> edges_from_counts(const std::map<std::pair<std::uint32_t, std::uint32_t>, double>& counts) {
  std::vector<Edge> edges;
  edges.reserve(counts.size());
  for (const auto& [key, w] : counts) edges.push_back(Edge{key.first, key.second, w});
  return edges;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(NodeKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<NodeKind> parse_node_kind(std::string_view name) {
  for (int i = 0; i < kNodeKindCount; ++i) {
    if (kKindNames[i] == name) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

BipartiteGraph::BipartiteGraph(NodeKind context_kind, NodeKind target_kind,
                               std::size_t context_count, std::size_t target_count,
                               std::vector<Edge> edges)
    : context_kind_(context_kind),
      target_kind_(target_kind),
      context_count_(context_count),
      target_count_(target_count),
      edges_(std::move(edges)),
      degree_context_(context_count, 0.0),
      degree_target_(target_count, 0.0) {
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.context != b.context ? a.context < b.context : a.target < b.target;
  });
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.context >= context_count_ || e.target >= target_count_) {
      throw ValidationError(fmt::format("edge ({}, {}) out of range", e.context, e.target));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError(fmt::format("edge ({}, {}) has non-positive weight", e.context, e.target));
    }
    if (k > 0 && edges_[k - 1].context == e.context && edges_[k - 1].target == e.target) {
      throw ValidationError(fmt::format("duplicate edge ({}, {})", e.context, e.target));
    }
    degree_context_[e.context] += e.weight;
    degree_target_[e.target] += e.weight;
    total_weight_ += e.weight;
  }

  target_offsets_.assign(target_count_ + 1, 0);
  for (const Edge& e : edges_) ++target_offsets_[e.target + 1];
  std::partial_sum(target_offsets_.begin(), target_offsets_.end(), target_offsets_.begin());
  by_target_.resize(edges_.size());
  std::vector<std::size_t> cursor(target_offsets_.begin(), target_offsets_.end() - 1);
  // Edges are context-sorted, so each target row comes out context-sorted too.
  for (const Edge& e : edges_) by_target_[cursor[e.target]++] = Neighbor{e.context, e.weight};
}

std::span<const Neighbor> BipartiteGraph::neighbors_of_target(std::uint32_t j) const {
  if (j >= target_count_) return {};
  return std::span<const Neighbor>(by_target_)
      .subspan(target_offsets_[j], target_offsets_[j + 1] - target_offsets_[j]);
}

double BipartiteGraph::weight(std::uint32_t context, std::uint32_t target) const {
  const auto row = neighbors_of_target(target);
  auto it = std::lower_bound(row.begin(), row.end(), context,
                             [](const Neighbor& n, std::uint32_t c) { return n.context < c; });
  return (it != row.end() && it->context == context) ? it->weight : 0.0;
}

HeteroGraph build_hetero(const Dataset& data, TimeMode mode) {
  HeteroGraph g;
  g.time_mode = mode;
  const std::size_t n_users = data.user_count();
  const std::size_t n_pois = data.poi_count();
  const auto n_slots = static_cast<std::size_t>(slot_count(mode));
  g.counts = {n_users, n_pois, n_slots, static_cast<std::size_t>(kFunctionalityCount)};

  std::map<std::pair<std::uint32_t, std::uint32_t>, double> bu, bt, ab;
  for (const Record& r : data.records()) {
    if (r.poi >= n_pois || r.user >= n_users) {
      throw ValidationError("check-in references a POI or user outside the dataset");
    }
    bu[{r.poi, r.user}] += 1.0;
    bt[{r.poi, static_cast<std::uint32_t>(slot_id(r.time, mode))}] += 1.0;
  }
  for (std::size_t b = 0; b < n_pois; ++b) {
    const VenueProfile& v = data.venues()[b];
    for (Functionality f : v.functionalities) {
      ab[{static_cast<std::uint32_t>(f), static_cast<std::uint32_t>(b)}] = 1.0;
    }
    g.poi_category.push_back(v.category);
    g.poi_ids.push_back(v.poi_id);
  }
  g.user_ids = data.users();

  g.poi_user = BipartiteGraph(NodeKind::Poi, NodeKind::User, n_pois, n_users, edges_from_counts(bu));
  g.poi_time = BipartiteGraph(NodeKind::Poi, NodeKind::Time, n_pois, n_slots, edges_from_counts(bt));
  g.activity_poi = BipartiteGraph(NodeKind::Activity, NodeKind::Poi, kFunctionalityCount, n_pois,
                                  edges_from_counts(ab));
  return g;
}

BipartiteGraph add_poi_poi(const Dataset& data, double window_hours) {
  if (!(window_hours > 0.0)) throw std::invalid_argument("window_hours must be positive");
  const double window_minutes = window_hours * 60.0;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> bb;
  for (std::uint32_t u = 0; u < data.user_count(); ++u) {
    const auto recs = data.records_of(u);
    for (std::size_t k = 1; k < recs.size(); ++k) {
      const Record& prev = recs[k - 1];
      const Record& next = recs[k];
      if (prev.poi == next.poi) continue;
      if (static_cast<double>((next.time - prev.time).count()) > window_minutes) continue;
      bb[{prev.poi, next.poi}] += 1.0;
    }
  }
  return BipartiteGraph(NodeKind::Poi, NodeKind::Poi, data.poi_count(), data.poi_count(),
                        edges_from_counts(bb));
}

double density(const BipartiteGraph& g) {
  if (g.context_count() == 0 || g.target_count() == 0) {
    throw std::domain_error("density undefined for a graph with an empty side");
  }
  return static_cast<double>(g.edge_count()) /
         (static_cast<double>(g.context_count()) * static_cast<double>(g.target_count()));
}

CategoryPrior category_prior(const Dataset& data) {
  if (data.records().empty()) throw std::domain_error("category prior of an empty dataset");
  std::array<std::size_t, kCategoryCount> counts{};
  for (const Record& r : data.records()) {
    ++counts[static_cast<int>(data.venues()[r.poi].category)];
  }
  CategoryPrior prior;
  const auto total = static_cast<double>(data.records().size());
  for (int c = 0; c < kCategoryCount; ++c) prior.fraction[c] = static_cast<double>(counts[c]) / total;
  return prior;
}

CategoryPrior category_prior(const HeteroGraph& graph) {
  const BipartiteGraph& bu = graph.poi_user;
  if (!(bu.total_weight() > 0.0)) throw std::domain_error("category prior of an empty graph");
  std::array<double, kCategoryCount> mass{};
  for (std::uint32_t b = 0; b < bu.context_count(); ++b) {
    mass[static_cast<int>(graph.poi_category[b])] += bu.degree_context(b);
  }
  CategoryPrior prior;
  for (int c = 0; c < kCategoryCount; ++c) prior.fraction[c] = mass[c] / bu.total_weight();
  return prior;
}

void write_graph(std::ostream& out, const HeteroGraph& graph) {
  out << "EDHG-GRAPH v1\n";
  for (int k = 0; k < kNodeKindCount; ++k) out << kKindNames[k] << ' ' << graph.counts[k] << '\n';
  for (std::size_t b = 0; b < graph.poi_category.size(); ++b) {
    out << "category " << b << ' ' << to_string(graph.poi_category[b]) << '\n';
  }
  for (std::size_t u = 0; u < graph.user_ids.size(); ++u) {
    out << "name user " << u << ' ' << graph.user_ids[u] << '\n';
  }
  for (std::size_t b = 0; b < graph.poi_ids.size(); ++b) {
    out << "name poi " << b << ' ' << graph.poi_ids[b] << '\n';
  }
  auto emit = [&](std::string_view name, const BipartiteGraph& g) {
    for (const Edge& e : g.edges()) {
      out << name << ' ' << e.context << ' ' << e.target << ' ' << format_double(e.weight) << '\n';
    }
  };
  emit("bu", graph.poi_user);
  emit("bt", graph.poi_time);
  emit("ba", graph.activity_poi);
  if (graph.poi_poi) {
    // Marks the graph as present even when it has no edges.
    out << "transitions\n";
    emit("bb", *graph.poi_poi);
  }
}

HeteroGraph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "EDHG-GRAPH v1") {
    throw ValidationError("missing EDHG-GRAPH v1 header");
  }
  HeteroGraph g;
  for (int k = 0; k < kNodeKindCount; ++k) {
    if (!std::getline(in, line)) throw ValidationError("truncated graph header");
    std::istringstream ls(line);
    std::string kind;
    std::size_t n = 0;
    if (!(ls >> kind >> n) || kind != kKindNames[k]) {
      throw ValidationError(fmt::format("expected node count for '{}'", kKindNames[k]));
    }
    g.counts[k] = n;
  }
  const auto mode = time_mode_for_slot_count(static_cast<int>(g.count(NodeKind::Time)));
  if (!mode) throw ValidationError("time slot count matches no time mode");
  g.time_mode = *mode;
  g.poi_category.assign(g.count(NodeKind::Poi), Category::Academic);
  g.poi_ids.resize(g.count(NodeKind::Poi));
  g.user_ids.resize(g.count(NodeKind::User));

  std::vector<Edge> bu, bt, ba, bb;
  bool has_bb = false;
  std::size_t line_no = 1 + kNodeKindCount;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    auto fail = [&]() {
      return ValidationError(fmt::format("graph line {}: malformed '{}'", line_no, line));
    };
    if (tag == "category") {
      std::size_t b = 0;
      std::string name;
      if (!(ls >> b >> name) || b >= g.poi_category.size()) throw fail();
      const auto c = parse_category(name);
      if (!c) throw fail();
      g.poi_category[b] = *c;
    } else if (tag == "name") {
      std::string kind, id;
      std::size_t idx = 0;
      // Ids run to the end of the line, so they may contain spaces.
      if (!(ls >> kind >> idx) || !std::getline(ls >> std::ws, id) || id.empty()) throw fail();
      if (kind == "user" && idx < g.user_ids.size()) {
        g.user_ids[idx] = id;
      } else if (kind == "poi" && idx < g.poi_ids.size()) {
        g.poi_ids[idx] = id;
      } else {
        throw fail();
      }
    } else if (tag == "transitions") {
      has_bb = true;
    } else if (tag == "bu" || tag == "bt" || tag == "ba" || tag == "bb") {
      std::uint32_t i = 0, j = 0;
      std::string wtext;
      if (!(ls >> i >> j >> wtext)) throw fail();
      double w = 0.0;
      auto res = std::from_chars(wtext.data(), wtext.data() + wtext.size(), w);
      if (res.ec != std::errc{} || res.ptr != wtext.data() + wtext.size()) throw fail();
      Edge e{i, j, w};
      if (tag == "bu") bu.push_back(e);
      else if (tag == "bt") bt.push_back(e);
      else if (tag == "ba") ba.push_back(e);
      else if (has_bb) bb.push_back(e);
      else throw fail();
    } else {
      throw fail();
    }
  }
  if (in.bad()) throw IoError("failed while reading graph stream");

  const std::size_t nu = g.count(NodeKind::User), nb = g.count(NodeKind::Poi),
                    nt = g.count(NodeKind::Time), na = g.count(NodeKind::Activity);
  g.poi_user = BipartiteGraph(NodeKind::Poi, NodeKind::User, nb, nu, std::move(bu));
  g.poi_time = BipartiteGraph(NodeKind::Poi, NodeKind::Time, nb, nt, std::move(bt));
  g.activity_poi = BipartiteGraph(NodeKind::Activity, NodeKind::Poi, na, nb, std::move(ba));
  if (has_bb) g.poi_poi = BipartiteGraph(NodeKind::Poi, NodeKind::Poi, nb, nb, std::move(bb));
  return g;
}

void save_graph(const std::filesystem::path& path, const HeteroGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write graph file {}", path.string()));
  write_graph(out, graph);
  if (!out) throw IoError(fmt::format("failed writing graph file {}", path.string()));
}

HeteroGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open graph file {}", path.string()));
  return read_graph(in);
}

}  // namespace edhg
