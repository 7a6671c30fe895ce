#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edhg/ingest.hpp"
#include "edhg/time_index.hpp"
#include "edhg/venue.hpp"

namespace edhg {

enum class NodeKind : std::uint8_t { User = 0, Poi = 1, Time = 2, Activity = 3 };
inline constexpr int kNodeKindCount = 4;

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view name);

struct Edge {
  std::uint32_t context = 0;
  std::uint32_t target = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  std::uint32_t context = 0;
  double weight = 0.0;
};

// Weighted bipartite view with context side V_A and target side V_B. Edges are
// kept sorted by (context, target); degrees are sums of incident weights.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  // Throws ValidationError on out-of-range indices, non-positive or non-finite
  // weights, and duplicate (context, target) pairs.
  BipartiteGraph(NodeKind context_kind, NodeKind target_kind, std::size_t context_count,
                 std::size_t target_count, std::vector<Edge> edges);

  NodeKind context_kind() const { return context_kind_; }
  NodeKind target_kind() const { return target_kind_; }
  std::size_t context_count() const { return context_count_; }
  std::size_t target_count() const { return target_count_; }

  std::span<const Edge> edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  double total_weight() const { return total_weight_; }

  double degree_context(std::uint32_t i) const { return degree_context_[i]; }
  double degree_target(std::uint32_t j) const { return degree_target_[j]; }
  std::span<const double> degrees_context() const { return degree_context_; }
  std::span<const double> degrees_target() const { return degree_target_; }

  // Contexts adjacent to target j, ascending by context index.
  std::span<const Neighbor> neighbors_of_target(std::uint32_t j) const;
  // w_ij, or 0 when (i, j) is not an edge.
  double weight(std::uint32_t context, std::uint32_t target) const;

 private:
  NodeKind context_kind_ = NodeKind::Poi;
  NodeKind target_kind_ = NodeKind::User;
  std::size_t context_count_ = 0;
  std::size_t target_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> degree_context_;
  std::vector<double> degree_target_;
  std::vector<std::size_t> target_offsets_;
  std::vector<Neighbor> by_target_;
  double total_weight_ = 0.0;
};

struct HeteroGraph {
  TimeMode time_mode = TimeMode::Week28;
  std::array<std::size_t, kNodeKindCount> counts{};

  BipartiteGraph poi_user;      // context = POI, target = user
  BipartiteGraph poi_time;      // context = POI, target = time slot
  BipartiteGraph activity_poi;  // context = activity, target = POI
  std::optional<BipartiteGraph> poi_poi;  // context = source POI, target = destination POI

  std::vector<Category> poi_category;
  std::vector<std::string> user_ids;
  std::vector<std::string> poi_ids;

  std::size_t count(NodeKind kind) const { return counts[static_cast<int>(kind)]; }
};

// POI-user and POI-time weights are co-occurrence counts; every POI links to
// each of its functionalities with weight 1. All 4 kinds keep their full
// universes, so unvisited POIs and unobserved slots are isolated nodes.
HeteroGraph build_hetero(const Dataset& data, TimeMode mode = TimeMode::Week28);

// Directed transition counts between consecutive records of the same user
// at different POIs no more than window_hours apart.
BipartiteGraph add_poi_poi(const Dataset& data, double window_hours = 4.0);

// |E| / (|V_A| * |V_B|). Throws std::domain_error when either side is empty.
double density(const BipartiteGraph& g);

struct CategoryPrior {
  std::array<double, kCategoryCount> fraction{};
  double operator[](Category c) const { return fraction[static_cast<int>(c)]; }
};

// Share of check-ins landing in POIs of each category. Throws
// std::domain_error on an empty dataset.
CategoryPrior category_prior(const Dataset& data);
// Same quantity recovered from the POI-user degrees of a built graph.
CategoryPrior category_prior(const HeteroGraph& graph);

// Plain-text persistence (`EDHG-GRAPH v1`): node counts, POI categories, id
// names, a `transitions` marker when POI-POI edges exist, then one edge per
// line. Weights are written in shortest round-trip form, so reading back is
// bit-exact.
void write_graph(std::ostream& out, const HeteroGraph& graph);
HeteroGraph read_graph(std::istream& in);
void save_graph(const std::filesystem::path& path, const HeteroGraph& graph);
HeteroGraph load_graph(const std::filesystem::path& path);

}  // namespace edhg
