#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "edhg/alias_table.hpp"
#include "edhg/embedding.hpp"
#include "edhg/graph.hpp"
#include "edhg/noise.hpp"
#include "edhg/rng.hpp"

namespace edhg {

enum class Variant {
  Edhg,     // POI-user, POI-time, activity-POI with conditional noise
  EdhgNs,   // same graphs, unigram noise
  EdhgPoi,  // EDHG plus the POI-POI transition graph
};

std::optional<Variant> parse_variant(std::string_view name);
std::string_view to_string(Variant v);

struct TrainConfig {
  long long iterations = 10'000'000;  // total edge samples across all graphs
  int negatives = 10;
  std::size_t dim = 100;
  double lr_initial = 0.025;
  double lr_final = 1e-5;
  std::uint64_t seed = 1;
  int threads = 1;
  Variant variant = Variant::Edhg;
  int checkpoints = 10;  // loss-curve segments

  // Throws ValidationError on out-of-range fields.
  void validate() const;
};

struct GraphRole {
  NodeKind context = NodeKind::Poi;
  NodeKind target = NodeKind::User;
};

// Negative-sampling loss of one positive pair (z_i, z_j) against sampled
// contexts z_i', with logistic arguments clipped to [-30, 30].
double edge_loss(std::span<const double> z_i, std::span<const double> z_j,
                 std::span<const std::span<const double>> negatives);

// One SGD step on edge_loss for edge (i, j). Contexts are updated in place as
// they are visited; the target's accumulated update is applied last. Returns
// the loss before the update.
double sgd_update(EmbeddingStore& store, GraphRole role, std::uint32_t context,
                  std::uint32_t target, std::span<const std::uint32_t> negatives, double lr);

// Edge sampler plus noise model for one bipartite graph.
class BipartiteSampler {
 public:
  BipartiteSampler(const BipartiteGraph& g, NoiseModel noise);

  const BipartiteGraph& graph() const { return *graph_; }
  const NoiseModel& noise() const { return noise_; }
  GraphRole role() const { return {graph_->context_kind(), graph_->target_kind()}; }

  const Edge& sample_edge(Rng& rng) const { return graph_->edges()[edges_.sample(rng)]; }
  // Appends up to m negatives for edge (i, j) to `out`. Draws equal to the
  // positive context (or to the target, when both sides share a kind) are
  // redrawn up to 100 times, then that slot is skipped.
  void sample_negatives(const Edge& e, int m, Rng& rng, std::vector<std::uint32_t>& out) const;

 private:
  const BipartiteGraph* graph_;
  AliasTable edges_;
  NoiseModel noise_;
};

// Draws one edge and m negatives, applies sgd_update, returns the step loss.
double train_bipartite(EmbeddingStore& store, const BipartiteSampler& sampler, int m, double lr,
                       Rng& rng);

struct LossSample {
  long long step = 0;     // global step at the end of the window
  double estimate = 0.0;  // mean step loss over the window
};

struct TrainResult {
  EmbeddingStore store;
  std::vector<LossSample> loss_curve;  // one point per checkpoint window
  double final_loss = 0.0;             // last window's estimate
};

// Round-robin over the variant's graphs, one edge sample per graph per cycle,
// with the learning rate decaying linearly over the run. threads > 1 runs
// lock-free asynchronous workers over a shared store. Throws
// DivergenceError when a non-finite value shows up.
TrainResult joint_train(const HeteroGraph& graph, const TrainConfig& config);

// Samplers in round-robin order for a variant. Graphs without edges are
// skipped; ValidationError when nothing is left.
std::vector<BipartiteSampler> make_samplers(const HeteroGraph& graph, Variant variant);

// Full-softmax objective -sum_{(i,j)} w_ij log p(i|j). O(|E| |V_A| d).
double exact_objective(const EmbeddingStore& store, const BipartiteGraph& g);

}  // namespace edhg
