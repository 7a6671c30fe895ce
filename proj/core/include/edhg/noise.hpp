#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "edhg/alias_table.hpp"
#include "edhg/graph.hpp"
#include "edhg/rng.hpp"

namespace edhg {

enum class NoiseMode { Unigram, Conditional };

// Negative-sampling distribution over the context side of one bipartite graph.
//
// Unigram: q(i) proportional to deg(i)^0.75, shared by every target.
// Conditional: q(i|j) proportional to max(0, 1 - w_ij / deg(i) * Pr(cat(i))),
// where Pr(cat(i)) is the category prior of POI i and 1 for non-POI contexts.
// Per-target tables are built on first use; concurrent callers build each
// table at most once.
//
// Holds a reference to the graph, which must outlive the model.
class NoiseModel {
 public:
  // Throws std::domain_error when every context has zero degree.
  static NoiseModel unigram(const BipartiteGraph& g);
  // cat_of has one entry per context vertex; nullopt marks non-POI contexts.
  static NoiseModel conditional(const BipartiteGraph& g, const CategoryPrior& prior,
                                std::vector<std::optional<Category>> cat_of);

  NoiseMode mode() const { return mode_; }
  std::size_t context_count() const { return graph_->context_count(); }

  const AliasTable& table_for(std::uint32_t target) const;
  std::uint32_t sample(std::uint32_t target, Rng& rng) const { return table_for(target).sample(rng); }

  // Unnormalized conditional masses for target j, clamped at 0. Unigram
  // models return deg^0.75 regardless of j.
  std::vector<double> masses(std::uint32_t target) const;

 private:
  NoiseModel() = default;
  const AliasTable& unigram_table() const;

  NoiseMode mode_ = NoiseMode::Unigram;
  const BipartiteGraph* graph_ = nullptr;
  CategoryPrior prior_{};
  std::vector<double> context_prior_;  // Pr(cat(i)) per context, 1 for non-POI

  mutable std::unique_ptr<std::once_flag> unigram_once_;
  mutable std::unique_ptr<AliasTable> unigram_;

  mutable std::unique_ptr<std::once_flag[]> target_once_;
  mutable std::unique_ptr<AliasTable[]> target_tables_;
};

// Category lookups for the context side of g: POI categories for POI
// contexts, nullopt otherwise.
std::vector<std::optional<Category>> context_categories(const BipartiteGraph& g,
                                                        std::span<const Category> poi_category);

}  // namespace edhg
