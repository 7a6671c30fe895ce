#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edhg/rng.hpp"

namespace edhg {

class BipartiteGraph;

// Walker/Vose alias table: O(n) construction, O(1) draws.
class AliasTable {
 public:
  AliasTable() = default;
  // Throws std::invalid_argument for empty, negative, non-finite, or all-zero
  // weights.
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const { return prob_.size(); }
  std::span<const double> prob() const { return prob_; }
  std::span<const std::uint32_t> alias() const { return alias_; }

  // Outcome masses implied by the prob/alias arrays.
  std::vector<double> reconstruct() const;

  std::uint32_t sample(Rng& rng) const {
    const std::uint32_t k = rng.below(static_cast<std::uint32_t>(prob_.size()));
    return rng.uniform01() < prob_[k] ? k : alias_[k];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

// Outcomes are positions in g.edges(), drawn proportionally to weight.
AliasTable edge_sampler(const BipartiteGraph& g);

}  // namespace edhg
