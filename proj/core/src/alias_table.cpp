#include "edhg/alias_table.hpp"

#include <cmath>
#include <stdexcept>

#include "edhg/graph.hpp"

namespace edhg {

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("alias table needs at least one weight");
  if (n > 0xffffffffu) throw std::invalid_argument("alias table too large");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("alias weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("alias weights are all zero");

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  const double scale = static_cast<double>(n) / total;
  for (std::size_t k = 0; k < n; ++k) {
    scaled[k] = weights[k] * scale;
    (scaled[k] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(k));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::uint32_t k : large) {
    prob_[k] = 1.0;
    alias_[k] = k;
  }
  for (std::uint32_t k : small) {
    prob_[k] = 1.0;
    alias_[k] = k;
  }
}

std::vector<double> AliasTable::reconstruct() const {
  const std::size_t n = prob_.size();
  std::vector<double> mass(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    mass[k] += prob_[k];
    mass[alias_[k]] += 1.0 - prob_[k];
  }
  for (double& m : mass) m /= static_cast<double>(n);
  return mass;
}

AliasTable edge_sampler(const BipartiteGraph& g) {
  if (g.edge_count() == 0) throw std::invalid_argument("edge sampler needs a non-empty graph");
  std::vector<double> weights;
  weights.reserve(g.edge_count());
  for (const Edge& e : g.edges()) weights.push_back(e.weight);
  return AliasTable(weights);
}

}  // namespace edhg
