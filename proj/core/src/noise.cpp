#include "edhg/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edhg/log.hpp"

namespace edhg {

namespace {

std::vector<double> unigram_masses(const BipartiteGraph& g) {
  std::vector<double> masses(g.context_count());
  for (std::uint32_t i = 0; i < g.context_count(); ++i) masses[i] = std::pow(g.degree_context(i), 0.75);
  return masses;
}

}  // namespace

NoiseModel NoiseModel::unigram(const BipartiteGraph& g) {
  NoiseModel m;
  m.mode_ = NoiseMode::Unigram;
  m.graph_ = &g;
  m.unigram_once_ = std::make_unique<std::once_flag>();
  const auto masses = unigram_masses(g);
  if (std::none_of(masses.begin(), masses.end(), [](double x) { return x > 0.0; })) {
    throw std::domain_error("unigram noise needs a context vertex with positive degree");
  }
  m.unigram_ = std::make_unique<AliasTable>(masses);
  return m;
}

NoiseModel NoiseModel::conditional(const BipartiteGraph& g, const CategoryPrior& prior,
                                   std::vector<std::optional<Category>> cat_of) {
  if (cat_of.size() != g.context_count()) {
    throw std::invalid_argument("cat_of must cover every context vertex");
  }
  NoiseModel m;
  m.mode_ = NoiseMode::Conditional;
  m.graph_ = &g;
  m.prior_ = prior;
  m.context_prior_.resize(g.context_count());
  for (std::size_t i = 0; i < cat_of.size(); ++i) {
    m.context_prior_[i] = cat_of[i] ? prior[*cat_of[i]] : 1.0;
  }
  m.unigram_once_ = std::make_unique<std::once_flag>();
  m.target_once_ = std::make_unique<std::once_flag[]>(g.target_count());
  m.target_tables_ = std::make_unique<AliasTable[]>(g.target_count());
  return m;
}

std::vector<double> NoiseModel::masses(std::uint32_t target) const {
  if (mode_ == NoiseMode::Unigram) return unigram_masses(*graph_);
  std::vector<double> masses(graph_->context_count(), 1.0);
  for (const Neighbor& nb : graph_->neighbors_of_target(target)) {
    const double deg = graph_->degree_context(nb.context);
    const double share = deg > 0.0 ? nb.weight / deg : 0.0;
    masses[nb.context] = std::max(0.0, 1.0 - share * context_prior_[nb.context]);
  }
  return masses;
}

const AliasTable& NoiseModel::unigram_table() const {
  std::call_once(*unigram_once_, [this] {
    unigram_ = std::make_unique<AliasTable>(unigram_masses(*graph_));
  });
  return *unigram_;
}

const AliasTable& NoiseModel::table_for(std::uint32_t target) const {
  if (mode_ == NoiseMode::Unigram) return *unigram_;
  if (target >= graph_->target_count()) throw std::out_of_range("noise target out of range");
  std::call_once(target_once_[target], [this, target] {
    auto w = masses(target);
    if (std::any_of(w.begin(), w.end(), [](double x) { return x > 0.0; })) {
      target_tables_[target] = AliasTable(w);
      return;
    }
    // Every context is saturated. Contexts off j would carry mass 1, so this
    // only happens when j touches all of them; prefer any that do not.
    std::vector<double> off(graph_->context_count(), 1.0);
    for (const Neighbor& nb : graph_->neighbors_of_target(target)) off[nb.context] = 0.0;
    if (std::any_of(off.begin(), off.end(), [](double x) { return x > 0.0; })) {
      log().info("conditional noise for target {} fell back to uniform off-target sampling", target);
      target_tables_[target] = AliasTable(off);
      return;
    }
    log().warn("conditional noise for target {} fell back to unigram noise", target);
    target_tables_[target] = unigram_table();
  });
  return target_tables_[target];
}

std::vector<std::optional<Category>> context_categories(const BipartiteGraph& g,
                                                        std::span<const Category> poi_category) {
  std::vector<std::optional<Category>> cat_of(g.context_count());
  if (g.context_kind() == NodeKind::Poi) {
    for (std::size_t i = 0; i < cat_of.size() && i < poi_category.size(); ++i) {
      cat_of[i] = poi_category[i];
    }
  }
  return cat_of;
}

}  // namespace edhg
