#include "edhg/predict.hpp"

#include <algorithm>
#include <stdexcept>

namespace edhg {

double score_poi(const EmbeddingStore& store, std::uint32_t poi, std::uint32_t user,
                 std::uint32_t slot) {
  const auto z_b = store.row(NodeKind::Poi, poi);
  return dot(z_b, store.row(NodeKind::User, user)) + dot(z_b, store.row(NodeKind::Time, slot));
}

RankedList rank_top_k(std::vector<Scored> items, std::size_t k) {
  k = std::min(k, items.size());
  std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(k), items.end(),
                    ranks_before);
  items.resize(k);
  return items;
}

RankedList top_k_pois(const EmbeddingStore& store, std::uint32_t user, std::uint32_t slot,
                      std::size_t k) {
  const std::size_t n = store.count(NodeKind::Poi);
  if (k < 1 || k > n) throw std::out_of_range("k must lie in [1, |POIs|]");
  if (user >= store.count(NodeKind::User) || slot >= store.count(NodeKind::Time)) {
    throw std::out_of_range("query user or slot out of range");
  }
  std::vector<Scored> items(n);
  for (std::uint32_t b = 0; b < n; ++b) items[b] = Scored{b, score_poi(store, b, user, slot)};
  return rank_top_k(std::move(items), k);
}

RankedList top_k_pois(const EmbeddingStore& store, const Query& query, TimeMode mode,
                      std::size_t k) {
  return top_k_pois(store, query.user, static_cast<std::uint32_t>(slot_id(query.time, mode)), k);
}

RankedList friend_scores(const EmbeddingStore& store, std::uint32_t user) {
  const std::size_t n = store.count(NodeKind::User);
  if (n < 2) throw std::invalid_argument("friend suggestion needs at least 2 users");
  if (user >= n) throw std::out_of_range("user out of range");
  const auto z_u = store.row(NodeKind::User, user);
  std::vector<Scored> items;
  items.reserve(n - 1);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (v == user) continue;
    items.push_back(Scored{v, dot(z_u, store.row(NodeKind::User, v))});
  }
  std::sort(items.begin(), items.end(), ranks_before);
  return items;
}

}  // namespace edhg
