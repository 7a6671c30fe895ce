#pragma once

#include <cstdint>
#include <vector>

#include "edhg/embedding.hpp"
#include "edhg/time_index.hpp"

namespace edhg {

struct Scored {
  std::uint32_t index = 0;
  double score = 0.0;

  friend bool operator==(const Scored&, const Scored&) = default;
};

// Score descending, ties by ascending index.
using RankedList = std::vector<Scored>;

inline bool ranks_before(const Scored& a, const Scored& b) {
  return a.score != b.score ? a.score > b.score : a.index < b.index;
}

struct Query {
  std::uint32_t user = 0;
  Timestamp time;
};

// z_b . z_u + z_b . z_t
double score_poi(const EmbeddingStore& store, std::uint32_t poi, std::uint32_t user,
                 std::uint32_t slot);

// k best POIs out of all POIs. Throws std::out_of_range unless 1 <= k <= |POIs|.
RankedList top_k_pois(const EmbeddingStore& store, std::uint32_t user, std::uint32_t slot,
                      std::size_t k);
RankedList top_k_pois(const EmbeddingStore& store, const Query& query, TimeMode mode,
                      std::size_t k);

// Every other user ranked by z_u . z_v. Throws std::invalid_argument with
// fewer than 2 users.
RankedList friend_scores(const EmbeddingStore& store, std::uint32_t user);

// Keeps the best k of `items` in rank order.
RankedList rank_top_k(std::vector<Scored> items, std::size_t k);

}  // namespace edhg
