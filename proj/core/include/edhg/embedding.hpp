#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "edhg/graph.hpp"

namespace edhg {

// Row-major rows x dim block of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * dim, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// One matrix per node kind, all sharing the same dimension.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  EmbeddingStore(const std::array<std::size_t, kNodeKindCount>& counts, std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t count(NodeKind kind) const { return matrices_[static_cast<int>(kind)].rows(); }
  std::size_t node_count() const;

  Matrix& matrix(NodeKind kind) { return matrices_[static_cast<int>(kind)]; }
  const Matrix& matrix(NodeKind kind) const { return matrices_[static_cast<int>(kind)]; }
  std::span<double> row(NodeKind kind, std::size_t i) { return matrix(kind).row(i); }
  std::span<const double> row(NodeKind kind, std::size_t i) const { return matrix(kind).row(i); }

  bool all_finite() const;

  friend bool operator==(const EmbeddingStore&, const EmbeddingStore&) = default;

 private:
  std::size_t dim_ = 0;
  std::array<Matrix, kNodeKindCount> matrices_;
};

// Entries i.i.d. uniform on [-0.5/d, 0.5/d].
EmbeddingStore init_embeddings(const std::array<std::size_t, kNodeKindCount>& counts,
                               std::size_t dim, std::uint64_t seed);

double dot(std::span<const double> a, std::span<const double> b);

// `<node_count> <dim>` then `<kind>:<index> v1 ... vd`, 9 significant digits.
void write_embeddings(std::ostream& out, const EmbeddingStore& store);
EmbeddingStore read_embeddings(std::istream& in);
void save_embeddings(const std::filesystem::path& path, const EmbeddingStore& store);
EmbeddingStore load_embeddings(const std::filesystem::path& path);

}  // namespace edhg
