#include "edhg/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "edhg/error.hpp"
#include "edhg/rng.hpp"

namespace edhg {

EmbeddingStore::EmbeddingStore(const std::array<std::size_t, kNodeKindCount>& counts,
                               std::size_t dim)
    : dim_(dim) {
  for (int k = 0; k < kNodeKindCount; ++k) matrices_[k] = Matrix(counts[k], dim);
}

std::size_t EmbeddingStore::node_count() const {
  std::size_t n = 0;
  for (const auto& m : matrices_) n += m.rows();
  return n;
}

bool EmbeddingStore::all_finite() const {
  for (const auto& m : matrices_) {
    for (double v : m.data()) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

EmbeddingStore init_embeddings(const std::array<std::size_t, kNodeKindCount>& counts,
                               std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be >= 1");
  EmbeddingStore store(counts, dim);
  Rng rng(seed);
  const double half_width = 0.5 / static_cast<double>(dim);
  for (int k = 0; k < kNodeKindCount; ++k) {
    for (double& v : store.matrix(static_cast<NodeKind>(k)).data()) {
      v = (2.0 * rng.uniform01() - 1.0) * half_width;
    }
  }
  return store;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s;
}

void write_embeddings(std::ostream& out, const EmbeddingStore& store) {
  out << store.node_count() << ' ' << store.dim() << '\n';
  fmt::memory_buffer buf;
  for (int k = 0; k < kNodeKindCount; ++k) {
    const auto kind = static_cast<NodeKind>(k);
    const Matrix& m = store.matrix(kind);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      buf.clear();
      fmt::format_to(std::back_inserter(buf), "{}:{}", to_string(kind), i);
      for (double v : m.row(i)) fmt::format_to(std::back_inserter(buf), " {:.9g}", v);
      buf.push_back('\n');
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
  }
}

EmbeddingStore read_embeddings(std::istream& in) {
  std::string line;
  std::size_t node_count = 0, dim = 0;
  if (!std::getline(in, line)) throw ValidationError("empty embedding stream");
  {
    std::istringstream ls(line);
    if (!(ls >> node_count >> dim) || dim == 0) {
      throw ValidationError("embedding header must be '<node_count> <dim>'");
    }
  }

  struct Row {
    NodeKind kind;
    std::size_t index;
    std::vector<double> values;
  };
  std::vector<Row> rows;
  rows.reserve(node_count);
  std::array<std::size_t, kNodeKindCount> counts{};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fail = [&] { return ValidationError(fmt::format("embedding line {}: malformed", line_no)); };
    const char* p = line.data();
    const char* end = line.data() + line.size();
    const char* colon = std::find(p, end, ':');
    if (colon == end) throw fail();
    const auto kind = parse_node_kind(std::string_view(p, static_cast<std::size_t>(colon - p)));
    if (!kind) throw fail();
    Row row{*kind, 0, {}};
    auto res = std::from_chars(colon + 1, end, row.index);
    if (res.ec != std::errc{}) throw fail();
    p = res.ptr;
    row.values.reserve(dim);
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) throw fail();
      row.values.push_back(v);
      p = res.ptr;
    }
    if (row.values.size() != dim) throw fail();
    auto& c = counts[static_cast<int>(row.kind)];
    c = std::max(c, row.index + 1);
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("failed while reading embedding stream");
  if (rows.size() != node_count ||
      std::accumulate(counts.begin(), counts.end(), std::size_t{0}) != node_count) {
    throw ValidationError("embedding rows do not match the declared node count");
  }
  EmbeddingStore store(counts, dim);
  std::vector<bool> seen(node_count, false);
  for (const Row& r : rows) {
    std::size_t flat = r.index;
    for (int k = 0; k < static_cast<int>(r.kind); ++k) flat += counts[k];
    if (seen[flat]) throw ValidationError("duplicate embedding row");
    seen[flat] = true;
    std::copy(r.values.begin(), r.values.end(), store.row(r.kind, r.index).begin());
  }
  return store;
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingStore& store) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write embedding file {}", path.string()));
  write_embeddings(out, store);
  if (!out) throw IoError(fmt::format("failed writing embedding file {}", path.string()));
}

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open embedding file {}", path.string()));
  return read_embeddings(in);
}

}  // namespace edhg
