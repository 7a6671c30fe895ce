#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "edhg/embedding.hpp"
#include "edhg/error.hpp"

using namespace edhg;

TEST_CASE("init range and shape") {
  const EmbeddingStore s = init_embeddings({5, 7, 28, 7}, 100, 3);
  CHECK(s.dim() == 100);
  CHECK(s.count(NodeKind::User) == 5);
  CHECK(s.count(NodeKind::Poi) == 7);
  CHECK(s.count(NodeKind::Time) == 28);
  CHECK(s.count(NodeKind::Activity) == 7);
  CHECK(s.node_count() == 47);
  for (int k = 0; k < 4; ++k) {
    for (double x : s.matrix(static_cast<NodeKind>(k)).data()) {
      CHECK(x >= -0.005);
      CHECK(x <= 0.005);
    }
  }
}

TEST_CASE("init is deterministic per seed") {
  CHECK(init_embeddings({3, 4, 28, 7}, 16, 9) == init_embeddings({3, 4, 28, 7}, 16, 9));
  CHECK_FALSE(init_embeddings({3, 4, 28, 7}, 16, 9) == init_embeddings({3, 4, 28, 7}, 16, 10));
}

TEST_CASE("init mean within the uniform moment bound") {
  const std::size_t d = 10;
  const EmbeddingStore s = init_embeddings({10'000, 0, 0, 0}, d, 1);
  const auto data = s.matrix(NodeKind::User).data();
  REQUIRE(data.size() == 100'000);
  double sum = 0.0;
  for (double x : data) sum += x;
  const double mean = sum / static_cast<double>(data.size());
  CHECK(std::abs(mean) <= 3.0 * (1.0 / (static_cast<double>(d) * std::sqrt(12.0 * 1e5))));
}

TEST_CASE("dot product") {
  const std::vector<double> a = {1, 2, 3}, b = {4, -5, 6};
  CHECK(dot(a, b) == 12.0);
}

TEST_CASE("embedding file round trip") {
  EmbeddingStore s = init_embeddings({2, 3, 4, 7}, 5, 11);
  s.row(NodeKind::Poi, 1)[2] = 1.0 / 3.0;
  s.row(NodeKind::User, 0)[0] = -123456.789;
  std::ostringstream out;
  write_embeddings(out, s);
  const std::string text = out.str();
  CHECK(text.rfind("16 5\n", 0) == 0);
  CHECK(text.find("\npoi:1 ") != std::string::npos);
  CHECK(text.find("activity:6 ") != std::string::npos);
  std::istringstream in(text);
  const EmbeddingStore back = read_embeddings(in);
  REQUIRE(back.dim() == 5);
  for (int k = 0; k < 4; ++k) {
    const auto kind = static_cast<NodeKind>(k);
    REQUIRE(back.count(kind) == s.count(kind));
    const auto a = s.matrix(kind).data();
    const auto b = back.matrix(kind).data();
    for (std::size_t x = 0; x < a.size(); ++x) {
      CHECK(std::abs(a[x] - b[x]) <= 5e-9 * std::max(1.0, std::abs(a[x])));
    }
  }
  // Text from a loaded store is stable.
  std::ostringstream again;
  write_embeddings(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("embedding reader rejects damage") {
  for (const char* text : {"", "2 x\n", "1 2\nuser:0 1\n", "1 2\nnode:0 1 2\n", "2 1\nuser:0 1\n",
                           "1 1\nuser:0 abc\n"}) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_embeddings(in), ValidationError);
  }
  CHECK_THROWS_AS(load_embeddings("/nonexistent/emb.txt"), IoError);
}

TEST_CASE("save and load through a file") {
  const EmbeddingStore s = init_embeddings({1, 2, 4, 7}, 3, 2);
  const auto path = std::filesystem::temp_directory_path() / "edhg_test_embedding.txt";
  save_embeddings(path, s);
  const EmbeddingStore back = load_embeddings(path);
  CHECK(back.count(NodeKind::Time) == 4);
  std::filesystem::remove(path);
}

TEST_CASE("all_finite") {
  EmbeddingStore s = init_embeddings({1, 1, 1, 1}, 2, 1);
  CHECK(s.all_finite());
  s.row(NodeKind::Time, 0)[1] = NAN;
  CHECK_FALSE(s.all_finite());
}
