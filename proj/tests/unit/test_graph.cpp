#include <doctest.h>

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "edhg/datagen.hpp"
#include "edhg/error.hpp"
#include "edhg/graph.hpp"
#include "fixtures.hpp"

using namespace edhg;
using fixtures::at;

namespace {

using Key = std::pair<std::uint32_t, std::uint32_t>;

std::map<Key, double> as_map(const BipartiteGraph& g) {
  std::map<Key, double> m;
  for (const auto& e : g.edges()) m[{e.context, e.target}] = e.weight;
  return m;
}

Dataset toy() { return filter_users(fixtures::toy_checkins(), fixtures::toy_venues(), 1); }

void check_degree_sums(const BipartiteGraph& g) {
  const auto dc = g.degrees_context();
  const auto dt = g.degrees_target();
  const double sc = std::accumulate(dc.begin(), dc.end(), 0.0);
  const double st = std::accumulate(dt.begin(), dt.end(), 0.0);
  double sw = 0.0;
  for (const auto& e : g.edges()) sw += e.weight;
  CHECK(sc == doctest::Approx(sw).epsilon(1e-12));
  CHECK(st == doctest::Approx(sw).epsilon(1e-12));
  CHECK(g.total_weight() == doctest::Approx(sw).epsilon(1e-12));
  for (std::uint32_t j = 0; j < g.target_count(); ++j) {
    double s = 0.0;
    for (const auto& e : g.edges()) {
      if (e.target == j) s += e.weight;
    }
    CHECK(g.degree_target(j) == s);
  }
}

}  // namespace

TEST_CASE("toy campus graph matches per-pair counts") {
  const Dataset d = toy();
  const HeteroGraph g = build_hetero(d);
  CHECK(g.count(NodeKind::User) == 2);
  CHECK(g.count(NodeKind::Poi) == 3);
  CHECK(g.count(NodeKind::Time) == 28);
  CHECK(g.count(NodeKind::Activity) == 7);

  // Brute-force recount straight from the record list.
  std::map<Key, double> bu, bt;
  for (const auto& r : d.records()) {
    bu[{r.poi, r.user}] += 1;
    bt[{r.poi, static_cast<std::uint32_t>(time_index(r.time).id)}] += 1;
  }
  CHECK(as_map(g.poi_user) == bu);
  CHECK(as_map(g.poi_time) == bt);

  // Hand-derived figure: u1 = 0, u2 = 1; b1 = 0, b2 = 1, b3 = 2.
  const std::map<Key, double> bu_hand = {{{0, 0}, 2}, {{0, 1}, 1}, {{1, 0}, 2}, {{1, 1}, 1}, {{2, 1}, 2}};
  const std::map<Key, double> bt_hand = {{{0, 0}, 3}, {{1, 1}, 3}, {{2, 2}, 1}, {{2, 6}, 1}};
  CHECK(as_map(g.poi_user) == bu_hand);
  CHECK(as_map(g.poi_time) == bt_hand);

  const auto act = [](Functionality f) { return static_cast<std::uint32_t>(f); };
  const std::map<Key, double> ba_hand = {{{act(Functionality::Classrooms), 0}, 1},
                                         {{act(Functionality::Recreation), 1}, 1},
                                         {{act(Functionality::Dining), 1}, 1},
                                         {{act(Functionality::Residence), 2}, 1}};
  CHECK(as_map(g.activity_poi) == ba_hand);
  CHECK_FALSE(g.poi_poi.has_value());

  CHECK(g.poi_user.context_kind() == NodeKind::Poi);
  CHECK(g.poi_user.target_kind() == NodeKind::User);
  CHECK(g.poi_time.target_kind() == NodeKind::Time);
  CHECK(g.activity_poi.context_kind() == NodeKind::Activity);
  CHECK(g.activity_poi.target_kind() == NodeKind::Poi);
}

TEST_CASE("single-record graph") {
  const Dataset d({"u1"}, {fixtures::venue("b1", Category::Auxiliary, {Functionality::Dining})},
                  {{0, 0, at("2016-09-05T08:00")}});
  const HeteroGraph g = build_hetero(d);
  CHECK(as_map(g.poi_user) == std::map<Key, double>{{{0, 0}, 1}});
  CHECK(as_map(g.poi_time) == std::map<Key, double>{{{0, 0}, 1}});
  CHECK(as_map(g.activity_poi) ==
        std::map<Key, double>{{{static_cast<std::uint32_t>(Functionality::Dining), 0}, 1}});
}

TEST_CASE("repeat visits accumulate weight") {
  // Slot 5 is Tuesday afternoon.
  std::vector<Record> recs;
  for (int k = 0; k < 3; ++k) recs.push_back({0, 0, at("2016-09-06T13:00") + std::chrono::days{7 * k}});
  const Dataset d({"u1"}, {fixtures::venue("b1", Category::Academic, {Functionality::Classrooms})}, recs);
  const HeteroGraph g = build_hetero(d);
  CHECK(g.poi_user.weight(0, 0) == 3);
  CHECK(g.poi_time.weight(0, 5) == 3);
  CHECK(g.poi_time.weight(0, 4) == 0);
}

TEST_CASE("mass conservation and degree invariants on generated data") {
  GenConfig cfg;
  cfg.n_users = 60;
  cfg.n_pois = 24;
  cfg.records_per_user = 30;
  const auto pop = gen_population(cfg);
  const Dataset d = gen_checkins(cfg, pop).checkins;
  const HeteroGraph g = build_hetero(d);
  const auto n = static_cast<double>(d.records().size());
  CHECK(g.poi_user.total_weight() == n);
  CHECK(g.poi_time.total_weight() == n);
  double functionalities = 0;
  for (const auto& v : d.venues()) functionalities += static_cast<double>(v.functionalities.size());
  CHECK(g.activity_poi.total_weight() == functionalities);
  for (const auto& e : g.activity_poi.edges()) CHECK(e.weight == 1.0);
  check_degree_sums(g.poi_user);
  check_degree_sums(g.poi_time);
  check_degree_sums(g.activity_poi);
  check_degree_sums(add_poi_poi(d));
}

TEST_CASE("isolated POIs and empty slots stay in the universe") {
  const Dataset d({"u1"},
                  {fixtures::venue("b1", Category::Academic, {Functionality::Classrooms}),
                   fixtures::venue("b2", Category::Residential, {Functionality::Residence})},
                  {{0, 0, at("2016-09-05T08:00")}});
  const HeteroGraph g = build_hetero(d);
  CHECK(g.count(NodeKind::Poi) == 2);
  CHECK(g.poi_user.degree_context(1) == 0);
  CHECK(g.activity_poi.degree_target(1) == 1);
  CHECK(g.count(NodeKind::Time) == 28);
}

TEST_CASE("time modes change the time universe") {
  const Dataset d = toy();
  CHECK(build_hetero(d, TimeMode::Hour4).count(NodeKind::Time) == 4);
  CHECK(build_hetero(d, TimeMode::Dow7).count(NodeKind::Time) == 7);
  const HeteroGraph g = build_hetero(d, TimeMode::Dow7);
  // Monday is slot 0 in dow7: b1 has 3 Monday visits.
  CHECK(g.poi_time.weight(0, 0) == 3);
}

TEST_CASE("empty dataset gives an empty graph") {
  const Dataset d({}, fixtures::toy_venues(), {});
  const HeteroGraph g = build_hetero(d);
  CHECK(g.poi_user.edge_count() == 0);
  CHECK(g.poi_time.edge_count() == 0);
  CHECK(g.activity_poi.edge_count() == 4);
}

TEST_CASE("POI-POI transitions") {
  const auto venues = fixtures::toy_venues();
  SUBCASE("single transition") {
    const Dataset d({"u1"}, venues, {{0, 0, at("2016-09-05T09:00")}, {0, 1, at("2016-09-05T10:00")}});
    CHECK(as_map(add_poi_poi(d)) == std::map<Key, double>{{{0, 1}, 1}});
  }
  SUBCASE("gap beyond the window") {
    const Dataset d({"u1"}, venues, {{0, 0, at("2016-09-05T09:00")}, {0, 1, at("2016-09-05T14:30")}});
    CHECK(add_poi_poi(d, 4.0).edge_count() == 0);
  }
  SUBCASE("gap exactly at the window counts") {
    const Dataset d({"u1"}, venues, {{0, 0, at("2016-09-05T09:00")}, {0, 1, at("2016-09-05T13:00")}});
    CHECK(add_poi_poi(d, 4.0).edge_count() == 1);
  }
  SUBCASE("there and back") {
    const Dataset d({"u1"}, venues,
                    {{0, 0, at("2016-09-05T09:00")}, {0, 1, at("2016-09-05T10:00")},
                     {0, 0, at("2016-09-05T11:00")}});
    // Enumerate consecutive pairs by hand.
    std::map<Key, double> expect;
    const auto rs = d.records_of(0);
    for (std::size_t k = 1; k < rs.size(); ++k) {
      if (rs[k - 1].poi != rs[k].poi) expect[{rs[k - 1].poi, rs[k].poi}] += 1;
    }
    CHECK(as_map(add_poi_poi(d)) == expect);
    CHECK(expect == std::map<Key, double>{{{0, 1}, 1}, {{1, 0}, 1}});
  }
  SUBCASE("same POI twice is not a transition; users are separate") {
    const Dataset d({"u1", "u2"}, venues,
                    {{0, 0, at("2016-09-05T09:00")}, {0, 0, at("2016-09-05T09:30")},
                     {1, 2, at("2016-09-05T09:40")}});
    CHECK(add_poi_poi(d).edge_count() == 0);
  }
  SUBCASE("kinds and direction") {
    const Dataset d({"u1"}, venues, {{0, 2, at("2016-09-05T09:00")}, {0, 1, at("2016-09-05T10:00")}});
    const auto g = add_poi_poi(d);
    CHECK(g.context_kind() == NodeKind::Poi);
    CHECK(g.target_kind() == NodeKind::Poi);
    CHECK(g.weight(2, 1) == 1);
    CHECK(g.weight(1, 2) == 0);
  }
}

TEST_CASE("density") {
  std::vector<Edge> complete;
  for (std::uint32_t i = 0; i < 2; ++i) {
    for (std::uint32_t j = 0; j < 3; ++j) complete.push_back({i, j, 1.0});
  }
  CHECK(density(BipartiteGraph(NodeKind::Poi, NodeKind::User, 2, 3, complete)) == 1.0);
  const BipartiteGraph sparse(NodeKind::Poi, NodeKind::User, 4, 2, {{0, 0, 1.0}, {3, 1, 5.0}});
  CHECK(density(sparse) == 0.25);
  const BipartiteGraph plus_one(NodeKind::Poi, NodeKind::User, 4, 2, {{0, 0, 1.0}, {3, 1, 5.0}, {2, 0, 1.0}});
  CHECK(density(plus_one) > density(sparse));
  CHECK_THROWS_AS(density(BipartiteGraph(NodeKind::Poi, NodeKind::User, 0, 3, {})), std::domain_error);
  CHECK_THROWS_AS(density(BipartiteGraph(NodeKind::Poi, NodeKind::User, 3, 0, {})), std::domain_error);
}

TEST_CASE("BipartiteGraph validation") {
  CHECK_THROWS_AS(BipartiteGraph(NodeKind::Poi, NodeKind::User, 1, 1, {{0, 1, 1.0}}), ValidationError);
  CHECK_THROWS_AS(BipartiteGraph(NodeKind::Poi, NodeKind::User, 1, 1, {{0, 0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(BipartiteGraph(NodeKind::Poi, NodeKind::User, 1, 1, {{0, 0, -1.0}}), ValidationError);
  CHECK_THROWS_AS(BipartiteGraph(NodeKind::Poi, NodeKind::User, 1, 1, {{0, 0, 1.0}, {0, 0, 2.0}}),
                  ValidationError);
}

TEST_CASE("neighbors_of_target lists incident contexts in order") {
  const BipartiteGraph g(NodeKind::Poi, NodeKind::User, 4, 2, {{3, 0, 2.0}, {1, 0, 1.0}, {2, 1, 4.0}});
  const auto n0 = g.neighbors_of_target(0);
  REQUIRE(n0.size() == 2);
  CHECK(n0[0].context == 1);
  CHECK(n0[1].context == 3);
  CHECK(n0[1].weight == 2.0);
  CHECK(g.neighbors_of_target(1).size() == 1);
}

TEST_CASE("category prior") {
  const auto venues = std::vector<VenueProfile>{
      fixtures::venue("a", Category::Academic, {Functionality::Classrooms}),
      fixtures::venue("r", Category::Residential, {Functionality::Residence})};
  SUBCASE("degenerate") {
    const Dataset d({"u"}, venues, {{0, 0, at("2016-09-05T08:00")}, {0, 0, at("2016-09-05T09:00")}});
    const auto p = category_prior(d);
    CHECK(p[Category::Academic] == 1.0);
    CHECK(p[Category::Residential] == 0.0);
    CHECK(p[Category::Administration] == 0.0);
    CHECK(p[Category::Auxiliary] == 0.0);
  }
  SUBCASE("six to four") {
    std::vector<Record> recs;
    for (int k = 0; k < 10; ++k) recs.push_back({0, k < 6 ? 0u : 1u, at("2016-09-05T08:00") + std::chrono::minutes{k}});
    const Dataset d({"u"}, venues, recs);
    const auto p = category_prior(d);
    CHECK(p[Category::Academic] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(p[Category::Residential] == doctest::Approx(0.4).epsilon(1e-15));
    const auto pg = category_prior(build_hetero(d));
    for (int c = 0; c < 4; ++c) CHECK(pg.fraction[c] == doctest::Approx(p.fraction[c]).epsilon(1e-15));
  }
  SUBCASE("empty") {
    const Dataset d({"u"}, venues, {});
    CHECK_THROWS_AS(category_prior(d), std::domain_error);
  }
}

TEST_CASE("generated priors sum to one and match a recount") {
  GenConfig cfg;
  cfg.n_users = 40;
  cfg.n_pois = 30;
  cfg.records_per_user = 50;
  const Dataset d = gen_checkins(cfg, gen_population(cfg)).checkins;
  const auto p = category_prior(d);
  std::array<double, 4> counts{};
  for (const auto& r : d.records()) counts[static_cast<int>(d.venues()[r.poi].category)] += 1;
  double sum = 0.0;
  for (int c = 0; c < 4; ++c) {
    sum += p.fraction[c];
    CHECK(p.fraction[c] == doctest::Approx(counts[c] / static_cast<double>(d.records().size())).epsilon(1e-14));
    CHECK(p.fraction[c] >= 0.0);
    CHECK(p.fraction[c] <= 1.0);
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("graph file round trip") {
  const Dataset d = toy();
  HeteroGraph g = build_hetero(d);
  g.poi_poi = add_poi_poi(d);
  std::ostringstream out;
  write_graph(out, g);
  CHECK(out.str().rfind("EDHG-GRAPH v1\n", 0) == 0);
  std::istringstream in(out.str());
  const HeteroGraph back = read_graph(in);
  CHECK(back.counts == g.counts);
  CHECK(as_map(back.poi_user) == as_map(g.poi_user));
  CHECK(as_map(back.poi_time) == as_map(g.poi_time));
  CHECK(as_map(back.activity_poi) == as_map(g.activity_poi));
  REQUIRE(back.poi_poi.has_value());
  CHECK(as_map(*back.poi_poi) == as_map(*g.poi_poi));
  CHECK(back.poi_category == g.poi_category);
  CHECK(back.user_ids == g.user_ids);
  CHECK(back.poi_ids == g.poi_ids);
  CHECK(back.time_mode == TimeMode::Week28);
  std::ostringstream again;
  write_graph(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("ids with spaces and an empty transition graph survive") {
  const Dataset d({"user one"}, {fixtures::venue("main hall", Category::Academic, {Functionality::Others})},
                  {{0, 0, at("2016-09-05T08:00")}});
  HeteroGraph g = build_hetero(d);
  g.poi_poi = add_poi_poi(d);
  std::ostringstream out;
  write_graph(out, g);
  std::istringstream in(out.str());
  const HeteroGraph back = read_graph(in);
  CHECK(back.user_ids == std::vector<std::string>{"user one"});
  CHECK(back.poi_ids == std::vector<std::string>{"main hall"});
  REQUIRE(back.poi_poi.has_value());
  CHECK(back.poi_poi->edge_count() == 0);
}

TEST_CASE("non-integer weights round-trip bit-exactly") {
  HeteroGraph g;
  g.counts = {1, 2, 28, 7};
  g.poi_category = {Category::Academic, Category::Auxiliary};
  g.poi_ids = {"p", "q"};
  g.user_ids = {"u"};
  g.poi_user = BipartiteGraph(NodeKind::Poi, NodeKind::User, 2, 1, {{0, 0, 0.1}, {1, 0, 1.0 / 3.0}});
  g.poi_time = BipartiteGraph(NodeKind::Poi, NodeKind::Time, 2, 28, {{1, 27, 2.5e-300}});
  g.activity_poi = BipartiteGraph(NodeKind::Activity, NodeKind::Poi, 7, 2, {{6, 1, 1.0}});
  std::ostringstream out;
  write_graph(out, g);
  std::istringstream in(out.str());
  const HeteroGraph back = read_graph(in);
  CHECK(back.poi_user.weight(1, 0) == 1.0 / 3.0);
  CHECK(back.poi_user.weight(0, 0) == 0.1);
  CHECK(back.poi_time.weight(1, 27) == 2.5e-300);
}

TEST_CASE("graph reader rejects damage") {
  for (const char* text : {"", "EDHG-GRAPH v2\n", "EDHG-GRAPH v1\nuser 1\npoi 1\ntime 5\nactivity 7\n",
                           "EDHG-GRAPH v1\nuser 1\npoi 1\ntime 28\nactivity 7\nbu 0 0 abc\n",
                           "EDHG-GRAPH v1\nuser 1\npoi 1\ntime 28\nactivity 7\nzz 0 0 1\n",
                           "EDHG-GRAPH v1\nuser 1\npoi 1\ntime 28\nactivity 7\nbu 0 3 1\n",
                           "EDHG-GRAPH v1\nuser 1\npoi 1\ntime 28\nactivity 7\nbb 0 0 1\n"}) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_graph(in), ValidationError);
  }
  CHECK_THROWS_AS(load_graph("/nonexistent/graph.txt"), IoError);
}
