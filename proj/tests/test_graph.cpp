#include "aqo/graph.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace aqo;
using aqo::test::set_of;

TEST_CASE("parse_graph reads the instance format") {
  auto g = test::path3();
  CHECK(g.size() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(1, 2));
  CHECK_FALSE(g.adjacent(0, 2));

  auto single = parse_graph("1");
  CHECK(single.size() == 1);
  CHECK(single.edge_count() == 0);

  auto commented = parse_graph("# header\n3\n\n# edge list\n0 1\n1 2\n");
  CHECK(commented == g);
}

TEST_CASE("parse_graph reports the offending line") {
  auto line_of = [](const char *text) {
    try {
      parse_graph(text);
    } catch (const ParseError &e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("3\n0 0") == 2);
  CHECK(line_of("3\n0 1\n1 3") == 3);
  CHECK(line_of("3\n0 x") == 2);
  CHECK(line_of("3\n0 1 2") == 2);
  CHECK(line_of("25") == 1);
  CHECK(line_of("0") == 1);
  CHECK(line_of("") >= 0);
}

TEST_CASE("duplicate edges are ignored") {
  auto g = parse_graph("2\n0 1\n1 0\n");
  CHECK(g.edge_count() == 1);
}

TEST_CASE("generators") {
  CHECK(test::k3().edge_count() == 3);
  CHECK(test::k23().edge_count() == 6);
  auto split = test::split72();
  CHECK(split.size() == 9);
  CHECK(split.edge_count() == 35);
  CHECK(generate_graph(GraphKind::empty, {4}).edge_count() == 0);
  CHECK(test::c5().edge_count() == 5);

  auto spec = parse_generator_spec("split:7,2");
  CHECK(spec.kind == GraphKind::split);
  CHECK(generate_graph(spec) == split);

  CHECK_THROWS_AS(parse_generator_spec("nonsense:3"), GraphError);
  CHECK_THROWS_AS(generate_graph(GraphKind::random_gnp, {6, 0.5}), GraphError);
  auto a = generate_graph(GraphKind::random_gnp, {10, 0.4}, 42);
  auto b = generate_graph(GraphKind::random_gnp, {10, 0.4}, 42);
  CHECK(a == b);
}

TEST_CASE("enumeration examples") {
  auto p3 = enumerate_maximal_independent_sets(test::path3());
  REQUIRE(p3.sets.size() == 2);
  CHECK(p3.sets[0] == set_of({1}));
  CHECK(p3.sets[1] == set_of({0, 2}));
  CHECK(p3.mis_size == 2);
  CHECK(p3.maximum_sets() == std::vector{set_of({0, 2})});
  CHECK(p3.local_sets() == std::vector{set_of({1})});

  auto k3 = enumerate_maximal_independent_sets(test::k3());
  CHECK(k3.sets.size() == 3);
  CHECK(k3.degeneracy_classes.size() == 1);
  CHECK(k3.close_pairs.size() == 3);

  auto c5 = enumerate_maximal_independent_sets(test::c5());
  CHECK(c5.sets.size() == 5);
  for (int i = 0; i < 5; ++i) {
    auto partners = std::count_if(c5.close_pairs.begin(), c5.close_pairs.end(),
                                  [&](auto p) { return p.first == i || p.second == i; });
    CHECK(partners == 2);
  }

  auto split = enumerate_maximal_independent_sets(test::split72());
  CHECK(split.sets.size() == 8);
  CHECK(split.mis_size == 2);
}

TEST_CASE("enumeration matches brute force on random graphs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto g = test::random_graph(seed, 1, 12);
    auto catalog = enumerate_maximal_independent_sets(g);
    REQUIRE(catalog.sets == test::brute_force_maximal(g));
    for (auto [i, j] : catalog.close_pairs) {
      CHECK(i < j);
      CHECK(catalog.sizes[i] == catalog.sizes[j]);
      CHECK(hamming_distance(catalog.sets[i], catalog.sets[j]) == 2);
    }
    // degenerate_neighbors is exactly the close-pair partner list
    for (std::size_t i = 0; i < catalog.sets.size(); ++i) {
      std::vector<SubsetState> partners;
      for (auto [a, b] : catalog.close_pairs) {
        if (a == static_cast<int>(i))
          partners.push_back(catalog.sets[b]);
        if (b == static_cast<int>(i))
          partners.push_back(catalog.sets[a]);
      }
      std::sort(partners.begin(), partners.end());
      CHECK(degenerate_neighbors(g, catalog.sets[i]) == partners);
    }
  }
}

TEST_CASE("degenerate_neighbors examples") {
  CHECK(degenerate_neighbors(test::k3(), set_of({0})) == std::vector{set_of({1}), set_of({2})});
  CHECK(degenerate_neighbors(test::path3(), set_of({1})).empty());
  CHECK(degenerate_neighbors(test::c5(), set_of({0, 2})) ==
        std::vector{set_of({0, 3}), set_of({2, 4})});
  CHECK_THROWS(degenerate_neighbors(test::path3(), set_of({0})));
  CHECK_THROWS(degenerate_neighbors(test::path3(), set_of({0, 1})));
}

TEST_CASE("greedy_repair examples") {
  auto p3 = greedy_repair(test::path3(), 2.0, set_of({0, 1, 2}));
  CHECK(p3.result == set_of({0, 2}));
  CHECK(p3.steps.size() == 1);
  CHECK(p3.initial_bilinear_energy == 4.0);

  auto k3 = greedy_repair(test::k3(), 2.0, set_of({0, 1, 2}));
  CHECK(k3.result.size() == 1);
  CHECK(k3.steps.size() == 2);

  auto same = greedy_repair(test::path3(), 2.0, set_of({0, 2}));
  CHECK(same.result == set_of({0, 2}));
  CHECK(same.steps.empty());
}

TEST_CASE("greedy_repair is monotone and ends independent") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = test::random_graph(seed, 2, 10);
    for (Mask z = 0; z < g.state_count(); ++z) {
      auto path = greedy_repair(g, 3.0, SubsetState{z});
      double previous = path.initial_bilinear_energy;
      for (const auto &step : path.steps) {
        CHECK(step.bilinear_energy <= previous);
        previous = step.bilinear_energy;
      }
      CHECK(g.is_independent(path.result));
    }
  }
}
