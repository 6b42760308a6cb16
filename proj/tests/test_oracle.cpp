#include "aqo/oracle.hpp"
#include "aqo/perturb.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace aqo;
using aqo::test::set_of;
using doctest::Approx;

TEST_CASE("landscape examples") {
  auto minima = oracle::landscape_minima(test::path3(), 2.0);
  CHECK(minima == std::vector{set_of({1}), set_of({0, 2})});
  auto landscape = oracle::brute_force_landscape(test::path3(), 2.0);
  CHECK(landscape[set_of({0, 2}).mask].energy == -2.0);
  CHECK(landscape[set_of({1}).mask].energy == -1.0);

  auto k3 = oracle::brute_force_landscape(test::k3(), 2.0);
  int count = 0;
  for (const auto &p : k3)
    if (p.local_minimum) {
      ++count;
      CHECK(p.energy == -1.0);
    }
  CHECK(count == 3);

  auto empty = oracle::landscape_minima(generate_graph(GraphKind::empty, {3}), 2.0);
  CHECK(empty == std::vector{set_of({0, 1, 2})});

  CHECK_THROWS_AS(oracle::brute_force_landscape(Graph(17), 2.0), oracle::OracleError);
}

TEST_CASE("finite-difference E2") {
  AnnealInstance k1(Graph(1), 2.0);
  CHECK(std::abs(oracle::finite_difference_e2(k1, std::vector{set_of({0})}) + 1.0) < 1e-6);

  AnnealInstance k3(test::k3(), 3.0);
  auto bottom = std::vector{set_of({0}), set_of({1}), set_of({2})};
  CHECK(std::abs(oracle::finite_difference_e2(k3, bottom) + 5.0) < 1e-4);

  AnnealInstance k23(test::k23(), 5.0);
  CHECK(std::abs(oracle::finite_difference_e2(k23, std::vector{set_of({2, 3, 4})}) +
                 (3.0 + 2.0 / 14.0)) < 1e-4);

  CHECK_THROWS_AS(oracle::finite_difference_e2(k3, std::vector{set_of({0}), set_of({0, 1})}),
                  oracle::OracleError);
}

TEST_CASE("series on the empty graph") {
  for (int s : {1, 3}) {
    AnnealInstance inst(generate_graph(GraphKind::empty, {static_cast<double>(s)}), 2.0);
    auto series = oracle::rs_series(inst, std::vector{SubsetState{inst.graph().all_nodes()}}, 10);
    CHECK(series[0] == -s);
    for (int q = 1; q <= 10; q += 2)
      CHECK(std::abs(series[q]) < 1e-12);
    for (int q = 2; q <= 10; q += 2)
      CHECK(series[q] == Approx(qth_order_coefficient(q, s)).epsilon(1e-9));
    // coefficient ratio approaches 1 / lambda_c^2 = 4
    CHECK(std::abs(series[10] / series[8]) == Approx(14.0 / 5.0));
  }
}

TEST_CASE("series order two matches the second-order formulas") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 50; ++seed) {
    auto g = test::random_graph(seed, 2, 8);
    AnnealInstance inst(g, g.size());
    auto catalog = enumerate_maximal_independent_sets(g);
    for (const auto &cls : catalog.degeneracy_classes) {
      auto sets = catalog.sets_of_size(cls.size);
      auto full = DegenerateManifold::full_containing(g, inst.c(), sets.front());
      auto series = oracle::rs_series(inst, full.states, 2);
      CHECK(std::abs(series[1]) < 1e-12);
      if (full.size() == 1) {
        auto e2 = second_order_nondegenerate(g, inst.c(), inst.driver(), sets.front());
        CHECK(std::abs(series[2] - e2.e2) < 1e-9);
      } else {
        auto eff = degenerate_effective_matrix(g, inst.c(), inst.driver(), full);
        CHECK(std::abs(series[2] - eff.e2) < 1e-9);
      }
      ++checked;
    }
  }
}

TEST_CASE("targets must share one unperturbed energy") {
  AnnealInstance p3(test::path3(), 2.0);
  CHECK_THROWS_AS(oracle::rs_series(p3, std::vector{set_of({1}), set_of({0, 2})}, 4),
                  oracle::OracleError);
  CHECK_THROWS_AS(oracle::rs_series(p3, std::vector{set_of({1})}, 11), oracle::OracleError);
}
