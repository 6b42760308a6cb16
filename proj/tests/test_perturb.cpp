#include "aqo/oracle.hpp"
#include "aqo/perturb.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace aqo;
using aqo::test::set_of;
using doctest::Approx;

namespace {

const DriverField ones(int n) { return DriverField::uniform(n); }

} // namespace

TEST_CASE("non-degenerate second order") {
  CHECK(second_order_nondegenerate(Graph(1), 2.0, ones(1), set_of({0})).e2 == -1.0);

  auto k23 = test::k23();
  auto m = second_order_nondegenerate(k23, 5.0, ones(5), set_of({2, 3, 4}));
  CHECK(m.e2 == Approx(-(3.0 + 2.0 / 14.0)).epsilon(1e-12));
  CHECK_FALSE(m.degenerate_partner);
  auto local = second_order_nondegenerate(k23, 5.0, ones(5), set_of({0, 1}));
  CHECK(local.e2 == Approx(-(2.0 + 3.0 / 9.0)).epsilon(1e-12));

  CHECK(second_order_nondegenerate(test::path3(), 3.0, ones(3), set_of({1})).degenerate_partner);
  CHECK_THROWS_AS(second_order_nondegenerate(test::path3(), 3.0, ones(3), set_of({0})),
                  PerturbationError);
}

TEST_CASE("energy to second order") {
  Graph k1(1);
  CHECK(energy_to_second_order(k1, 2.0, ones(1), set_of({0}), 0.1) == Approx(-1.01));
  CHECK(std::abs(energy_to_second_order(k1, 2.0, ones(1), set_of({0}), 0.1) -
                 (-0.5 - std::sqrt(0.26))) < 1e-4);
  auto k23 = test::k23();
  CHECK(energy_to_second_order(k23, 5.0, ones(5), set_of({2, 3, 4}), 0.0) == -3.0);
  CHECK(energy_to_second_order(k23, 5.0, ones(5), set_of({2, 3, 4}), 0.2) ==
        Approx(-3.0 - 0.04 * (3.0 + 2.0 / 14.0)));
}

TEST_CASE("qth order coefficient") {
  CHECK(qth_order_coefficient(2, 1) == -1.0);
  CHECK(qth_order_coefficient(4, 1) == 1.0);
  CHECK(qth_order_coefficient(6, 2) == -4.0);
  CHECK(qth_order_coefficient(10, 1) == -14.0);
  CHECK_THROWS(qth_order_coefficient(3, 1));
  CHECK_THROWS(qth_order_coefficient(0, 1));
}

TEST_CASE("degenerate effective matrix on K3 and K2") {
  auto k3 = test::k3();
  auto manifold = DegenerateManifold::restricted_to(k3, 3.0, {set_of({0}), set_of({1}), set_of({2})});
  auto eff = degenerate_effective_matrix(k3, 3.0, ones(3), manifold);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(eff.A(a, b) == Approx(a == b ? 2.0 : 1.5));
  CHECK(eff.e2 == Approx(-5.0));
  for (int a = 0; a < 3; ++a)
    CHECK(std::abs(eff.C(a) - 1.0 / std::sqrt(3.0)) < 1e-9);

  auto k2 = test::k2();
  auto pair = degenerate_effective_matrix(
      k2, 3.0, ones(2), DegenerateManifold::restricted_to(k2, 3.0, {set_of({0}), set_of({1})}));
  CHECK(pair.A(0, 0) == Approx(1.5));
  CHECK(pair.A(0, 1) == Approx(1.5));
  CHECK(pair.e2 == Approx(-3.0));
  CHECK(std::abs(pair.C(0) - 1.0 / std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("well-separated manifold decouples") {
  // C6 minima {0,2,4} and {1,3,5} differ in six bits
  auto c6 = generate_graph(GraphKind::cycle, {6});
  auto a = set_of({0, 2, 4}), b = set_of({1, 3, 5});
  auto eff = degenerate_effective_matrix(c6, 6.0, ones(6),
                                         DegenerateManifold::restricted_to(c6, 6.0, {a, b}));
  CHECK(eff.A(0, 1) == 0.0);
  const double best = std::min(second_order_nondegenerate(c6, 6.0, ones(6), a).e2,
                               second_order_nondegenerate(c6, 6.0, ones(6), b).e2);
  CHECK(eff.e2 == Approx(best));
}

TEST_CASE("manifold validation") {
  auto p3 = test::path3();
  CHECK_THROWS_AS(DegenerateManifold::restricted_to(p3, 3.0, {set_of({1}), set_of({0, 2})}),
                  PerturbationError);
  CHECK_THROWS_AS(DegenerateManifold::restricted_to(p3, 3.0, {}), PerturbationError);
  auto full = DegenerateManifold::full_containing(p3, 3.0, set_of({1}));
  CHECK_FALSE(full.restricted);
  CHECK(full.states == std::vector{set_of({0}), set_of({1}), set_of({2})});
  // {0} and {0,1} would be one flip apart
  CHECK_THROWS(DegenerateManifold::restricted_to(p3, 2.0, {set_of({0}), set_of({0, 1})}));
}

TEST_CASE("predict_crossing examples") {
  auto k23 = test::k23();
  auto local = DegenerateManifold::restricted_to(k23, 5.0, {set_of({0, 1})});
  auto p = predict_crossing(k23, 5.0, ones(5), set_of({2, 3, 4}), local);
  CHECK(p.delta_e0 == 1.0);
  CHECK(p.delta_e2 == Approx(1.0 - 3.0 / 9.0 + 2.0 / 14.0));
  CHECK_FALSE(p.lambda_star);
  CHECK_FALSE(p.within_radius);

  auto low_c = predict_crossing(k23, 1.1, ones(5), set_of({2, 3, 4}),
                                DegenerateManifold::restricted_to(k23, 1.1, {set_of({0, 1})}));
  CHECK(low_c.delta_e2 == Approx(-0.6304).epsilon(1e-4));
  REQUIRE(low_c.lambda_star);
  CHECK(*low_c.lambda_star == Approx(1.2595).epsilon(1e-4));
  CHECK_FALSE(low_c.within_radius);

  auto split = test::split72();
  auto catalog = enumerate_maximal_independent_sets(split);
  auto singletons = DegenerateManifold::restricted_to(split, 9.0, catalog.local_sets());
  auto s = predict_crossing(split, 9.0, ones(9), set_of({7, 8}), singletons);
  CHECK(s.delta_e0 == 1.0);
  CHECK(s.delta_e2 == Approx(-7.0 - 14.0 / 8.0 + 2.0 + 7.0 / 17.0));
  REQUIRE(s.lambda_star);
  CHECK(std::abs(*s.lambda_star - 0.397) < 0.001);
  CHECK(*s.lambda_star == Approx(std::sqrt(s.delta_e0 / -s.delta_e2)));
  CHECK(s.within_radius);

  CHECK_THROWS_AS(predict_crossing(k23, 5.0, ones(5), set_of({0, 1}),
                                   DegenerateManifold::restricted_to(k23, 5.0, {set_of({2, 3, 4})})),
                  PerturbationError);
}

TEST_CASE("sufficient condition F") {
  auto split = test::split72();
  auto locals = enumerate_maximal_independent_sets(split).local_sets();
  CHECK(sufficient_condition_F(split, ones(9), set_of({7, 8}), locals) == Approx(-5.0));
  std::vector<double> d(9, 1.0);
  for (int i = 0; i < 7; ++i)
    d[i] = 0.4;
  CHECK(sufficient_condition_F(split, DriverField(d), set_of({7, 8}), locals) ==
        Approx(0.88));

  // no close pairs: F = m - m'
  auto k23 = test::k23();
  CHECK(sufficient_condition_F(k23, ones(5), set_of({2, 3, 4}), std::vector{set_of({0, 1})}) ==
        Approx(1.0));
  CHECK_THROWS(sufficient_condition_F(k23, ones(5), set_of({2, 3, 4}), std::vector<SubsetState>{}));
}

TEST_CASE("restricted A: row-sum bound and Perron vector") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto g = test::random_graph(seed, 3, 10);
    auto catalog = enumerate_maximal_independent_sets(g);
    for (const auto &cls : catalog.degeneracy_classes) {
      auto sets = catalog.sets_of_size(cls.size);
      auto eff = degenerate_effective_matrix(
          g, g.size(), ones(g.size()), DegenerateManifold::restricted_to(g, g.size(), sets));
      CHECK(eff.A.isApprox(eff.A.transpose()));
      CHECK(eff.A.minCoeff() >= 0.0);
      const double top = eff.eigenvalues(eff.eigenvalues.size() - 1);
      CHECK(top <= eff.A.rowwise().sum().maxCoeff() * (1.0 + 1e-12));
      CHECK(eff.C.norm() == Approx(1.0));
      CHECK(eff.e2 == Approx(-eff.C.dot(eff.A * eff.C)));
      CHECK(eff.C.minCoeff() >= 0.0);
    }
    // Perron positivity needs an irreducible A: one close-pair component at a time
    for (const auto &component : test::close_pair_components(catalog)) {
      auto eff = degenerate_effective_matrix(
          g, g.size(), ones(g.size()), DegenerateManifold::restricted_to(g, g.size(), component));
      CHECK(eff.C.minCoeff() > 0.0);
    }
  }
}

TEST_CASE("full-manifold E2 agrees with the series oracle") {
  // P3: {1} shares its energy with the non-maximal {0} and {2}
  auto p3 = test::path3();
  AnnealInstance inst(p3, 3.0);
  auto full = DegenerateManifold::full_containing(p3, 3.0, set_of({1}));
  auto eff = degenerate_effective_matrix(p3, 3.0, inst.driver(), full);
  auto series = oracle::rs_series(inst, std::vector{set_of({1})}, 2);
  CHECK(eff.branch_e2(std::vector{set_of({1})}) == Approx(series[2]).epsilon(1e-9));

  auto c5 = test::c5();
  AnnealInstance c5_inst(c5, 5.0);
  auto c5_full = DegenerateManifold::full_containing(c5, 5.0, set_of({0, 2}));
  auto c5_eff = degenerate_effective_matrix(c5, 5.0, c5_inst.driver(), c5_full);
  auto c5_series = oracle::rs_series(c5_inst, c5_full.states, 2);
  CHECK(std::abs(c5_eff.e2 - c5_series[2]) < 1e-9);
}
