#include "aqo/perturb.hpp"
#include "aqo/strategy.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace aqo;
using aqo::test::set_of;
using doctest::Approx;

namespace {

Mask union_of(const std::vector<SubsetState> &sets) {
  Mask m = 0;
  for (auto s : sets)
    m |= s.mask;
  return m;
}

// Every local class predicted free of second-order crossings (restricted mode).
bool all_delta_e2_positive(const Graph &g, double c, const DriverField &driver,
                           const MinimaCatalog &catalog) {
  auto global = DegenerateManifold::restricted_to(g, c, catalog.maximum_sets());
  for (const auto &cls : catalog.degeneracy_classes) {
    if (cls.size == catalog.mis_size)
      continue;
    auto locals = DegenerateManifold::restricted_to(g, c, catalog.sets_of_size(cls.size));
    if (!(predict_crossing(g, c, driver, global, locals).delta_e2 > 0.0))
      return false;
  }
  return true;
}

} // namespace

TEST_CASE("scale_c") {
  CHECK(scale_c(test::k23()).c == 5.0);
  CHECK(scale_c(test::split72()).c == 9.0);
  auto k1 = scale_c(Graph(1));
  CHECK(k1.c == 1.0 + 1e-6);
  CHECK(k1.warning);
}

TEST_CASE("alpha assignment") {
  auto k23 = test::k23();
  auto catalog = enumerate_maximal_independent_sets(k23);
  auto out = alpha_assignment(k23, catalog, set_of({2, 3, 4}), 5.0, 0.01);
  REQUIRE(out.parameter);
  CHECK(*out.parameter == Approx(1.01 * (3.0 + std::sqrt(17.0)) / 4.0));
  CHECK(std::abs(*out.parameter - 1.798) < 1e-3);
  CHECK(out.driver[2] == *out.parameter);
  CHECK(out.driver[0] == 1.0);
  REQUIRE(out.certificate);
  CHECK(*out.certificate > 0.0);

  auto split = test::split72();
  auto split_out =
      alpha_assignment(split, enumerate_maximal_independent_sets(split), set_of({7, 8}), 9.0, 0.01);
  CHECK(*split_out.parameter == Approx(4.04));
  REQUIRE(split_out.certificate);
  CHECK(*split_out.certificate > 0.0);

  auto empty = generate_graph(GraphKind::empty, {3});
  auto none = alpha_assignment(empty, enumerate_maximal_independent_sets(empty),
                               set_of({0, 1, 2}), 3.0, 0.05);
  CHECK(none.rationale == "no local minima");
  CHECK(none.driver == DriverField::uniform(3));
  CHECK_FALSE(none.certificate);

  CHECK_THROWS(alpha_assignment(k23, catalog, set_of({0, 1}), 5.0, 0.05));
}

TEST_CASE("beta assignment") {
  auto split = test::split72();
  auto catalog = enumerate_maximal_independent_sets(split);
  const Mask clique = 0x7f;
  auto hinted = beta_assignment(split, catalog, clique, 9.0, SizeHint{2, 0});
  CHECK(*hinted.parameter == Approx(0.95 * std::sqrt(2.0 / 9.0)));
  CHECK(std::abs(*hinted.parameter - 0.448) < 1e-3);
  CHECK(hinted.certificate);

  auto fixed = beta_assignment_with(split, catalog, clique, 9.0, 0.4);
  REQUIRE(fixed.certificate);
  CHECK(std::abs(*fixed.certificate - 0.88) < 0.01);

  auto plain = beta_assignment(split, catalog, clique, 9.0);
  CHECK(*plain.parameter == Approx(0.95 / 3.0));

  // P3: the local {1} and MIS {0,2} are disjoint, so p = 0; take instead the union
  // covering the MIS to force p = m
  auto k23 = test::k23();
  auto k23_catalog = enumerate_maximal_independent_sets(k23);
  auto same = beta_assignment(k23, k23_catalog, k23.all_nodes(), 5.0, SizeHint{3, 3});
  CHECK_FALSE(same.certificate);
  CHECK(same.rationale.find("m = p") != std::string::npos);
  CHECK_FALSE(same.warnings.empty());

  CHECK_THROWS(beta_assignment(split, catalog, 0, 9.0));
  CHECK_THROWS(beta_assignment(split, catalog, clique, 9.0, SizeHint{1, 2}));
}

TEST_CASE("strategy invariants over a random corpus") {
  int alpha_checked = 0, beta_checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = test::random_graph(seed + 1000, 3, 12);
    auto catalog = enumerate_maximal_independent_sets(g);
    const auto locals = catalog.local_sets();
    if (locals.empty())
      continue;
    const double c = g.size();
    const auto global = catalog.maximum_sets().front();

    auto alpha = alpha_assignment(g, catalog, global, c);
    CHECK(*alpha.parameter <= g.size());
    CHECK(alpha.certificate);
    if (alpha.certificate)
      CHECK(all_delta_e2_positive(g, c, alpha.driver, catalog));
    ++alpha_checked;

    const Mask locals_union = union_of(locals);
    const int p = SubsetState{global.mask & locals_union}.size();
    if (catalog.mis_size > p) {
      auto beta = beta_assignment(g, catalog, locals_union, c, SizeHint{catalog.mis_size, p});
      CHECK(*beta.parameter * std::sqrt(c) >= 0.5);
      CHECK(beta.certificate);
      if (beta.certificate)
        CHECK(all_delta_e2_positive(g, c, beta.driver, catalog));
      ++beta_checked;
    }
  }
  CHECK(alpha_checked > 50);
  CHECK(beta_checked > 10);
}

TEST_CASE("iterative avoidance") {
  SUBCASE("split(7,2) converges in one round") {
    AnnealInstance inst(test::split72(), 9.0);
    auto result = iterative_avoid(inst);
    CHECK(result.rounds == 1);
    CHECK_FALSE(result.exhausted);
    CHECK_FALSE(result.final_observation.swap);
    REQUIRE(result.log.size() == 2);
    CHECK(result.log[0].swap);
    CHECK(result.log[0].visited.size() == 7);
    CHECK(result.log[1].locals_union == 0x7f);
    CHECK(result.outcome.certificate);
  }
  SUBCASE("no swap means no rounds") {
    AnnealInstance inst(test::k23(), 5.0);
    auto result = iterative_avoid(inst);
    CHECK(result.rounds == 0);
    CHECK(result.outcome.driver == DriverField::uniform(5));
    CHECK_FALSE(result.exhausted);
  }
  SUBCASE("zero budget exhausts on a swapping instance") {
    AnnealInstance inst(test::split72(), 9.0);
    AvoidOptions options;
    options.budget = 0;
    auto result = iterative_avoid(inst, options);
    CHECK(result.exhausted);
    CHECK(result.outcome.rationale.find("budget exhausted") != std::string::npos);
  }
}
