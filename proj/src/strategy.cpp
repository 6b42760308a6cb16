#include "aqo/strategy.hpp"

#include "aqo/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace aqo {

namespace {

std::optional<double> positive_certificate(const Graph &g, const DriverField &driver,
                                           const MinimaCatalog &catalog) {
  auto f = catalog_condition_F(g, driver, catalog);
  if (f && *f > 0.0)
    return f;
  return std::nullopt;
}

int largest_local_size(const MinimaCatalog &catalog) {
  int size = 0;
  for (int s : catalog.sizes)
    if (s < catalog.mis_size)
      size = std::max(size, s);
  return size;
}

} // namespace

ScaledPenalty scale_c(const Graph &g) {
  const double n = g.size();
  if (n > 1.0)
    return {n, std::nullopt};
  return {1.0 + 1e-6, "c = n = 1 is not a legal penalty; clamped to 1 + 1e-6"};
}

double alpha_threshold(int n, int local_size) {
  const double gap = n - local_size;
  return (gap + std::sqrt(gap * gap + 8.0 * (local_size - 1))) / 4.0;
}

StrategyOutcome alpha_assignment(const Graph &g, const MinimaCatalog &catalog,
                                 SubsetState global_minimum, double c, double margin) {
  require_valid_penalty(c);
  if (!catalog.index_of(global_minimum) || global_minimum.size() != catalog.mis_size)
    throw std::invalid_argument("alpha assignment needs a maximum independent set");
  if (!(margin > 0.0))
    throw std::invalid_argument("alpha margin must be positive");

  const int local_size = largest_local_size(catalog);
  if (local_size == 0)
    return {DriverField::uniform(g.size()), c, std::nullopt, "no local minima", std::nullopt,
            {}};

  const double alpha = (1.0 + margin) * alpha_threshold(g.size(), local_size);
  std::vector<double> amplitudes(static_cast<std::size_t>(g.size()), 1.0);
  for (int i : global_minimum.nodes())
    amplitudes[i] = alpha;
  DriverField driver(std::move(amplitudes));
  StrategyOutcome out{driver, c, positive_certificate(g, driver, catalog),
                      "alpha assignment on the known global minimum", alpha,
                      {"diagnostic only: requires the solution"}};
  if (!out.certificate)
    out.warnings.push_back("F is not positive for every local class");
  return out;
}

StrategyOutcome beta_assignment_with(const Graph &g, const MinimaCatalog &catalog,
                                     Mask locals_union, double c, double beta) {
  require_valid_penalty(c);
  if ((locals_union & ~g.all_nodes()) != 0)
    throw std::invalid_argument("locals union has bits beyond the node count");
  if (locals_union == 0)
    throw std::invalid_argument("beta assignment needs at least one known local minimum");
  if (!(beta > 0.0))
    throw std::invalid_argument("beta must be positive");

  std::vector<double> amplitudes(static_cast<std::size_t>(g.size()), 1.0);
  for (int i : SubsetState{locals_union}.nodes())
    amplitudes[i] = beta;
  DriverField driver(std::move(amplitudes));
  StrategyOutcome out{driver, c, positive_certificate(g, driver, catalog),
                      "beta assignment on the union of known local minima", beta, {}};

  bool uncovered_mis = false;
  for (auto m : catalog.maximum_sets())
    uncovered_mis = uncovered_mis || (m.mask & ~locals_union) != 0;
  if (!uncovered_mis)
    out.warnings.push_back("m = p; assignment may not eliminate all such crossings");
  return out;
}

StrategyOutcome beta_assignment(const Graph &g, const MinimaCatalog &catalog, Mask locals_union,
                                double c, std::optional<SizeHint> hint, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("beta epsilon must be in (0, 1)");
  const double n = g.size();
  const double conservative = (1.0 - epsilon) / std::sqrt(n);
  if (!hint)
    return beta_assignment_with(g, catalog, locals_union, c, conservative);

  if (hint->p < 0 || hint->m < hint->p || hint->m > g.size())
    throw std::invalid_argument("size hint needs 0 <= p <= m <= n");
  if (hint->m == hint->p) {
    auto out = beta_assignment_with(g, catalog, locals_union, c, conservative);
    out.certificate.reset();
    out.rationale = "m = p; assignment may not eliminate all such crossings";
    return out;
  }
  const double beta =
      (1.0 - epsilon) * std::sqrt(static_cast<double>(hint->m - hint->p) / (n - hint->p));
  return beta_assignment_with(g, catalog, locals_union, c, beta);
}

namespace {

// Local minima carrying at least kVisitThreshold of the ground-state weight that
// sits on local minima at lambda.
std::vector<SubsetState> visited_locals(const AnnealInstance &inst, double lambda,
                                        const std::vector<SubsetState> &locals,
                                        const SolverOptions &solver) {
  auto pairs = eigensolve_lowest(inst, lambda, 1, solver);
  const auto &ground = pairs.vectors.front();
  double total = 0.0;
  for (auto s : locals)
    total += ground[s.mask] * ground[s.mask];
  std::vector<SubsetState> out;
  if (total <= 0.0)
    return out;
  for (auto s : locals)
    if (ground[s.mask] * ground[s.mask] / total > kVisitThreshold)
      out.push_back(s);
  return out;
}

std::vector<SubsetState> close_under_neighbors(const Graph &g, std::vector<SubsetState> seeds) {
  std::set<SubsetState> seen(seeds.begin(), seeds.end());
  std::deque<SubsetState> queue(seeds.begin(), seeds.end());
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (auto t : degenerate_neighbors(g, s))
      if (seen.insert(t).second)
        queue.push_back(t);
  }
  return {seen.begin(), seen.end()};
}

} // namespace

AvoidResult iterative_avoid(const AnnealInstance &inst, const AvoidOptions &options) {
  if (options.budget < 0)
    throw std::invalid_argument("budget must be non-negative");
  const Graph &g = inst.graph();
  const auto catalog = enumerate_maximal_independent_sets(g);
  const auto global = catalog.maximum_sets();
  const auto locals = catalog.local_sets();

  AvoidResult result{StrategyOutcome{inst.driver(), inst.c(), std::nullopt, "", std::nullopt, {}},
                     {}, 0, false, {}};
  AnnealInstance current = inst;
  Mask locals_union = 0;

  for (int round = 0;; ++round) {
    auto trace = sweep(current, options.grid, global, locals, options.sweep);
    auto obs = detect_anticrossing(trace, current, std::nullopt, options.sweep.solver);
    RoundLog entry{round,           current.driver(), std::nullopt, std::nullopt,
                   obs.swap,        obs.swap_lambda,  {},           locals_union};
    entry.condition_F = catalog_condition_F(g, current.driver(), catalog);
    if (entry.condition_F && *entry.condition_F > 0.0)
      entry.certificate = entry.condition_F;
    result.final_observation = obs;

    if (!obs.swap) {
      result.log.push_back(entry);
      result.outcome.driver = current.driver();
      result.outcome.certificate = entry.certificate;
      result.outcome.rationale =
          round == 0 ? "no swap observed; driver unchanged"
                     : "swap removed after " + std::to_string(round) + " beta adjustment(s)";
      break;
    }
    if (round == options.budget) {
      result.log.push_back(entry);
      result.exhausted = true;
      result.outcome.driver = current.driver();
      result.outcome.certificate = entry.certificate;
      result.outcome.rationale = "budget exhausted with the swap still present";
      break;
    }

    entry.visited =
        visited_locals(current, *obs.locals_dominant_lambda, locals, options.sweep.solver);
    for (auto s : close_under_neighbors(g, entry.visited))
      locals_union |= s.mask;
    result.log.push_back(entry);
    if (locals_union == 0) {
      result.exhausted = true;
      result.outcome.rationale = "swap observed but no local minimum could be identified";
      break;
    }

    auto next = beta_assignment(g, catalog, locals_union, inst.c());
    result.outcome = next;
    current = current.with_driver(next.driver);
    result.rounds = round + 1;
  }
  return result;
}

} // namespace aqo
