#include "aqo/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace aqo {

namespace {

void require_driver_size(const Graph &g, const DriverField &driver) {
  if (driver.size() != g.size())
    throw PerturbationError("driver size does not match node count");
}

bool contains_sorted(std::span<const SubsetState> sorted, SubsetState s) {
  return std::binary_search(sorted.begin(), sorted.end(), s);
}

} // namespace

DegenerateManifold DegenerateManifold::restricted_to(const Graph &g, double c,
                                                     std::vector<SubsetState> states) {
  if (states.empty())
    throw PerturbationError("manifold must contain at least one state");
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  const double e0 = classical_energy(g, c, states.front());
  for (auto s : states) {
    if (!g.is_valid_state(s))
      throw PerturbationError("manifold state has bits beyond the node count");
    if (std::abs(classical_energy(g, c, s) - e0) >= kDegeneracyTolerance)
      throw PerturbationError("manifold states do not share one classical energy");
  }
  return {e0, std::move(states), true};
}

DegenerateManifold DegenerateManifold::full_at(const Graph &g, double c, double energy) {
  DegenerateManifold m{energy, {}, false};
  for (std::size_t z = 0; z < g.state_count(); ++z) {
    SubsetState s{static_cast<Mask>(z)};
    if (std::abs(classical_energy(g, c, s) - energy) < kDegeneracyTolerance)
      m.states.push_back(s);
  }
  if (m.states.empty())
    throw PerturbationError("no basis state has energy " + std::to_string(energy));
  return m;
}

SecondOrder second_order_nondegenerate(const Graph &g, double c, const DriverField &driver,
                                       SubsetState s) {
  require_valid_penalty(c);
  require_driver_size(g, driver);
  if (!g.is_valid_state(s) || !g.is_independent(s))
    throw PerturbationError("second-order correction needs an independent set");
  SecondOrder out{0.0, false};
  for (int i = 0; i < g.size(); ++i) {
    FlipCost b = flip_cost(g, c, s, i);
    if (b.note == FlipNote::not_maximal)
      throw PerturbationError("set is not maximal: node " + std::to_string(i) +
                              " has no neighbour in it");
    if (b.note == FlipNote::degenerate_partner)
      out.degenerate_partner = true;
    out.e2 -= driver[i] * driver[i] / b.value;
  }
  return out;
}

double energy_to_second_order(const Graph &g, double c, const DriverField &driver,
                              SubsetState s, double lambda) {
  return classical_energy(g, c, s) +
         lambda * lambda * second_order_nondegenerate(g, c, driver, s).e2;
}

double qth_order_coefficient(int q, int set_size) {
  if (q < 2 || q % 2 != 0)
    throw PerturbationError("order must be even and >= 2 (odd orders vanish), got " +
                            std::to_string(q));
  if (set_size < 1)
    throw PerturbationError("set size must be >= 1");
  // (q-2)! / ((q/2-1)! (q/2)!) is the Catalan number of index q/2 - 1.
  const int k = q / 2 - 1;
  double catalan = 1.0;
  for (int i = 0; i < k; ++i)
    catalan = catalan * 2.0 * (2 * i + 1) / (i + 2);
  const double sign = (q / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::round(catalan) * set_size;
}

double EffectiveSecondOrder::branch_e2(std::span<const SubsetState> targets) const {
  std::vector<SubsetState> sorted(targets.begin(), targets.end());
  std::sort(sorted.begin(), sorted.end());
  std::optional<double> best;
  for (Eigen::Index col = 0; col < eigenvectors.cols(); ++col) {
    double weight = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k)
      if (contains_sorted(sorted, states[k]))
        weight += eigenvectors(static_cast<Eigen::Index>(k), col) *
                  eigenvectors(static_cast<Eigen::Index>(k), col);
    if (weight > 0.5)
      best = std::max(best.value_or(-std::numeric_limits<double>::infinity()), eigenvalues(col));
  }
  if (!best)
    throw PerturbationError("no second-order branch is dominated by the requested states");
  return -*best;
}

EffectiveSecondOrder degenerate_effective_matrix(const Graph &g, double c,
                                                 const DriverField &driver,
                                                 const DegenerateManifold &manifold) {
  require_valid_penalty(c);
  require_driver_size(g, driver);
  const auto &states = manifold.states;
  if (states.empty())
    throw PerturbationError("empty manifold");
  for (std::size_t a = 0; a < states.size(); ++a)
    for (std::size_t b = a + 1; b < states.size(); ++b)
      if (hamming_distance(states[a], states[b]) == 1)
        throw PerturbationError("manifold states are one flip apart; first order does not vanish");

  const auto K = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
  const double e0 = manifold.energy;
  for (Eigen::Index k = 0; k < K; ++k) {
    const SubsetState from = states[static_cast<std::size_t>(k)];
    for (int i = 0; i < g.size(); ++i) {
      if (driver[i] == 0.0)
        continue;
      const SubsetState mid = from.flipped(i);
      const double cost = classical_energy(g, c, mid) - e0;
      if (std::abs(cost) < kDegeneracyTolerance)
        throw PerturbationError("intermediate state shares the manifold energy; use a full manifold");
      for (int j = 0; j < g.size(); ++j) {
        const SubsetState to = mid.flipped(j);
        auto it = std::lower_bound(states.begin(), states.end(), to);
        if (it == states.end() || *it != to)
          continue;
        A(k, it - states.begin()) += driver[i] * driver[j] / cost;
      }
    }
  }
  A = 0.5 * (A + A.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  EffectiveSecondOrder out;
  out.A = A;
  out.restricted = manifold.restricted;
  out.states = states;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  out.C = out.eigenvectors.col(K - 1);
  if (out.C.sum() < 0.0)
    out.C = -out.C;
  out.e2 = -out.eigenvalues(K - 1);
  return out;
}

PredictedCrossing predict_crossing(const Graph &g, double c, const DriverField &driver,
                                   const DegenerateManifold &global,
                                   const DegenerateManifold &locals) {
  if (!(locals.energy > global.energy + kDegeneracyTolerance))
    throw PerturbationError("local minima must be strictly smaller than the global minimum");
  PredictedCrossing p;
  p.e2_global = degenerate_effective_matrix(g, c, driver, global).e2;
  p.e2_locals = degenerate_effective_matrix(g, c, driver, locals).e2;
  p.restricted = locals.restricted;
  p.delta_e0 = locals.energy - global.energy;
  p.delta_e2 = p.e2_locals - p.e2_global;
  if (p.delta_e2 < 0.0) {
    p.lambda_star = std::sqrt(p.delta_e0 / -p.delta_e2);
    p.within_radius = *p.lambda_star < kConvergenceRadius;
  }
  return p;
}

PredictedCrossing predict_crossing(const Graph &g, double c, const DriverField &driver,
                                   SubsetState global_minimum, const DegenerateManifold &locals) {
  return predict_crossing(g, c, driver, DegenerateManifold::restricted_to(g, c, {global_minimum}),
                          locals);
}

double sufficient_condition_F(const Graph &g, const DriverField &driver, SubsetState global_minimum,
                              std::span<const SubsetState> locals) {
  require_driver_size(g, driver);
  if (locals.empty())
    throw PerturbationError("sufficient condition needs at least one local minimum");
  std::vector<SubsetState> sorted(locals.begin(), locals.end());
  std::sort(sorted.begin(), sorted.end());
  for (auto s : sorted)
    if (s.size() != sorted.front().size())
      throw PerturbationError("local minima in one condition must share a size");

  double global_term = 0.0;
  for (int i : global_minimum.nodes())
    global_term += driver[i] * driver[i];

  double worst = -std::numeric_limits<double>::infinity();
  for (auto local : sorted) {
    double row = 0.0;
    for (int i : local.nodes()) {
      row += driver[i] * driver[i];
      // Remove i, then add j to land on another local minimum.
      for (Mask m = g.all_nodes() & ~local.mask; m != 0; m &= m - 1) {
        const int j = std::countr_zero(m);
        if (contains_sorted(sorted, local.flipped(i).flipped(j)))
          row += driver[i] * driver[j];
      }
    }
    worst = std::max(worst, row);
  }
  return global_term - worst;
}

std::optional<double> catalog_condition_F(const Graph &g, const DriverField &driver,
                                          const MinimaCatalog &catalog) {
  const auto maxima = catalog.maximum_sets();
  std::optional<double> result;
  for (const auto &cls : catalog.degeneracy_classes) {
    if (cls.size == catalog.mis_size)
      continue;
    const auto locals = catalog.sets_of_size(cls.size);
    double best = -std::numeric_limits<double>::infinity();
    for (auto m : maxima)
      best = std::max(best, sufficient_condition_F(g, driver, m, locals));
    result = std::min(result.value_or(best), best);
  }
  return result;
}

} // namespace aqo
