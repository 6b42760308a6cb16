#pragma once

#include "aqo/graph.hpp"
#include "aqo/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace aqo {

class PerturbationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Convergence radius of the small-lambda expansion for c = n.
inline constexpr double kConvergenceRadius = 0.5;

/// Energies closer than this are treated as one unperturbed level.
inline constexpr double kDegeneracyTolerance = 1e-9;

/// Basis states sharing one unperturbed energy.
///
/// A restricted manifold holds only chosen minima (maximal independent sets);
/// a full manifold holds every basis state at that energy, which is what exact
/// degenerate perturbation theory requires.
struct DegenerateManifold {
  double energy = 0.0;
  std::vector<SubsetState> states; // ascending
  bool restricted = true;

  static DegenerateManifold restricted_to(const Graph &g, double c,
                                          std::vector<SubsetState> states);
  static DegenerateManifold full_at(const Graph &g, double c, double energy);
  static DegenerateManifold full_containing(const Graph &g, double c, SubsetState s) {
    return full_at(g, c, classical_energy(g, c, s));
  }

  [[nodiscard]] std::size_t size() const { return states.size(); }
};

struct SecondOrder {
  double e2;
  // Some outside node has exactly one neighbour in s, so an equal-energy state sits
  // two flips away and the non-degenerate formula is unreliable.
  bool degenerate_partner = false;
};

/// E2 = -sum_i Delta_i^2 / B_i for an isolated maximal independent set.
SecondOrder second_order_nondegenerate(const Graph &g, double c, const DriverField &driver,
                                       SubsetState s);

/// E^(0) + lambda^2 E2.
double energy_to_second_order(const Graph &g, double c, const DriverField &driver,
                              SubsetState s, double lambda);

/// Leading Theta(s) part of the order-q correction for an isolated minimum:
/// (-1)^(q/2) (q-2)! / ((q/2-1)! (q/2)!) * s. Odd q is rejected.
double qth_order_coefficient(int q, int set_size);

/// Second-order effective problem on a degenerate manifold.
///
/// A(k, k') sums Delta_i Delta_j / (E_t - E0) over ordered two-flip paths
/// S_k -> t -> S_k'. The lowest perturbed state has energy E0 + lambda^2 * e2 with
/// e2 = -C^T A C, C the top eigenvector of A.
struct EffectiveSecondOrder {
  Eigen::MatrixXd A;
  Eigen::VectorXd C;
  double e2 = 0.0;
  bool restricted = true;
  std::vector<SubsetState> states;

  Eigen::VectorXd eigenvalues;  // of A, ascending
  Eigen::MatrixXd eigenvectors; // columns match eigenvalues

  /// e2 of the lowest branch whose zeroth-order vector has more than half its
  /// weight on the given states.
  [[nodiscard]] double branch_e2(std::span<const SubsetState> targets) const;
};

EffectiveSecondOrder degenerate_effective_matrix(const Graph &g, double c,
                                                 const DriverField &driver,
                                                 const DegenerateManifold &manifold);

struct PredictedCrossing {
  double delta_e0 = 0.0;
  double delta_e2 = 0.0;
  std::optional<double> lambda_star;
  bool within_radius = false;
  double e2_global = 0.0;
  double e2_locals = 0.0;
  bool restricted = true;
};

/// Second-order gap delta_E(lambda) = delta_e0 + lambda^2 delta_e2 between a local
/// manifold and the global minimum; lambda_star is its root when delta_e2 < 0.
PredictedCrossing predict_crossing(const Graph &g, double c, const DriverField &driver,
                                   const DegenerateManifold &global,
                                   const DegenerateManifold &locals);
PredictedCrossing predict_crossing(const Graph &g, double c, const DriverField &driver,
                                   SubsetState global_minimum, const DegenerateManifold &locals);

/// Large-c sufficient condition for no second-order crossing between the global
/// minimum and a class of equal-size local minima.
double sufficient_condition_F(const Graph &g, const DriverField &driver, SubsetState global_minimum,
                              std::span<const SubsetState> locals);

/// Worst-case F across every local size class of a catalog; for each class the best
/// maximum independent set is used. Empty when the catalog has no local minima.
std::optional<double> catalog_condition_F(const Graph &g, const DriverField &driver,
                                          const MinimaCatalog &catalog);

} // namespace aqo
