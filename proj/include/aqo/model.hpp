#pragma once

#include "aqo/graph.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace aqo {

class ModelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// E_P(x) = -sum_i x_i + c * sum_{(i,j) in edges} x_i x_j.
double classical_energy(const Graph &g, double c, SubsetState s);

struct Coupling {
  int u;
  int v;
  double J;
};

/// H_P = sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j + offset, with Z_i = 2 x_i - 1.
/// The constant offset is kept so that diagonal entries equal classical_energy.
struct IsingProblem {
  std::vector<double> h;
  std::vector<Coupling> couplings;
  double c;
  double offset;

  /// <z|H_P|z> evaluated from the spin form.
  [[nodiscard]] double diagonal(SubsetState z) const;
};

IsingProblem build_problem_hamiltonian(const Graph &g, double c);

/// Transverse-field amplitudes Delta_i of H_B = -sum_i Delta_i X_i.
class DriverField {
public:
  explicit DriverField(std::vector<double> amplitudes);
  static DriverField uniform(int n, double value = 1.0);

  [[nodiscard]] const std::vector<double> &amplitudes() const { return amplitudes_; }
  [[nodiscard]] double operator[](int i) const { return amplitudes_[i]; }
  [[nodiscard]] int size() const { return static_cast<int>(amplitudes_.size()); }

  friend bool operator==(const DriverField &, const DriverField &) = default;

private:
  std::vector<double> amplitudes_;
};

/// Graph, penalty coefficient and driver: the family H(lambda) = H_P + lambda H_B.
class AnnealInstance {
public:
  AnnealInstance(Graph graph, double c, DriverField driver);
  AnnealInstance(Graph graph, double c);

  [[nodiscard]] const Graph &graph() const { return graph_; }
  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] const DriverField &driver() const { return driver_; }
  [[nodiscard]] std::size_t dimension() const { return graph_.state_count(); }

  [[nodiscard]] AnnealInstance with_driver(DriverField driver) const {
    return AnnealInstance(graph_, c_, std::move(driver));
  }

private:
  Graph graph_;
  double c_;
  DriverField driver_;
};

/// Matrix-free H(lambda). Classical energies are tabulated once per instance.
class HamiltonianOperator {
public:
  explicit HamiltonianOperator(const AnnealInstance &inst);

  [[nodiscard]] std::size_t dimension() const { return diagonal_.size(); }
  [[nodiscard]] const std::vector<double> &diagonal() const { return diagonal_; }
  [[nodiscard]] const std::vector<double> &driver() const { return driver_; }

  /// out = H(lambda) in
  void apply(double lambda, std::span<const double> in, std::span<double> out) const;

  /// Row-major dense H(lambda); intended for dimensions up to a few thousand.
  [[nodiscard]] std::vector<double> dense(double lambda) const;

private:
  int n_;
  std::vector<double> diagonal_;
  std::vector<double> driver_;
};

std::vector<double> apply_hamiltonian(const AnnealInstance &inst, double lambda,
                                      std::span<const double> v);

enum class FlipNote {
  none,
  not_maximal,        // d_i = 0: s can be extended by adding i
  degenerate_partner, // d_i = 1: an equal-energy state lies 2 flips away
};

struct FlipCost {
  double value;
  FlipNote note;
};

/// B_i = E_P(s xor i) - E_P(s) for an independent set s:
/// 1 when i is in s, c * d_i - 1 otherwise.
FlipCost flip_cost(const Graph &g, double c, SubsetState s, int i);

/// Validates c > 1; used by every entry point that takes a penalty coefficient.
void require_valid_penalty(double c);

} // namespace aqo
