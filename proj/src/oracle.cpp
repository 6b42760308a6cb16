#include "aqo/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace aqo::oracle {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<double> energies(const Graph &g, double c) {
  const auto edges = g.edges();
  std::vector<double> e(g.state_count());
  for (std::size_t z = 0; z < e.size(); ++z) {
    double value = 0.0;
    for (int i = 0; i < g.size(); ++i)
      if ((z >> i) & 1u)
        value -= 1.0;
    for (auto [u, v] : edges)
      if (((z >> u) & 1u) && ((z >> v) & 1u))
        value += c;
    e[z] = value;
  }
  return e;
}

void require_dense_size(const Graph &g) {
  if (g.size() > kMaxDenseNodes)
    throw OracleError("dense oracle limited to " + std::to_string(kMaxDenseNodes) + " nodes");
}

double common_energy(const std::vector<double> &e, std::span<const SubsetState> targets) {
  if (targets.empty())
    throw OracleError("no target states");
  const double e0 = e[targets.front().mask];
  for (auto s : targets)
    if (std::abs(e[s.mask] - e0) > 1e-9)
      throw OracleError("target states do not share one unperturbed energy");
  return e0;
}

} // namespace

std::vector<LandscapePoint> brute_force_landscape(const Graph &g, double c) {
  if (g.size() > kMaxLandscapeNodes)
    throw OracleError("landscape limited to " + std::to_string(kMaxLandscapeNodes) + " nodes");
  const auto e = energies(g, c);
  std::vector<LandscapePoint> out(e.size());
  for (std::size_t z = 0; z < e.size(); ++z) {
    bool minimum = true;
    for (int i = 0; i < g.size() && minimum; ++i)
      minimum = e[z ^ (std::size_t{1} << i)] > e[z];
    out[z] = {SubsetState{static_cast<Mask>(z)}, e[z], minimum};
  }
  return out;
}

std::vector<SubsetState> landscape_minima(const Graph &g, double c) {
  const auto edges = g.edges();
  std::vector<SubsetState> out;
  for (const auto &p : brute_force_landscape(g, c)) {
    if (!p.local_minimum)
      continue;
    bool independent = true;
    for (auto [u, v] : edges)
      independent = independent && !(p.state.contains(u) && p.state.contains(v));
    if (independent)
      out.push_back(p.state);
  }
  return out;
}

std::vector<double> dense_hamiltonian(const Graph &g, double c, std::span<const double> driver,
                                      double lambda) {
  require_dense_size(g);
  if (static_cast<int>(driver.size()) != g.size())
    throw OracleError("driver size mismatch");
  const auto e = energies(g, c);
  const std::size_t n = e.size();
  std::vector<double> h(n * n, 0.0);
  for (std::size_t z = 0; z < n; ++z) {
    h[z * n + z] = e[z];
    for (int i = 0; i < g.size(); ++i)
      h[z * n + (z ^ (std::size_t{1} << i))] -= lambda * driver[i];
  }
  return h;
}

DenseSpectrum dense_spectrum(const Graph &g, double c, std::span<const double> driver,
                             double lambda) {
  auto h = dense_hamiltonian(g, c, driver, lambda);
  const auto n = static_cast<Index>(g.state_count());
  Eigen::Map<const MatrixXd> H(h.data(), n, n);
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(H);
  DenseSpectrum out;
  for (Index i = 0; i < n; ++i) {
    out.values.push_back(solver.eigenvalues()(i));
    const auto col = solver.eigenvectors().col(i);
    out.vectors.emplace_back(col.data(), col.data() + n);
  }
  return out;
}

std::vector<double> dense_eigenvalues(const Graph &g, double c, std::span<const double> driver,
                                      double lambda) {
  auto h = dense_hamiltonian(g, c, driver, lambda);
  const auto n = static_cast<Index>(g.state_count());
  Eigen::Map<const MatrixXd> H(h.data(), n, n);
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(H, Eigen::EigenvaluesOnly);
  const auto &values = solver.eigenvalues();
  return {values.data(), values.data() + n};
}

double tracked_energy(const AnnealInstance &inst, std::span<const SubsetState> targets,
                      double lambda, double window) {
  const auto &g = inst.graph();
  const double e0 = common_energy(energies(g, inst.c()), targets);
  const auto spec = dense_spectrum(g, inst.c(), inst.driver().amplitudes(), lambda);
  std::vector<double> candidates;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    if (std::abs(spec.values[i] - e0) > window)
      continue;
    double weight = 0.0;
    for (auto s : targets)
      weight += spec.vectors[i][s.mask] * spec.vectors[i][s.mask];
    if (weight > 0.5)
      candidates.push_back(spec.values[i]);
  }
  if (candidates.empty())
    throw OracleError("no exact level is dominated by the target states");
  std::sort(candidates.begin(), candidates.end());
  if (candidates.size() > 1 && candidates[1] - candidates[0] < 1e-10)
    throw OracleError("tracking ambiguity: two target levels closer than 1e-10");
  return candidates.front();
}

double finite_difference_e2(const AnnealInstance &inst, std::span<const SubsetState> targets,
                            double h) {
  if (!(h > 0.0))
    throw OracleError("finite-difference step must be positive");
  const double e0 = common_energy(energies(inst.graph(), inst.c()), targets);
  auto quotient = [&](double step) {
    return (tracked_energy(inst, targets, step) - e0) / (step * step);
  };
  const double coarse = quotient(h);
  const double fine = quotient(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> rs_series(const AnnealInstance &inst, std::span<const SubsetState> targets,
                              int max_order) {
  const auto &g = inst.graph();
  require_dense_size(g);
  if (max_order < 0 || max_order > 10)
    throw OracleError("rs_series supports orders 0..10");
  const auto e = energies(g, inst.c());
  const double e0 = common_energy(e, targets);
  const auto n = static_cast<Index>(e.size());

  std::vector<Index> space;
  for (Index z = 0; z < n; ++z)
    if (std::abs(e[z] - e0) < 1e-9)
      space.push_back(z);
  for (std::size_t a = 0; a < space.size(); ++a)
    for (std::size_t b = a + 1; b < space.size(); ++b)
      if (std::popcount(static_cast<unsigned>(space[a] ^ space[b])) == 1)
        throw OracleError("unperturbed eigenspace contains states one flip apart");
  const auto K = static_cast<Index>(space.size());

  MatrixXd V = MatrixXd::Zero(n, n);
  for (Index z = 0; z < n; ++z)
    for (int i = 0; i < g.size(); ++i)
      V(z, z ^ (Index{1} << i)) -= inst.driver()[i];

  VectorXd resolvent = VectorXd::Zero(n);
  for (Index z = 0; z < n; ++z)
    if (std::abs(e[z] - e0) >= 1e-9)
      resolvent(z) = 1.0 / (e0 - e[z]);

  auto project_p = [&](const MatrixXd &m) {
    MatrixXd out(K, m.cols());
    for (Index a = 0; a < K; ++a)
      out.row(a) = m.row(space[a]);
    return out;
  };

  // Bloch wave operator: Omega_k = R [V Omega_{k-1} - sum_j Omega_j (P V Omega_{k-1-j})].
  std::vector<MatrixXd> omega;
  std::vector<MatrixXd> w(static_cast<std::size_t>(max_order) + 1); // w[k] = P V Omega_{k-1}
  omega.push_back(MatrixXd::Zero(n, K));
  for (Index a = 0; a < K; ++a)
    omega[0](space[a], a) = 1.0;
  for (int k = 1; k <= max_order; ++k) {
    MatrixXd v_prev = V * omega[k - 1];
    w[k] = project_p(v_prev);
    if (k == max_order)
      break;
    MatrixXd next = v_prev;
    for (int j = 1; j <= k - 1; ++j)
      next -= omega[j] * w[k - j];
    omega.push_back(resolvent.asDiagonal() * next);
  }

  std::vector<double> series(static_cast<std::size_t>(max_order) + 1, 0.0);
  series[0] = e0;
  if (max_order == 0)
    return series;
  if (K == 1) {
    for (int k = 1; k <= max_order; ++k)
      series[k] = w[k](0, 0);
    return series;
  }

  if (w[1].norm() > 1e-12)
    throw OracleError("first-order effective matrix does not vanish");
  if (max_order == 1)
    return series;

  // Expand the branch eigenvalue of W2 + lambda W3 + lambda^2 W4 + ...
  const MatrixXd A0 = 0.5 * (w[2] + w[2].transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(A0);
  std::optional<Index> branch;
  for (Index col = 0; col < K && !branch; ++col) {
    double weight = 0.0;
    for (Index a = 0; a < K; ++a)
      if (std::find(targets.begin(), targets.end(), SubsetState{static_cast<Mask>(space[a])}) !=
          targets.end())
        weight += eig.eigenvectors()(a, col) * eig.eigenvectors()(a, col);
    if (weight > 0.5)
      branch = col;
  }
  if (!branch)
    throw OracleError("no second-order branch is dominated by the targets");
  const double mu0 = eig.eigenvalues()(*branch);
  series[2] = mu0;
  if (max_order == 2)
    return series;
  for (Index col = 0; col < K; ++col)
    if (col != *branch && std::abs(eig.eigenvalues()(col) - mu0) < 1e-8)
      throw OracleError("tracking ambiguity: second-order branch is degenerate");

  const VectorXd y0 = eig.eigenvectors().col(*branch);
  MatrixXd pseudo = MatrixXd::Zero(K, K);
  for (Index col = 0; col < K; ++col)
    if (col != *branch)
      pseudo += eig.eigenvectors().col(col) * eig.eigenvectors().col(col).transpose() /
                (eig.eigenvalues()(col) - mu0);

  auto A = [&](int j) -> const MatrixXd & { return w[j + 2]; };
  std::vector<VectorXd> x{y0};
  std::vector<double> mu{mu0};
  for (int k = 1; k + 2 <= max_order; ++k) {
    double value = 0.0;
    for (int j = 1; j <= k; ++j)
      value += y0.dot(A(j) * x[k - j]);
    mu.push_back(value);
    VectorXd rhs = VectorXd::Zero(K);
    for (int j = 1; j <= k; ++j)
      rhs += mu[j] * x[k - j] - A(j) * x[k - j];
    x.push_back(pseudo * rhs);
    series[k + 2] = value;
  }
  return series;
}

} // namespace aqo::oracle
