#include "aqo/lanczos.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace aqo {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void project_out(const MatrixXd &locked, Index count, Eigen::Ref<VectorXd> w) {
  if (count == 0)
    return;
  VectorXd coeff = locked.leftCols(count).transpose() * w;
  w.noalias() -= locked.leftCols(count) * coeff;
}

void apply(const LinearMap &op, const Eigen::Ref<const VectorXd> &in, Eigen::Ref<VectorXd> out) {
  op(std::span<const double>(in.data(), static_cast<std::size_t>(in.size())),
     std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
}

VectorXd random_start(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  VectorXd v(static_cast<Index>(dim));
  for (Index i = 0; i < v.size(); ++i)
    v(i) = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
  return v;
}

} // namespace

EigenPairs lanczos_lowest(const LinearMap &op, std::size_t dim, int k,
                          const LanczosOptions &options) {
  if (k < 1 || static_cast<std::size_t>(k) > dim)
    throw std::invalid_argument("requested " + std::to_string(k) + " eigenpairs of a " +
                                std::to_string(dim) + "-dimensional operator");
  const auto n = static_cast<Index>(dim);
  const std::size_t per_vector = dim * sizeof(double);
  const auto affordable = static_cast<int>(options.memory_budget_bytes / per_vector) - k - 2;
  const int basis_cap = std::clamp(std::min(options.max_basis, affordable), 4, options.max_basis);

  MatrixXd locked(n, k);
  EigenPairs out;
  VectorXd guess; // next Ritz vector of the previous run

  for (int target = 0; target < k; ++target) {
    const Index free_dim = n - target;
    const Index m = std::min<Index>(basis_cap, free_dim);

    MatrixXd V(n, m);
    MatrixXd T = MatrixXd::Zero(m, m);
    VectorXd w(n);
    VectorXd f(n);

    VectorXd start = random_start(dim, options.seed + 0x9E3779B97F4A7C15ull * (target + 1));
    // A warm start keeps a random component so hidden degenerate copies still surface.
    if (guess.size() == n)
      start = guess + 0.1 * start / start.norm();
    project_out(locked, target, start);
    project_out(locked, target, start);
    V.col(0) = start / start.norm();

    Index begin = 0; // first column whose projection must be computed
    double best_residual = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (int cycle = 0; cycle <= options.max_restarts && !converged; ++cycle) {
      Index size = m;
      double beta = 0.0;
      for (Index j = begin; j < m; ++j) {
        apply(op, V.col(j), w);
        project_out(locked, target, w);
        const double before = w.norm();
        VectorXd h = V.leftCols(j + 1).transpose() * w;
        w.noalias() -= V.leftCols(j + 1) * h;
        if (w.norm() < 0.7071 * before) { // heavy cancellation: orthogonalize again
          VectorXd h2 = V.leftCols(j + 1).transpose() * w;
          w.noalias() -= V.leftCols(j + 1) * h2;
          project_out(locked, target, w);
          h += h2;
        }
        for (Index i = 0; i <= j; ++i) {
          T(i, j) = h(i);
          T(j, i) = h(i);
        }
        beta = w.norm();
        if (j + 1 < m) {
          if (beta < 1e-13 * std::max(1.0, std::abs(T(j, j)))) {
            size = j + 1; // invariant subspace
            beta = 0.0;
            break;
          }
          V.col(j + 1) = w / beta;
        }
      }
      f = w;

      Eigen::SelfAdjointEigenSolver<MatrixXd> ritz(T.topLeftCorner(size, size));
      const VectorXd &theta = ritz.eigenvalues();
      const MatrixXd &Y = ritz.eigenvectors();

      const double estimate = std::abs(beta * Y(size - 1, 0));
      if (estimate < options.tolerance || size == free_dim || beta == 0.0) {
        VectorXd x = V.leftCols(size) * Y.col(0);
        project_out(locked, target, x);
        x.normalize();
        VectorXd ax(n);
        apply(op, x, ax);
        const double value = x.dot(ax);
        const double residual = (ax - value * x).norm();
        best_residual = std::min(best_residual, residual);
        if (residual < options.tolerance) {
          guess.resize(0);
          if (size > 1) {
            guess = V.leftCols(size) * Y.col(1);
            guess.normalize();
          }
          locked.col(target) = x;
          out.values.push_back(value);
          out.max_residual = std::max(out.max_residual, residual);
          converged = true;
          break;
        }
      }
      best_residual = std::min(best_residual, estimate);

      // Thick restart: keep the lowest Ritz vectors and continue from the residual.
      const Index keep = std::max<Index>(1, std::min<Index>(size - 1, m / 2));
      MatrixXd kept = V.leftCols(size) * Y.leftCols(keep);
      V.leftCols(keep) = kept;
      T.setZero();
      for (Index i = 0; i < keep; ++i)
        T(i, i) = theta(i);
      if (beta == 0.0) {
        VectorXd fresh = random_start(dim, options.seed + 31 * (cycle + 1) + target);
        project_out(locked, target, fresh);
        fresh.noalias() -= V.leftCols(keep) * (V.leftCols(keep).transpose() * fresh);
        f = fresh;
      }
      f.noalias() -= V.leftCols(keep) * (V.leftCols(keep).transpose() * f);
      V.col(keep) = f / f.norm();
      begin = keep;
    }
    if (!converged)
      throw ConvergenceError("Lanczos did not converge for eigenpair " + std::to_string(target) +
                                 "; best residual " + std::to_string(best_residual),
                             best_residual);
  }

  // Locked pairs come out ascending up to rounding; sort to be safe.
  std::vector<int> order(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return out.values[a] < out.values[b]; });
  EigenPairs sorted;
  sorted.max_residual = out.max_residual;
  for (int i : order) {
    sorted.values.push_back(out.values[i]);
    sorted.vectors.emplace_back(locked.col(i).data(), locked.col(i).data() + n);
  }
  return sorted;
}

} // namespace aqo
