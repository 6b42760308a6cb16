#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace aqo {

class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string &what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  [[nodiscard]] double residual() const { return residual_; }

private:
  double residual_;
};

/// y = A x for a real symmetric A.
using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct LanczosOptions {
  int max_basis = 32;
  int max_restarts = 2000;
  double tolerance = 1e-10; // on ||A x - theta x||
  std::uint64_t seed = 0;
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
};

struct EigenPairs {
  std::vector<double> values; // ascending
  std::vector<std::vector<double>> vectors;
  double max_residual = 0.0;
};

/// Lowest k eigenpairs of a symmetric operator.
///
/// Pairs are found one at a time: each is the lowest eigenpair of A restricted to
/// the orthogonal complement of those already locked, computed by thick-restart
/// Lanczos with full reorthogonalization. Deflation makes repeated eigenvalues
/// come out with their full multiplicity.
EigenPairs lanczos_lowest(const LinearMap &op, std::size_t dim, int k,
                          const LanczosOptions &options = {});

} // namespace aqo
