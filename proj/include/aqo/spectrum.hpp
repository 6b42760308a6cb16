#pragma once

#include "aqo/lanczos.hpp"
#include "aqo/model.hpp"
#include "aqo/perturb.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace aqo {

enum class SolverKind { automatic, dense, lanczos };

/// Largest dimension for which the automatic choice uses dense diagonalization.
inline constexpr std::size_t kAutoDenseDimension = 128;
/// Dense diagonalization is refused above this dimension (2^12).
inline constexpr std::size_t kMaxDenseDimension = 4096;

struct SolverOptions {
  SolverKind kind = SolverKind::automatic;
  LanczosOptions lanczos;
};

struct LowestEigenpairs {
  std::vector<double> values; // ascending
  std::vector<std::vector<double>> vectors;
  double max_residual = 0.0;
  SolverKind used = SolverKind::dense;
};

/// k lowest eigenpairs of H(lambda).
LowestEigenpairs eigensolve_lowest(const HamiltonianOperator &op, double lambda, int k,
                                   const SolverOptions &options = {});
LowestEigenpairs eigensolve_lowest(const AnnealInstance &inst, double lambda, int k,
                                   const SolverOptions &options = {});

/// Squared norm of the projection of v onto the span of the given basis states.
double weight_on(std::span<const double> v, std::span<const SubsetState> states);

/// points values geometrically spaced from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int points);

struct SpectrumTrace {
  std::vector<double> lambdas;
  std::vector<std::vector<double>> eigenvalues; // [point][level], ascending
  std::vector<double> overlap_M;
  std::vector<double> overlap_locals;
  // labels[point][level] is the adiabatic label of that level, matched by maximal
  // eigenvector overlap with the previous point. Empty when vectors were too large
  // to keep.
  std::vector<std::vector<int>> labels;
  std::vector<SubsetState> tracked_global;
  std::vector<SubsetState> tracked_locals;

  [[nodiscard]] std::size_t points() const { return lambdas.size(); }
  [[nodiscard]] int levels() const {
    return eigenvalues.empty() ? 0 : static_cast<int>(eigenvalues.front().size());
  }
  /// Energies of the level carrying the given adiabatic label at each point.
  [[nodiscard]] std::vector<double> adiabatic_level(int label) const;
};

struct SweepOptions {
  int k = 4;
  SolverOptions solver;
  // Insert midpoints wherever overlap_M jumps by 0.5 or more between neighbours,
  // down to this lambda spacing.
  bool refine = true;
  double refine_resolution = 1e-4;
  unsigned workers = 0;                                  // 0: hardware concurrency
  std::size_t label_memory_bytes = std::size_t{1} << 28; // cap on kept eigenvectors
};

/// Exact low-lying spectrum over an ascending positive lambda grid.
SpectrumTrace sweep(const AnnealInstance &inst, std::vector<double> grid,
                    std::span<const SubsetState> global, std::span<const SubsetState> locals,
                    const SweepOptions &options = {});

struct GapMinimum {
  double g_min;
  double lambda_min;
};

/// Coarse minimum of E1 - E0 over the trace, refined by golden-section search.
GapMinimum min_gap(const SpectrumTrace &trace, const AnnealInstance &inst,
                   const SolverOptions &options = {}, double resolution = 1e-4);

struct CrossingObservation {
  double g_min = 0.0;
  double lambda_min = 0.0;
  bool swap = false;
  std::optional<double> swap_lambda;
  // First grid point at which the tracked locals outweigh the global minimum.
  std::optional<double> locals_dominant_lambda;
  std::optional<bool> agrees_with_prediction;
};

/// Character swap: the ground state starts M-dominated (overlap_M >= 1/2) and later
/// becomes locals-dominated (overlap_locals > overlap_M). swap_lambda is where
/// overlap_M falls through 1/2 on the way, refined by bisection.
CrossingObservation detect_anticrossing(const SpectrumTrace &trace, const AnnealInstance &inst,
                                        const std::optional<PredictedCrossing> &predicted,
                                        const SolverOptions &options = {},
                                        double resolution = 1e-4);

/// Header "lambda,e0,...,e{k-1},overlap_M,overlap_locals"; 12 significant digits.
void write_trace_csv(std::ostream &os, const SpectrumTrace &trace);

} // namespace aqo
