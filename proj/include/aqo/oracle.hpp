#pragma once

// Brute-force references for the analysis modules. Everything here evaluates the
// cost function and builds H(lambda) on its own from the edge list; only the data
// types are shared with the library.

#include "aqo/graph.hpp"
#include "aqo/model.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace aqo::oracle {

class OracleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxLandscapeNodes = 16;
inline constexpr int kMaxDenseNodes = 10;

struct LandscapePoint {
  SubsetState state;
  double energy;
  bool local_minimum; // every single flip strictly raises the energy
};

std::vector<LandscapePoint> brute_force_landscape(const Graph &g, double c);

/// Independent local minima of the landscape, ascending by mask.
std::vector<SubsetState> landscape_minima(const Graph &g, double c);

/// Row-major dense H(lambda) assembled directly from the edge list.
std::vector<double> dense_hamiltonian(const Graph &g, double c, std::span<const double> driver,
                                      double lambda);

/// All eigenvalues (ascending) and column eigenvectors of the dense H(lambda).
struct DenseSpectrum {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};
DenseSpectrum dense_spectrum(const Graph &g, double c, std::span<const double> driver,
                             double lambda);

/// Eigenvalues only, ascending.
std::vector<double> dense_eigenvalues(const Graph &g, double c, std::span<const double> driver,
                                      double lambda);

/// Exact eigenvalue of the level emerging from the lowest branch of the targets:
/// among eigenvalues within `window` of the unperturbed energy whose eigenvector
/// carries more than half its weight on the targets, the lowest.
double tracked_energy(const AnnealInstance &inst, std::span<const SubsetState> targets,
                      double lambda, double window = 0.25);

/// Second-order coefficient of the tracked level from exact spectra at lambda = h and
/// h/2, with one Richardson step. Returns E2 such that E(lambda) ~ E0 + E2 lambda^2.
double finite_difference_e2(const AnnealInstance &inst, std::span<const SubsetState> targets,
                            double h = 1e-3);

/// Rayleigh-Schroedinger coefficients E^(0..max_order) of the lowest branch emerging
/// from the targets. The unperturbed eigenspace is the full set of basis states at the
/// targets' energy; its effective Hamiltonian is expanded with the Bloch wave-operator
/// recursion and the branch eigenvalue is then expanded order by order.
std::vector<double> rs_series(const AnnealInstance &inst, std::span<const SubsetState> targets,
                              int max_order);

} // namespace aqo::oracle
