#pragma once

#include "aqo/graph.hpp"
#include "aqo/model.hpp"
#include "aqo/spectrum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aqo {

/// Slack applied to the strict alpha/beta thresholds.
inline constexpr double kStrategyMargin = 0.05;

/// Conditional weight a local minimum needs in the post-swap ground state to count
/// as visited.
inline constexpr double kVisitThreshold = 0.1;

struct StrategyOutcome {
  DriverField driver;
  double c;
  std::optional<double> certificate; // positive F when present
  std::string rationale;
  std::optional<double> parameter;   // alpha or beta
  std::vector<std::string> warnings;
};

struct ScaledPenalty {
  double c;
  std::optional<std::string> warning;
};

/// c = n; clamped just above 1 for single-node graphs.
ScaledPenalty scale_c(const Graph &g);

/// [(n - m') + sqrt((n - m')^2 + 8 (m' - 1))] / 4.
double alpha_threshold(int n, int local_size);

/// Delta = alpha on the (known) global minimum, 1 elsewhere. Diagnostic only:
/// it presumes the answer.
StrategyOutcome alpha_assignment(const Graph &g, const MinimaCatalog &catalog,
                                 SubsetState global_minimum, double c,
                                 double margin = kStrategyMargin);

struct SizeHint {
  int m; // MIS size
  int p; // |M intersect M'|
};

/// Delta = beta on the union of known local minima, 1 elsewhere. With a hint,
/// beta = (1 - epsilon) sqrt((m - p) / (n - p)); without, beta = (1 - epsilon) / sqrt(n).
/// The catalog is only used to evaluate the certificate.
StrategyOutcome beta_assignment(const Graph &g, const MinimaCatalog &catalog, Mask locals_union,
                                double c, std::optional<SizeHint> hint = std::nullopt,
                                double epsilon = kStrategyMargin);

/// Same assignment with an explicit beta.
StrategyOutcome beta_assignment_with(const Graph &g, const MinimaCatalog &catalog,
                                     Mask locals_union, double c, double beta);

struct RoundLog {
  int round;
  DriverField driver;
  std::optional<double> condition_F; // worst-class F, absent without local minima
  std::optional<double> certificate; // condition_F when positive
  bool swap;
  std::optional<double> swap_lambda;
  std::vector<SubsetState> visited; // locals identified after the swap
  Mask locals_union;
};

struct AvoidOptions {
  int budget = 3;
  std::vector<double> grid = geometric_grid(0.01, 1.0, 64);
  SweepOptions sweep;
};

struct AvoidResult {
  StrategyOutcome outcome;
  std::vector<RoundLog> log;
  int rounds = 0;         // number of driver adjustments made
  bool exhausted = false; // budget ran out with the swap still present
  CrossingObservation final_observation;
};

/// Sweep, and while the ground state swaps to local minima: collect the visited
/// minima, extend them by local search over degenerate neighbours, and apply the
/// beta assignment to their union.
AvoidResult iterative_avoid(const AnnealInstance &inst, const AvoidOptions &options = {});

} // namespace aqo
