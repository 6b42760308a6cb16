#pragma once

// JSON serialization of catalogs, analyses and strategy runs. Every number is
// rounded to 12 significant digits; sets are written as ascending node lists.

#include "aqo/graph.hpp"
#include "aqo/model.hpp"
#include "aqo/perturb.hpp"
#include "aqo/spectrum.hpp"
#include "aqo/strategy.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace aqo {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

/// Largest manifold the full-mode second-order comparison is attempted on.
inline constexpr std::size_t kMaxReportedFullManifold = 512;

/// x rounded to 12 significant digits; null when not finite.
Json report_number(double x);
Json report_set(SubsetState s);
Json report_driver(const DriverField &driver);

Json catalog_json(const MinimaCatalog &catalog);
Json ising_json(const IsingProblem &problem);
Json observation_json(const CrossingObservation &obs);
Json prediction_json(const PredictedCrossing &p);

struct Analysis {
  Json report; // ising, minima, predictions, observation
  SpectrumTrace trace;
};

/// Second-order predictions for every local size class against the maximum sets,
/// followed by an exact sweep and anticrossing detection on the given grid.
Analysis analyze_instance(const AnnealInstance &inst, const std::vector<double> &grid,
                          const SweepOptions &options = {});

Json avoid_json(const AvoidResult &result);

/// Two-space indented dump with a trailing newline.
std::string dump_report(const Json &report);

} // namespace aqo
