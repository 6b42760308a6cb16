#include "aqo/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace aqo {

Json report_number(double x) {
  if (!std::isfinite(x))
    return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double rounded = std::strtod(buf, nullptr);
  return rounded == 0.0 ? 0.0 : rounded; // no negative zero
}

Json report_set(SubsetState s) { return s.nodes(); }

Json report_driver(const DriverField &driver) {
  Json out = Json::array();
  for (double d : driver.amplitudes())
    out.push_back(report_number(d));
  return out;
}

namespace {

Json optional_number(const std::optional<double> &x) {
  return x ? report_number(*x) : Json(nullptr);
}

Json set_list(const std::vector<SubsetState> &sets) {
  Json out = Json::array();
  for (auto s : sets)
    out.push_back(report_set(s));
  return out;
}

} // namespace

Json catalog_json(const MinimaCatalog &catalog) {
  Json pairs = Json::array();
  for (auto [i, j] : catalog.close_pairs)
    pairs.push_back({i, j});
  Json out;
  out["sets"] = set_list(catalog.sets);
  out["sizes"] = catalog.sizes;
  out["m"] = catalog.mis_size;
  out["close_pairs"] = pairs;
  return out;
}

Json ising_json(const IsingProblem &problem) {
  Json h = Json::array();
  for (double x : problem.h)
    h.push_back(report_number(x));
  Json edges = Json::array();
  for (const auto &e : problem.couplings)
    edges.push_back({{"u", e.u}, {"v", e.v}, {"J", report_number(e.J)}});
  Json out;
  out["h"] = h;
  out["edges"] = edges;
  out["c"] = report_number(problem.c);
  out["offset"] = report_number(problem.offset);
  return out;
}

Json observation_json(const CrossingObservation &obs) {
  Json out;
  out["g_min"] = report_number(obs.g_min);
  out["lambda_min"] = report_number(obs.lambda_min);
  out["swap"] = obs.swap;
  out["swap_lambda"] = optional_number(obs.swap_lambda);
  out["locals_dominant_lambda"] = optional_number(obs.locals_dominant_lambda);
  out["agrees_with_prediction"] =
      obs.agrees_with_prediction ? Json(*obs.agrees_with_prediction) : Json(nullptr);
  return out;
}

Json prediction_json(const PredictedCrossing &p) {
  Json out;
  out["mode"] = p.restricted ? "restricted" : "full";
  out["delta_e0"] = report_number(p.delta_e0);
  out["delta_e2"] = report_number(p.delta_e2);
  out["e2_global"] = report_number(p.e2_global);
  out["e2_locals"] = report_number(p.e2_locals);
  out["lambda_star"] = optional_number(p.lambda_star);
  out["within_radius"] = p.within_radius;
  return out;
}

namespace {

// Exact second-order comparison on the full equal-energy manifolds; the branch
// e2 of each side is the lowest one dominated by its minima.
Json full_mode(const AnnealInstance &inst, const std::vector<SubsetState> &global,
               const std::vector<SubsetState> &locals, const PredictedCrossing &restricted) {
  const auto &g = inst.graph();
  Json out;
  try {
    auto global_manifold = DegenerateManifold::full_containing(g, inst.c(), global.front());
    auto locals_manifold = DegenerateManifold::full_containing(g, inst.c(), locals.front());
    if (global_manifold.size() > kMaxReportedFullManifold ||
        locals_manifold.size() > kMaxReportedFullManifold) {
      out["skipped"] = "manifold larger than " + std::to_string(kMaxReportedFullManifold);
      return out;
    }
    const auto ge = degenerate_effective_matrix(g, inst.c(), inst.driver(), global_manifold);
    const auto le = degenerate_effective_matrix(g, inst.c(), inst.driver(), locals_manifold);
    const double e2_global = ge.branch_e2(global);
    const double e2_locals = le.branch_e2(locals);
    const double delta_e2 = e2_locals - e2_global;
    out["mode"] = "full";
    out["manifold_sizes"] = {global_manifold.size(), locals_manifold.size()};
    out["e2_global"] = report_number(e2_global);
    out["e2_locals"] = report_number(e2_locals);
    out["delta_e2"] = report_number(delta_e2);
    out["discrepancy"] = report_number(delta_e2 - restricted.delta_e2);
  } catch (const std::exception &e) {
    out["skipped"] = e.what();
  }
  return out;
}

} // namespace

Analysis analyze_instance(const AnnealInstance &inst, const std::vector<double> &grid,
                          const SweepOptions &options) {
  const auto &g = inst.graph();
  const auto catalog = enumerate_maximal_independent_sets(g);
  const auto global = catalog.maximum_sets();
  const auto locals = catalog.local_sets();

  Json report;
  report["ising"] = ising_json(build_problem_hamiltonian(g, inst.c()));

  Json minima = Json::array();
  for (std::size_t i = 0; i < catalog.sets.size(); ++i) {
    const auto s = catalog.sets[i];
    const auto e2 = second_order_nondegenerate(g, inst.c(), inst.driver(), s);
    minima.push_back({{"set", report_set(s)},
                      {"size", catalog.sizes[i]},
                      {"mis", catalog.is_mis(static_cast<int>(i))},
                      {"energy", report_number(classical_energy(g, inst.c(), s))},
                      {"e2", report_number(e2.e2)},
                      {"degenerate_partner", e2.degenerate_partner}});
  }
  report["minima"] = minima;

  std::optional<PredictedCrossing> earliest;
  Json predictions = Json::array();
  const auto global_manifold = DegenerateManifold::restricted_to(g, inst.c(), global);
  for (const auto &cls : catalog.degeneracy_classes) {
    if (cls.size == catalog.mis_size)
      continue;
    const auto sets = catalog.sets_of_size(cls.size);
    const auto local_manifold = DegenerateManifold::restricted_to(g, inst.c(), sets);
    const auto p = predict_crossing(g, inst.c(), inst.driver(), global_manifold, local_manifold);
    Json entry;
    entry["size"] = cls.size;
    entry["locals"] = set_list(sets);
    entry["restricted"] = prediction_json(p);
    entry["full"] = full_mode(inst, global, sets, p);
    predictions.push_back(entry);

    auto key = [](const PredictedCrossing &x) {
      return x.lambda_star.value_or(std::numeric_limits<double>::infinity());
    };
    if (!earliest || key(p) < key(*earliest))
      earliest = p;
  }
  report["predictions"] = predictions;

  auto trace = sweep(inst, grid, global, locals, options);
  const auto obs = detect_anticrossing(trace, inst, earliest, options.solver);
  report["observation"] = observation_json(obs);
  report["g_min"] = report_number(obs.g_min);
  report["lambda_min"] = report_number(obs.lambda_min);
  return {std::move(report), std::move(trace)};
}

Json avoid_json(const AvoidResult &result) {
  Json log = Json::array();
  for (const auto &r : result.log) {
    Json entry;
    entry["round"] = r.round;
    entry["delta"] = report_driver(r.driver);
    entry["F"] = optional_number(r.condition_F);
    entry["certificate"] = optional_number(r.certificate);
    entry["swap"] = r.swap;
    entry["swap_lambda"] = optional_number(r.swap_lambda);
    entry["visited"] = set_list(r.visited);
    entry["locals_union"] = report_set(SubsetState{r.locals_union});
    log.push_back(entry);
  }
  const auto &o = result.outcome;
  Json outcome;
  outcome["delta"] = report_driver(o.driver);
  outcome["c"] = report_number(o.c);
  outcome["certificate"] = optional_number(o.certificate);
  outcome["parameter"] = optional_number(o.parameter);
  outcome["rationale"] = o.rationale;
  outcome["warnings"] = o.warnings;

  Json out;
  out["rounds"] = result.rounds;
  out["exhausted"] = result.exhausted;
  out["swap"] = result.final_observation.swap;
  out["outcome"] = outcome;
  out["observation"] = observation_json(result.final_observation);
  out["log"] = log;
  return out;
}

std::string dump_report(const Json &report) { return report.dump(2) + "\n"; }

} // namespace aqo
