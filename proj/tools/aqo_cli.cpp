// aqo: enumerate minima, analyze crossings, and run the avoidance strategy on MIS
// instances. Exit codes: 0 ok, 2 usage/parse, 3 solver failure, 4 budget exhausted.

#include "aqo/graph.hpp"
#include "aqo/lanczos.hpp"
#include "aqo/oracle.hpp"
#include "aqo/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace aqo;

namespace {

enum Exit { kOk = 0, kUsage = 2, kSolver = 3, kExhausted = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Source {
  std::string path;
  std::string gen;
};

struct Loaded {
  Graph graph;
  std::string name;
  std::string description;
};

Loaded load(const Source &src, std::uint64_t seed) {
  if (src.path.empty() == src.gen.empty())
    throw UsageError("give exactly one of an instance path or --gen");
  if (!src.gen.empty()) {
    auto g = generate_graph(parse_generator_spec(src.gen), seed);
    std::string name = src.gen;
    for (char &ch : name)
      if (ch == ':' || ch == ',')
        ch = '_';
    return {std::move(g), name, "gen:" + src.gen};
  }
  std::ifstream in(src.path);
  if (!in)
    throw UsageError("cannot open " + src.path);
  std::stringstream text;
  text << in.rdbuf();
  try {
    return {parse_graph(text.str()), fs::path(src.path).stem().string(), src.path};
  } catch (const ParseError &e) {
    throw GraphError(src.path + ": " + e.what());
  }
}

double parse_double(const std::string &s, const std::string &what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw UsageError("bad " + what + ": '" + s + "'");
  return x;
}

DriverField parse_delta(const std::string &text, int n) {
  if (text.rfind("uniform:", 0) == 0)
    return DriverField::uniform(n, parse_double(text.substr(8), "--delta"));
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    values.push_back(parse_double(item, "--delta"));
  if (static_cast<int>(values.size()) != n)
    throw UsageError("--delta needs " + std::to_string(n) + " values");
  return DriverField(std::move(values));
}

struct GridSpec {
  double lo = 0.01, hi = 1.0;
  int points = 64;
};

GridSpec parse_grid(const std::string &text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');)
    parts.push_back(item);
  if (parts.size() != 3)
    throw UsageError("--grid expects lo:hi:points");
  GridSpec grid{parse_double(parts[0], "grid lo"), parse_double(parts[1], "grid hi"), 0};
  const double points = parse_double(parts[2], "grid points");
  if (points != std::floor(points) || points < 2)
    throw UsageError("grid points must be an integer >= 2");
  grid.points = static_cast<int>(points);
  if (!(grid.lo > 0.0 && grid.hi > grid.lo))
    throw UsageError("grid needs 0 < lo < hi");
  return grid;
}

Json grid_json(const GridSpec &grid) {
  return {{"lo", report_number(grid.lo)}, {"hi", report_number(grid.hi)}, {"points", grid.points}};
}

Json instance_json(const Loaded &inst) {
  Json edges = Json::array();
  for (auto [u, v] : inst.graph.edges())
    edges.push_back({u, v});
  return {{"source", inst.description}, {"n", inst.graph.size()}, {"edges", edges}};
}

void write_file(const fs::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << content;
}

double resolve_c(const std::optional<double> &c, const Graph &g) {
  if (c)
    return *c;
  return scale_c(g).c;
}

// Cross-checks the analysis against the dense references (hidden --oracle flag).
Json oracle_check(const AnnealInstance &inst) {
  const auto &g = inst.graph();
  Json out;
  if (g.size() > oracle::kMaxDenseNodes) {
    out["skipped"] = "more than " + std::to_string(oracle::kMaxDenseNodes) + " nodes";
    return out;
  }
  const auto catalog = enumerate_maximal_independent_sets(g);
  out["enumeration_matches"] = catalog.sets == oracle::landscape_minima(g, inst.c());
  Json minima = Json::array();
  for (auto s : catalog.sets) {
    Json entry{{"set", report_set(s)}};
    try {
      entry["finite_difference_e2"] =
          report_number(oracle::finite_difference_e2(inst, std::vector<SubsetState>{s}));
    } catch (const std::exception &e) {
      entry["finite_difference_e2"] = nullptr;
      entry["note"] = e.what();
    }
    minima.push_back(entry);
  }
  out["minima"] = minima;
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Adiabatic MIS analysis: minima, crossings, and driver strategies"};
  app.require_subcommand(1);

  Source src;
  std::uint64_t seed = 0;
  std::optional<double> c;
  std::string delta = "uniform:1";
  std::string grid_text = "0.01:1.0:64";
  int k = 4;
  int budget = 3;
  std::string out_dir = ".";
  bool oracle_flag = false;

  auto add_source = [&](CLI::App *cmd) {
    cmd->add_option("instance", src.path, "Instance file");
    cmd->add_option("--gen", src.gen, "Generator spec, e.g. split:7,2");
    cmd->add_option("--seed", seed, "Seed for random generators");
  };
  auto add_physics = [&](CLI::App *cmd) {
    cmd->add_option("--c", c, "Penalty coefficient (> 1, default n)");
    cmd->add_option("--grid", grid_text, "Sweep grid lo:hi:points");
    cmd->add_option("--k", k, "Levels tracked by the sweep")->check(CLI::Range(2, 64));
    cmd->add_option("--out", out_dir, "Output directory");
  };

  auto *enumerate = app.add_subcommand("enumerate", "Print the maximal independent sets");
  add_source(enumerate);

  auto *analyze = app.add_subcommand("analyze", "Predict and observe level crossings");
  add_source(analyze);
  add_physics(analyze);
  analyze->add_option("--delta", delta, "Driver amplitudes: comma list or uniform:x");
  analyze->add_flag("--oracle", oracle_flag)->group("");

  auto *avoid = app.add_subcommand("avoid", "Iteratively suppress the driver on local minima");
  add_source(avoid);
  add_physics(avoid);
  avoid->add_option("--budget", budget, "Maximum beta rounds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const auto loaded = load(src, seed);
    const auto &g = loaded.graph;

    if (*enumerate) {
      Json report{{"schema", kReportSchema}, {"command", "enumerate"}};
      report["instance"] = instance_json(loaded);
      report["catalog"] = catalog_json(enumerate_maximal_independent_sets(g));
      std::cout << dump_report(report);
      return kOk;
    }

    const double penalty = resolve_c(c, g);
    const auto grid = parse_grid(grid_text);
    SweepOptions options;
    options.k = std::min<int>(k, static_cast<int>(g.state_count()));
    options.solver.lanczos.seed = seed;
    fs::create_directories(out_dir);
    const fs::path report_path = fs::path(out_dir) / (loaded.name + ".report.json");

    Json report{{"schema", kReportSchema}};
    if (*analyze) {
      const AnnealInstance inst(g, penalty, parse_delta(delta, g.size()));
      report["command"] = "analyze";
      report["instance"] = instance_json(loaded);
      report["parameters"] = {{"c", report_number(penalty)},
                              {"delta", report_driver(inst.driver())},
                              {"grid", grid_json(grid)},
                              {"k", options.k},
                              {"seed", seed}};
      auto analysis = analyze_instance(inst, geometric_grid(grid.lo, grid.hi, grid.points), options);
      for (auto &[key, value] : analysis.report.items())
        report[key] = value;
      if (oracle_flag)
        report["oracle"] = oracle_check(inst);
      const auto trace_name = loaded.name + ".trace.csv";
      report["trace_csv"] = trace_name;
      std::ostringstream csv;
      write_trace_csv(csv, analysis.trace);
      write_file(fs::path(out_dir) / trace_name, csv.str());
      write_file(report_path, dump_report(report));
      std::cout << report_path.string() << "\n";
      return kOk;
    }

    const AnnealInstance inst(g, penalty);
    AvoidOptions options_avoid;
    options_avoid.budget = budget;
    options_avoid.grid = geometric_grid(grid.lo, grid.hi, grid.points);
    options_avoid.sweep = options;
    const auto result = iterative_avoid(inst, options_avoid);
    report["command"] = "avoid";
    report["instance"] = instance_json(loaded);
    report["parameters"] = {{"c", report_number(penalty)},
                            {"budget", budget},
                            {"grid", grid_json(grid)},
                            {"k", options.k},
                            {"seed", seed}};
    const auto body = avoid_json(result);
    for (const auto &[key, value] : body.items())
      report[key] = value;
    write_file(report_path, dump_report(report));
    std::cout << report_path.string() << "\n";
    if (result.exhausted) {
      std::cerr << "budget exhausted: " << result.outcome.rationale << "\n";
      return kExhausted;
    }
    return kOk;
  } catch (const ConvergenceError &e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception &e) {
    // Graph, model and argument errors are all input problems.
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
