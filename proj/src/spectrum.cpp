#include "aqo/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace aqo {

LowestEigenpairs eigensolve_lowest(const HamiltonianOperator &op, double lambda, int k,
                                   const SolverOptions &options) {
  const std::size_t dim = op.dimension();
  if (k < 1 || static_cast<std::size_t>(k) > dim)
    throw std::invalid_argument("eigensolve_lowest: k must be in [1, " + std::to_string(dim) +
                                "], got " + std::to_string(k));
  SolverKind kind = options.kind;
  if (kind == SolverKind::automatic)
    kind = (dim <= kAutoDenseDimension || 4 * static_cast<std::size_t>(k) >= dim)
               ? SolverKind::dense
               : SolverKind::lanczos;
  if (kind == SolverKind::dense && dim > kMaxDenseDimension)
    kind = SolverKind::lanczos;

  LowestEigenpairs out;
  out.used = kind;
  if (kind == SolverKind::dense) {
    const auto n = static_cast<Eigen::Index>(dim);
    std::vector<double> dense = op.dense(lambda);
    Eigen::Map<const Eigen::MatrixXd> H(dense.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success)
      throw ConvergenceError("dense eigensolver failed", std::numeric_limits<double>::infinity());
    for (int i = 0; i < k; ++i) {
      out.values.push_back(solver.eigenvalues()(i));
      const auto col = solver.eigenvectors().col(i);
      out.vectors.emplace_back(col.data(), col.data() + n);
    }
    return out;
  }

  LinearMap map = [&](std::span<const double> in, std::span<double> res) {
    op.apply(lambda, in, res);
  };
  EigenPairs pairs = lanczos_lowest(map, dim, k, options.lanczos);
  out.values = std::move(pairs.values);
  out.vectors = std::move(pairs.vectors);
  out.max_residual = pairs.max_residual;
  return out;
}

LowestEigenpairs eigensolve_lowest(const AnnealInstance &inst, double lambda, int k,
                                   const SolverOptions &options) {
  return eigensolve_lowest(HamiltonianOperator(inst), lambda, k, options);
}

double weight_on(std::span<const double> v, std::span<const SubsetState> states) {
  double w = 0.0;
  for (auto s : states) {
    if (s.mask >= v.size())
      throw std::out_of_range("tracked state outside the state vector");
    w += v[s.mask] * v[s.mask];
  }
  return w;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw std::invalid_argument("grid needs 0 < lo < hi and at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(points));
  const double ratio = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i)
    g[i] = lo * std::exp(ratio * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> SpectrumTrace::adiabatic_level(int label) const {
  std::vector<double> out;
  for (std::size_t p = 0; p < labels.size(); ++p)
    for (std::size_t l = 0; l < labels[p].size(); ++l)
      if (labels[p][l] == label)
        out.push_back(eigenvalues[p][l]);
  return out;
}

namespace {

struct PointResult {
  std::vector<double> values;
  double overlap_M = 0.0;
  double overlap_locals = 0.0;
  std::vector<std::vector<double>> vectors;
};

template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn &&fn) {
  if (workers == 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

std::vector<int> match_labels(const std::vector<std::vector<double>> &prev,
                              const std::vector<int> &prev_labels,
                              const std::vector<std::vector<double>> &cur) {
  const std::size_t k = cur.size();
  std::vector<std::vector<double>> overlap(k, std::vector<double>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      double dot = 0.0;
      for (std::size_t z = 0; z < cur[b].size(); ++z)
        dot += prev[a][z] * cur[b][z];
      overlap[a][b] = dot * dot;
    }
  std::vector<int> labels(k, -1);
  std::vector<bool> used_prev(k, false);
  for (std::size_t round = 0; round < k; ++round) {
    double best = -1.0;
    std::size_t ba = 0, bb = 0;
    // Scan in energy order so ties resolve towards the lower levels.
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if (!used_prev[a] && labels[b] < 0 && overlap[a][b] > best) {
          best = overlap[a][b];
          ba = a;
          bb = b;
        }
    used_prev[ba] = true;
    labels[bb] = prev_labels[ba];
  }
  return labels;
}

} // namespace

SpectrumTrace sweep(const AnnealInstance &inst, std::vector<double> grid,
                    std::span<const SubsetState> global, std::span<const SubsetState> locals,
                    const SweepOptions &options) {
  if (grid.empty())
    throw std::invalid_argument("sweep needs a non-empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0))
      throw std::invalid_argument("sweep grid values must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sweep grid must be strictly ascending");
  }
  const HamiltonianOperator op(inst);
  const std::size_t dim = op.dimension();
  const int k = options.k;
  if (k < 1 || static_cast<std::size_t>(k) > dim)
    throw std::invalid_argument("sweep: k must be in [1, " + std::to_string(dim) + "]");

  const bool keep_vectors =
      2 * grid.size() * static_cast<std::size_t>(k) * dim * sizeof(double) <=
      options.label_memory_bytes;

  auto solve_point = [&](double lambda) {
    LowestEigenpairs pairs;
    try {
      pairs = eigensolve_lowest(op, lambda, k, options.solver);
    } catch (const ConvergenceError &e) {
      throw ConvergenceError(std::string(e.what()) + " at lambda=" + std::to_string(lambda),
                             e.residual());
    }
    PointResult r;
    r.values = pairs.values;
    r.overlap_M = weight_on(pairs.vectors.front(), global);
    r.overlap_locals = weight_on(pairs.vectors.front(), locals);
    if (keep_vectors)
      r.vectors = std::move(pairs.vectors);
    return r;
  };

  std::map<double, PointResult> points;
  auto compute = [&](const std::vector<double> &lambdas) {
    std::vector<PointResult> results(lambdas.size());
    parallel_for(lambdas.size(), options.workers,
                 [&](std::size_t i) { results[i] = solve_point(lambdas[i]); });
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      points.emplace(lambdas[i], std::move(results[i]));
  };
  compute(grid);

  while (options.refine) {
    std::vector<double> inserts;
    for (auto it = points.begin(); std::next(it) != points.end(); ++it) {
      auto nx = std::next(it);
      if (std::abs(nx->second.overlap_M - it->second.overlap_M) >= 0.5 &&
          nx->first - it->first > options.refine_resolution)
        inserts.push_back(0.5 * (it->first + nx->first));
    }
    if (inserts.empty())
      break;
    compute(inserts);
  }

  SpectrumTrace trace;
  trace.tracked_global.assign(global.begin(), global.end());
  trace.tracked_locals.assign(locals.begin(), locals.end());
  const std::vector<std::vector<double>> *prev = nullptr;
  for (auto &[lambda, r] : points) {
    trace.lambdas.push_back(lambda);
    trace.eigenvalues.push_back(r.values);
    trace.overlap_M.push_back(r.overlap_M);
    trace.overlap_locals.push_back(r.overlap_locals);
    if (keep_vectors) {
      if (!prev) {
        std::vector<int> identity(static_cast<std::size_t>(k));
        for (int l = 0; l < k; ++l)
          identity[l] = l;
        trace.labels.push_back(identity);
      } else {
        trace.labels.push_back(match_labels(*prev, trace.labels.back(), r.vectors));
      }
      prev = &r.vectors;
    }
  }
  return trace;
}

GapMinimum min_gap(const SpectrumTrace &trace, const AnnealInstance &inst,
                   const SolverOptions &options, double resolution) {
  if (trace.levels() < 2)
    throw std::invalid_argument("min_gap needs at least two levels per point");
  std::size_t best = 0;
  for (std::size_t p = 1; p < trace.points(); ++p)
    if (trace.eigenvalues[p][1] - trace.eigenvalues[p][0] <
        trace.eigenvalues[best][1] - trace.eigenvalues[best][0])
      best = p;
  GapMinimum result{trace.eigenvalues[best][1] - trace.eigenvalues[best][0], trace.lambdas[best]};
  if (trace.points() < 2)
    return result;

  const HamiltonianOperator op(inst);
  auto gap = [&](double lambda) {
    auto pairs = eigensolve_lowest(op, lambda, 2, options);
    return pairs.values[1] - pairs.values[0];
  };
  double a = trace.lambdas[best == 0 ? 0 : best - 1];
  double b = trace.lambdas[std::min(best + 1, trace.points() - 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = gap(x1);
  double f2 = gap(x2);
  while (b - a > resolution) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = gap(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = gap(x2);
    }
  }
  const double x = f1 < f2 ? x1 : x2;
  const double fx = std::min(f1, f2);
  if (fx < result.g_min)
    result = {fx, x};
  return result;
}

CrossingObservation detect_anticrossing(const SpectrumTrace &trace, const AnnealInstance &inst,
                                        const std::optional<PredictedCrossing> &predicted,
                                        const SolverOptions &options, double resolution) {
  CrossingObservation obs;
  if (trace.levels() >= 2) {
    auto g = min_gap(trace, inst, options, resolution);
    obs.g_min = g.g_min;
    obs.lambda_min = g.lambda_min;
  }

  const auto &om = trace.overlap_M;
  const auto &ol = trace.overlap_locals;
  std::optional<std::size_t> first_m_dominated;
  for (std::size_t p = 0; p < trace.points(); ++p) {
    if (!first_m_dominated && om[p] >= 0.5)
      first_m_dominated = p;
    if (first_m_dominated && ol[p] > om[p]) {
      obs.swap = true;
      obs.locals_dominant_lambda = trace.lambdas[p];
      // Last fall of overlap_M through 1/2 before the locals take over.
      std::size_t fall = *first_m_dominated;
      for (std::size_t q = *first_m_dominated; q < p; ++q)
        if (om[q] >= 0.5 && om[q + 1] < 0.5)
          fall = q;
      const HamiltonianOperator op(inst);
      auto overlap_at = [&](double lambda) {
        auto pairs = eigensolve_lowest(op, lambda, 1, options);
        return weight_on(pairs.vectors.front(), trace.tracked_global);
      };
      double lo = trace.lambdas[fall];
      double hi = trace.lambdas[fall + 1];
      while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        (overlap_at(mid) >= 0.5 ? lo : hi) = mid;
      }
      obs.swap_lambda = 0.5 * (lo + hi);
      break;
    }
  }

  if (predicted) {
    const bool predicts = predicted->lambda_star.has_value() && predicted->within_radius;
    obs.agrees_with_prediction = predicts == obs.swap;
  }
  return obs;
}

void write_trace_csv(std::ostream &os, const SpectrumTrace &trace) {
  os << "lambda";
  for (int l = 0; l < trace.levels(); ++l)
    os << ",e" << l;
  os << ",overlap_M,overlap_locals\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.11e", v);
    os << buf;
  };
  for (std::size_t p = 0; p < trace.points(); ++p) {
    put(trace.lambdas[p]);
    for (double e : trace.eigenvalues[p]) {
      os << ',';
      put(e);
    }
    os << ',';
    put(trace.overlap_M[p]);
    os << ',';
    put(trace.overlap_locals[p]);
    os << '\n';
  }
}

} // namespace aqo
