#include "aqo/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aqo {

void require_valid_penalty(double c) {
  if (!(c > 1.0) || !std::isfinite(c))
    throw ModelError("penalty coefficient c must be finite and > 1, got " + std::to_string(c));
}

double classical_energy(const Graph &g, double c, SubsetState s) {
  return -static_cast<double>(s.size()) + c * g.violations(s);
}

double IsingProblem::diagonal(SubsetState z) const {
  auto spin = [&](int i) { return z.contains(i) ? 1.0 : -1.0; };
  double e = offset;
  for (std::size_t i = 0; i < h.size(); ++i)
    e += h[i] * spin(static_cast<int>(i));
  for (const auto &cp : couplings)
    e += cp.J * spin(cp.u) * spin(cp.v);
  return e;
}

IsingProblem build_problem_hamiltonian(const Graph &g, double c) {
  require_valid_penalty(c);
  IsingProblem p;
  p.c = c;
  p.h.resize(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i)
    p.h[i] = g.degree(i) * c / 4.0 - 0.5;
  for (auto [u, v] : g.edges())
    p.couplings.push_back({u, v, c / 4.0});
  p.offset = -g.size() / 2.0 + c * g.edge_count() / 4.0;
  return p;
}

DriverField::DriverField(std::vector<double> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty())
    throw ModelError("driver field must have at least one amplitude");
  bool any_positive = false;
  for (double d : amplitudes_) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw ModelError("driver amplitudes must be finite and non-negative");
    any_positive = any_positive || d > 0.0;
  }
  if (!any_positive)
    throw ModelError("driver field needs at least one positive amplitude");
}

DriverField DriverField::uniform(int n, double value) {
  return DriverField(std::vector<double>(static_cast<std::size_t>(n), value));
}

AnnealInstance::AnnealInstance(Graph graph, double c, DriverField driver)
    : graph_(std::move(graph)), c_(c), driver_(std::move(driver)) {
  require_valid_penalty(c_);
  if (driver_.size() != graph_.size())
    throw ModelError("driver has " + std::to_string(driver_.size()) + " amplitudes for " +
                     std::to_string(graph_.size()) + " nodes");
}

AnnealInstance::AnnealInstance(Graph graph, double c)
    : AnnealInstance(graph, c, DriverField::uniform(graph.size())) {}

HamiltonianOperator::HamiltonianOperator(const AnnealInstance &inst)
    : n_(inst.graph().size()), diagonal_(inst.dimension()), driver_(inst.driver().amplitudes()) {
  const auto &g = inst.graph();
  for (std::size_t z = 0; z < diagonal_.size(); ++z)
    diagonal_[z] = classical_energy(g, inst.c(), SubsetState{static_cast<Mask>(z)});
}

void HamiltonianOperator::apply(double lambda, std::span<const double> in,
                                std::span<double> out) const {
  const std::size_t dim = diagonal_.size();
  if (in.size() != dim || out.size() != dim)
    throw ModelError("state vector length " + std::to_string(in.size()) + " does not match " +
                     std::to_string(dim));
  std::vector<double> field(driver_.size());
  for (std::size_t i = 0; i < field.size(); ++i)
    field[i] = lambda * driver_[i];
  for (std::size_t z = 0; z < dim; ++z) {
    double acc = diagonal_[z] * in[z];
    for (int i = 0; i < n_; ++i)
      acc -= field[i] * in[z ^ (std::size_t{1} << i)];
    out[z] = acc;
  }
}

std::vector<double> HamiltonianOperator::dense(double lambda) const {
  const std::size_t dim = diagonal_.size();
  std::vector<double> m(dim * dim, 0.0);
  for (std::size_t z = 0; z < dim; ++z) {
    m[z * dim + z] = diagonal_[z];
    for (int i = 0; i < n_; ++i)
      m[z * dim + (z ^ (std::size_t{1} << i))] = -lambda * driver_[i];
  }
  return m;
}

std::vector<double> apply_hamiltonian(const AnnealInstance &inst, double lambda,
                                      std::span<const double> v) {
  HamiltonianOperator op(inst);
  std::vector<double> out(op.dimension());
  op.apply(lambda, v, out);
  return out;
}

FlipCost flip_cost(const Graph &g, double c, SubsetState s, int i) {
  if (!g.is_valid_state(s) || !g.is_independent(s))
    throw ModelError("flip_cost requires an independent set");
  if (i < 0 || i >= g.size())
    throw ModelError("flip_cost: node " + std::to_string(i) + " out of range");
  if (s.contains(i))
    return {1.0, FlipNote::none};
  const int d = g.neighbors_in(i, s);
  FlipNote note = d == 0 ? FlipNote::not_maximal
                  : d == 1 ? FlipNote::degenerate_partner
                           : FlipNote::none;
  return {c * d - 1.0, note};
}

} // namespace aqo
