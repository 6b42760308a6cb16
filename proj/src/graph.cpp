#include "aqo/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace aqo {

SubsetState SubsetState::from_nodes(const std::vector<int> &nodes) {
  Mask m = 0;
  for (int i : nodes) {
    if (i < 0 || i >= kMaxNodes)
      throw GraphError("node index out of range: " + std::to_string(i));
    m |= Mask{1} << i;
  }
  return SubsetState{m};
}

std::vector<int> SubsetState::nodes() const {
  std::vector<int> out;
  for (Mask m = mask; m != 0; m &= m - 1)
    out.push_back(std::countr_zero(m));
  return out;
}

Graph::Graph(int n) : n_(n), adjacency_(static_cast<std::size_t>(std::max(n, 0)), 0) {
  if (n < 1 || n > kMaxNodes)
    throw GraphError("node count must be in [1, " + std::to_string(kMaxNodes) +
                     "], got " + std::to_string(n));
}

void Graph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_)
    throw GraphError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                     ") has an endpoint outside [0, " + std::to_string(n_) + ")");
  if (u == v)
    throw GraphError("self-loop at node " + std::to_string(u));
  if (adjacent(u, v))
    return;
  adjacency_[u] |= Mask{1} << v;
  adjacency_[v] |= Mask{1} << u;
  ++edge_count_;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int u = 0; u < n_; ++u)
    for (Mask m = adjacency_[u] >> (u + 1); m != 0; m &= m - 1)
      out.emplace_back(u, u + 1 + std::countr_zero(m));
  return out;
}

int Graph::violations(SubsetState s) const {
  int twice = 0;
  for (Mask m = s.mask; m != 0; m &= m - 1)
    twice += std::popcount(adjacency_[std::countr_zero(m)] & s.mask);
  return twice / 2;
}

bool Graph::is_independent(SubsetState s) const {
  for (Mask m = s.mask; m != 0; m &= m - 1)
    if (adjacency_[std::countr_zero(m)] & s.mask)
      return false;
  return true;
}

bool Graph::is_maximal_independent(SubsetState s) const {
  if (!is_valid_state(s) || !is_independent(s))
    return false;
  for (Mask m = all_nodes() & ~s.mask; m != 0; m &= m - 1)
    if ((adjacency_[std::countr_zero(m)] & s.mask) == 0)
      return false;
  return true;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<long> to_integer(std::string_view token) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    return std::nullopt;
  return value;
}

} // namespace

Graph parse_graph(std::string_view text) {
  std::optional<Graph> graph;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;

    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#')
      continue;

    if (!graph) {
      auto n = tokens.size() == 1 ? to_integer(tokens[0]) : std::nullopt;
      if (!n)
        throw ParseError(line_number, "expected node count, got '" + std::string(line) + "'");
      if (*n < 1 || *n > kMaxNodes)
        throw ParseError(line_number, "node count " + std::to_string(*n) +
                                          " outside [1, " + std::to_string(kMaxNodes) + "]");
      graph.emplace(static_cast<int>(*n));
      continue;
    }

    if (tokens.size() != 2)
      throw ParseError(line_number, "expected 'u v', got '" + std::string(line) + "'");
    auto u = to_integer(tokens[0]);
    auto v = to_integer(tokens[1]);
    if (!u || !v)
      throw ParseError(line_number, "non-integer endpoint in '" + std::string(line) + "'");
    const long n = graph->size();
    if (*u < 0 || *v < 0 || *u >= n || *v >= n)
      throw ParseError(line_number, "node index out of range in '" + std::string(line) + "'");
    if (*u == *v)
      throw ParseError(line_number, "self-loop at node " + std::to_string(*u));
    graph->add_edge(static_cast<int>(*u), static_cast<int>(*v));
  }
  if (!graph)
    throw ParseError(line_number, "missing node count");
  return *graph;
}

GeneratorSpec parse_generator_spec(std::string_view spec) {
  static const std::map<std::string, GraphKind, std::less<>> kinds{
      {"empty", GraphKind::empty},
      {"complete", GraphKind::complete},
      {"cycle", GraphKind::cycle},
      {"complete_bipartite", GraphKind::complete_bipartite},
      {"split", GraphKind::split},
      {"random_gnp", GraphKind::random_gnp},
  };
  auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw GraphError("generator spec must look like kind:params, got '" + std::string(spec) + "'");
  auto it = kinds.find(spec.substr(0, colon));
  if (it == kinds.end())
    throw GraphError("unknown graph kind '" + std::string(spec.substr(0, colon)) + "'");

  GeneratorSpec out{it->second, {}};
  std::string rest(spec.substr(colon + 1));
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.params.push_back(std::stod(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw GraphError("bad generator parameter '" + item + "'");
    }
  }
  return out;
}

namespace {

int integer_param(const std::vector<double> &params, std::size_t i, const char *name) {
  if (i >= params.size())
    throw GraphError(std::string("missing parameter ") + name);
  double v = params[i];
  if (v != std::floor(v) || v < 1 || v > kMaxNodes)
    throw GraphError(std::string("parameter ") + name + " must be an integer in [1, " +
                     std::to_string(kMaxNodes) + "]");
  return static_cast<int>(v);
}

void expect_param_count(const std::vector<double> &params, std::size_t count) {
  if (params.size() != count)
    throw GraphError("expected " + std::to_string(count) + " generator parameter(s), got " +
                     std::to_string(params.size()));
}

} // namespace

Graph generate_graph(GraphKind kind, const std::vector<double> &params,
                     std::optional<std::uint64_t> seed) {
  switch (kind) {
  case GraphKind::empty: {
    expect_param_count(params, 1);
    return Graph(integer_param(params, 0, "n"));
  }
  case GraphKind::complete: {
    expect_param_count(params, 1);
    Graph g(integer_param(params, 0, "n"));
    for (int u = 0; u < g.size(); ++u)
      for (int v = u + 1; v < g.size(); ++v)
        g.add_edge(u, v);
    return g;
  }
  case GraphKind::cycle: {
    expect_param_count(params, 1);
    int n = integer_param(params, 0, "n");
    if (n < 3)
      throw GraphError("cycle needs at least 3 nodes");
    Graph g(n);
    for (int u = 0; u < n; ++u)
      g.add_edge(u, (u + 1) % n);
    return g;
  }
  case GraphKind::complete_bipartite: {
    expect_param_count(params, 2);
    int a = integer_param(params, 0, "a");
    int b = integer_param(params, 1, "b");
    Graph g(a + b);
    for (int u = 0; u < a; ++u)
      for (int v = a; v < a + b; ++v)
        g.add_edge(u, v);
    return g;
  }
  case GraphKind::split: {
    expect_param_count(params, 2);
    int k = integer_param(params, 0, "K");
    int m = integer_param(params, 1, "m");
    Graph g(k + m);
    for (int u = 0; u < k; ++u) {
      for (int v = u + 1; v < k; ++v)
        g.add_edge(u, v);
      for (int v = k; v < k + m; ++v)
        g.add_edge(u, v);
    }
    return g;
  }
  case GraphKind::random_gnp: {
    expect_param_count(params, 2);
    int n = integer_param(params, 0, "n");
    double p = params[1];
    if (!(p >= 0.0 && p <= 1.0))
      throw GraphError("edge probability must be in [0, 1]");
    if (!seed)
      throw GraphError("random_gnp requires a seed");
    std::mt19937_64 rng(*seed);
    Graph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        // 53-bit uniform from the raw engine output keeps streams portable.
        double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (x < p)
          g.add_edge(u, v);
      }
    return g;
  }
  }
  throw GraphError("unhandled graph kind");
}

Graph generate_graph(const GeneratorSpec &spec, std::optional<std::uint64_t> seed) {
  return generate_graph(spec.kind, spec.params, seed);
}

std::optional<int> MinimaCatalog::index_of(SubsetState s) const {
  auto it = std::lower_bound(sets.begin(), sets.end(), s);
  if (it == sets.end() || *it != s)
    return std::nullopt;
  return static_cast<int>(it - sets.begin());
}

std::vector<SubsetState> MinimaCatalog::maximum_sets() const { return sets_of_size(mis_size); }

std::vector<SubsetState> MinimaCatalog::local_sets() const {
  std::vector<SubsetState> out;
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (sizes[i] < mis_size)
      out.push_back(sets[i]);
  return out;
}

std::vector<SubsetState> MinimaCatalog::sets_of_size(int size) const {
  std::vector<SubsetState> out;
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (sizes[i] == size)
      out.push_back(sets[i]);
  return out;
}

namespace {

// Bron-Kerbosch with Tomita pivoting on the complement graph: cliques of the
// complement are exactly the independent sets of g.
void bron_kerbosch(const std::vector<Mask> &compatible, Mask chosen, Mask candidates,
                   Mask excluded, std::vector<SubsetState> &out) {
  if (candidates == 0 && excluded == 0) {
    out.emplace_back(chosen);
    return;
  }
  int pivot = -1;
  int best = -1;
  for (Mask m = candidates | excluded; m != 0; m &= m - 1) {
    int u = std::countr_zero(m);
    int score = std::popcount(candidates & compatible[u]);
    if (score > best) {
      best = score;
      pivot = u;
    }
  }
  for (Mask m = candidates & ~compatible[pivot]; m != 0; m &= m - 1) {
    int v = std::countr_zero(m);
    Mask bit = Mask{1} << v;
    bron_kerbosch(compatible, chosen | bit, candidates & compatible[v], excluded & compatible[v],
                  out);
    candidates &= ~bit;
    excluded |= bit;
  }
}

} // namespace

MinimaCatalog enumerate_maximal_independent_sets(const Graph &g) {
  const int n = g.size();
  std::vector<Mask> compatible(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    compatible[i] = g.all_nodes() & ~g.neighbors(i) & ~(Mask{1} << i);

  MinimaCatalog cat;
  bron_kerbosch(compatible, 0, g.all_nodes(), 0, cat.sets);
  std::sort(cat.sets.begin(), cat.sets.end());

  std::map<int, std::vector<int>> by_size;
  for (std::size_t i = 0; i < cat.sets.size(); ++i) {
    int s = cat.sets[i].size();
    cat.sizes.push_back(s);
    cat.mis_size = std::max(cat.mis_size, s);
    by_size[s].push_back(static_cast<int>(i));
  }
  for (auto &[size, members] : by_size)
    cat.degeneracy_classes.push_back({size, std::move(members)});

  for (std::size_t i = 0; i < cat.sets.size(); ++i) {
    const Mask s = cat.sets[i].mask;
    for (Mask in = s; in != 0; in &= in - 1)
      for (Mask out = g.all_nodes() & ~s; out != 0; out &= out - 1) {
        SubsetState t{(s & ~(in & -in)) | (out & -out)};
        if (t.mask <= s)
          continue;
        if (auto j = cat.index_of(t))
          cat.close_pairs.emplace_back(static_cast<int>(i), *j);
      }
  }
  std::sort(cat.close_pairs.begin(), cat.close_pairs.end());
  return cat;
}

std::vector<SubsetState> degenerate_neighbors(const Graph &g, SubsetState s) {
  if (!g.is_valid_state(s) || !g.is_independent(s))
    throw GraphError("degenerate_neighbors: state is not an independent set");
  if (!g.is_maximal_independent(s))
    throw GraphError("degenerate_neighbors: state is not a maximal independent set");
  std::vector<SubsetState> out;
  for (int i : s.nodes())
    for (Mask m = g.all_nodes() & ~s.mask; m != 0; m &= m - 1) {
      int j = std::countr_zero(m);
      SubsetState t = s.flipped(i).flipped(j);
      if (g.is_maximal_independent(t))
        out.push_back(t);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RepairPath greedy_repair(const Graph &g, double c, SubsetState s) {
  if (!g.is_valid_state(s))
    throw GraphError("greedy_repair: state has bits beyond node count");
  RepairPath path{s, s, c * g.violations(s), {}};
  SubsetState cur = s;
  while (true) {
    int worst = -1;
    int worst_count = 0;
    for (int i : cur.nodes()) {
      int count = g.neighbors_in(i, cur);
      if (count > worst_count) {
        worst_count = count;
        worst = i;
      }
    }
    if (worst < 0)
      break;
    cur = cur.flipped(worst);
    path.steps.push_back({worst, c * g.violations(cur)});
  }
  path.result = cur;
  return path;
}

} // namespace aqo
