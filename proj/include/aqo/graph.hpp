#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aqo {

inline constexpr int kMaxNodes = 24;

using Mask = std::uint32_t;

/// Node subset encoded as a bitmask; bit i is the occupation x_i of node i.
struct SubsetState {
  Mask mask = 0;

  constexpr SubsetState() = default;
  constexpr explicit SubsetState(Mask m) : mask(m) {}

  static SubsetState from_nodes(const std::vector<int> &nodes);

  [[nodiscard]] constexpr bool contains(int i) const { return (mask >> i) & 1u; }
  [[nodiscard]] constexpr int size() const { return std::popcount(mask); }
  [[nodiscard]] constexpr SubsetState flipped(int i) const {
    return SubsetState{mask ^ (Mask{1} << i)};
  }
  [[nodiscard]] std::vector<int> nodes() const;

  friend constexpr bool operator==(SubsetState, SubsetState) = default;
  friend constexpr auto operator<=>(SubsetState, SubsetState) = default;
};

[[nodiscard]] constexpr int hamming_distance(SubsetState a, SubsetState b) {
  return std::popcount(a.mask ^ b.mask);
}

class GraphError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public GraphError {
public:
  ParseError(int line, const std::string &what)
      : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] int line() const { return line_; }

private:
  int line_;
};

/// Undirected simple graph on at most kMaxNodes nodes.
class Graph {
public:
  explicit Graph(int n);

  /// Adds edge {u, v}; re-adding an existing edge is a no-op.
  void add_edge(int u, int v);

  [[nodiscard]] int size() const { return n_; }
  [[nodiscard]] int edge_count() const { return edge_count_; }
  [[nodiscard]] Mask neighbors(int i) const { return adjacency_[i]; }
  [[nodiscard]] int degree(int i) const { return std::popcount(adjacency_[i]); }
  [[nodiscard]] bool adjacent(int u, int v) const { return (adjacency_[u] >> v) & 1u; }
  [[nodiscard]] Mask all_nodes() const {
    return n_ == 32 ? ~Mask{0} : (Mask{1} << n_) - 1;
  }
  [[nodiscard]] std::size_t state_count() const { return std::size_t{1} << n_; }

  /// Edges as (u, v) with u < v, sorted lexicographically.
  [[nodiscard]] std::vector<std::pair<int, int>> edges() const;

  /// Number of edges with both endpoints in s.
  [[nodiscard]] int violations(SubsetState s) const;
  /// Number of neighbors of i inside s (the d_i of a flip).
  [[nodiscard]] int neighbors_in(int i, SubsetState s) const {
    return std::popcount(adjacency_[i] & s.mask);
  }

  [[nodiscard]] bool is_independent(SubsetState s) const;
  /// Independent and no outside node has zero neighbors in s.
  [[nodiscard]] bool is_maximal_independent(SubsetState s) const;
  [[nodiscard]] bool is_valid_state(SubsetState s) const { return (s.mask & ~all_nodes()) == 0; }

  friend bool operator==(const Graph &, const Graph &) = default;

private:
  int n_;
  int edge_count_ = 0;
  std::vector<Mask> adjacency_;
};

/// Parses the text instance format: first non-comment line n, then "u v" per edge.
Graph parse_graph(std::string_view text);

enum class GraphKind { empty, complete, cycle, complete_bipartite, split, random_gnp };

struct GeneratorSpec {
  GraphKind kind;
  std::vector<double> params;
};

/// Parses "kind:p1,p2" (e.g. "split:7,2", "random_gnp:10,0.4").
GeneratorSpec parse_generator_spec(std::string_view spec);

/// split(K, m) is a K-clique (nodes 0..K-1) fully joined to an m-node independent
/// set (nodes K..K+m-1). random_gnp(n, p) uses seed.
Graph generate_graph(GraphKind kind, const std::vector<double> &params,
                     std::optional<std::uint64_t> seed = std::nullopt);
Graph generate_graph(const GeneratorSpec &spec, std::optional<std::uint64_t> seed = std::nullopt);

struct DegeneracyClass {
  int size;
  std::vector<int> members; // indices into MinimaCatalog::sets
};

/// All maximal independent sets of a graph (the classical minima of the MIS cost).
struct MinimaCatalog {
  std::vector<SubsetState> sets; // ascending by mask
  std::vector<int> sizes;
  int mis_size = 0;
  std::vector<DegeneracyClass> degeneracy_classes; // ascending by size
  std::vector<std::pair<int, int>> close_pairs;    // (i, j), i < j, Hamming distance 2

  [[nodiscard]] std::optional<int> index_of(SubsetState s) const;
  [[nodiscard]] bool is_mis(int index) const { return sizes[index] == mis_size; }
  [[nodiscard]] std::vector<SubsetState> maximum_sets() const;
  /// Maximal independent sets strictly smaller than the MIS.
  [[nodiscard]] std::vector<SubsetState> local_sets() const;
  [[nodiscard]] std::vector<SubsetState> sets_of_size(int size) const;
};

MinimaCatalog enumerate_maximal_independent_sets(const Graph &g);

/// Equal-size maximal independent sets reachable by removing one node and adding one.
std::vector<SubsetState> degenerate_neighbors(const Graph &g, SubsetState s);

struct RepairStep {
  int removed;
  double bilinear_energy; // c * violations after the removal
};

struct RepairPath {
  SubsetState start;
  SubsetState result;
  double initial_bilinear_energy;
  std::vector<RepairStep> steps;
};

/// Removes the node with the most violated incident edges (lowest index on ties)
/// until the set is independent.
RepairPath greedy_repair(const Graph &g, double c, SubsetState s);

} // namespace aqo
