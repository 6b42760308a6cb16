#pragma once

#include "aqo/graph.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace aqo::test {

inline Graph path3() { return parse_graph("3\n0 1\n1 2\n"); }
inline Graph k2() { return generate_graph(GraphKind::complete, {2}); }
inline Graph k3() { return generate_graph(GraphKind::complete, {3}); }
inline Graph k23() { return generate_graph(GraphKind::complete_bipartite, {2, 3}); }
inline Graph c5() { return generate_graph(GraphKind::cycle, {5}); }
inline Graph split72() { return generate_graph(GraphKind::split, {7, 2}); }

inline bool connected(const Graph &g) {
  Mask seen = 1, frontier = 1;
  while (frontier) {
    Mask next = 0;
    for (int i = 0; i < g.size(); ++i)
      if ((frontier >> i) & 1u)
        next |= g.neighbors(i);
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == g.all_nodes();
}

/// Seeded G(n, p) with n in [lo, hi] and p in [0.2, 0.8].
inline Graph random_graph(std::uint64_t seed, int lo, int hi) {
  std::mt19937_64 rng(seed * 7919 + 17);
  const int n = std::uniform_int_distribution<int>(lo, hi)(rng);
  const double p = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
  return generate_graph(GraphKind::random_gnp, {static_cast<double>(n), p}, rng());
}

/// Brute-force maximal independent sets, ascending by mask.
inline std::vector<SubsetState> brute_force_maximal(const Graph &g) {
  std::vector<SubsetState> out;
  for (Mask z = 0; z < g.state_count(); ++z) {
    SubsetState s{z};
    bool independent = true, maximal = true;
    for (auto [u, v] : g.edges())
      independent = independent && !(s.contains(u) && s.contains(v));
    for (int i = 0; i < g.size() && independent; ++i)
      if (!s.contains(i) && (g.neighbors(i) & z) == 0)
        maximal = false;
    if (independent && maximal)
      out.push_back(s);
  }
  return out;
}

/// Connected components of the close-pair graph; each is an irreducible manifold.
inline std::vector<std::vector<SubsetState>> close_pair_components(const MinimaCatalog &catalog) {
  const int count = static_cast<int>(catalog.sets.size());
  std::vector<int> parent(count);
  for (int i = 0; i < count; ++i)
    parent[i] = i;
  auto find = [&](int i) {
    while (parent[i] != i)
      i = parent[i] = parent[parent[i]];
    return i;
  };
  for (auto [a, b] : catalog.close_pairs)
    parent[find(a)] = find(b);
  std::vector<std::vector<SubsetState>> out;
  std::vector<int> slot(count, -1);
  for (int i = 0; i < count; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[root]].push_back(catalog.sets[i]);
  }
  return out;
}

inline SubsetState set_of(std::initializer_list<int> nodes) {
  return SubsetState::from_nodes(std::vector<int>(nodes));
}

} // namespace aqo::test
