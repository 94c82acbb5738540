#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bitset.hpp"

namespace sofmdim::detail {

// Undirected simple graph on 0..n-1 as adjacency bitsets.
struct Graph {
  explicit Graph(std::size_t n) : adj(n, Bits(n)) {}
  std::size_t size() const { return adj.size(); }
  void connect(std::size_t a, std::size_t b) {
    adj[a].set(b);
    adj[b].set(a);
  }
  std::vector<Bits> adj;
};

// Connected components, each listed in increasing vertex order; components
// are ordered by their smallest vertex.
std::vector<std::vector<std::size_t>> components(const Graph& g);

// Induced subgraph on `vertices` (renumbered 0..k-1 in the given order).
Graph induced(const Graph& g, const std::vector<std::size_t>& vertices);

struct SearchLimits {
  std::size_t max_vertices;
  std::uint64_t node_budget;
};

// Maximum independent set, exact. Returns local vertex ids, ascending.
// Throws GuardExceeded when the graph or the search exceeds the limits.
std::vector<std::size_t> max_independent_set(const Graph& g, const SearchLimits& limits);

// Maximal independent set by minimum-degree greedy, ties to lowest index.
std::vector<std::size_t> greedy_independent_set(const Graph& g);

// Minimum set cover of a universe of size u by the given sets (bitsets over
// the universe). Returns chosen set indices, ascending. Every universe
// element must belong to some set.
std::vector<std::size_t> min_set_cover(std::size_t universe, const std::vector<Bits>& sets,
                                       const SearchLimits& limits);

// Greedy cover: most newly covered elements first, ties to lowest set index.
std::vector<std::size_t> greedy_set_cover(std::size_t universe, const std::vector<Bits>& sets);

// All maximal cliques (Bron-Kerbosch with pivoting). Throws GuardExceeded if
// the number of recursion nodes exceeds the budget.
std::vector<Bits> maximal_cliques(const Graph& g, std::uint64_t node_budget);

}  // namespace sofmdim::detail
