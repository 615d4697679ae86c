#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kcohesion/graph.hpp"
#include "kcohesion/rng.hpp"

namespace kcohesion {

inline Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return Graph::from_edges(edges, SelfLoopPolicy::reject, ids);
}

inline Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return Graph::from_edges(edges, SelfLoopPolicy::reject, ids);
}

inline Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(edges);
}

/// Star K_{1,n}: center 0, leaves 1..n.
inline Graph star_graph(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph::from_edges(edges);
}

inline Graph grid_graph(int rows, int cols) {
  std::vector<std::pair<int, int>> edges;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  return Graph::from_edges(edges);
}

/// Petersen graph on ids base..base+9 (0..4 outer cycle, 5..9 inner star).
inline void append_petersen_edges(std::vector<std::pair<int, int>>& edges, int base) {
  for (int i = 0; i < 5; ++i) {
    edges.emplace_back(base + i, base + (i + 1) % 5);
    edges.emplace_back(base + 5 + i, base + 5 + (i + 2) % 5);
    edges.emplace_back(base + i, base + 5 + i);
  }
}

inline Graph petersen_graph() {
  std::vector<std::pair<int, int>> edges;
  append_petersen_edges(edges, 0);
  return Graph::from_edges(edges);
}

/// The 99-node / 200-edge synthetic benchmark graph: a 5x5 grid, one Petersen
/// graph per grid corner (attached by one edge at the corner and one at the
/// corner's neighbor), and two K5 per Petersen graph. The inner K5 is joined
/// to its Petersen graph by three edges; the outer K5 shares one node with
/// the inner one at two corners (plus one extra edge back to the Petersen
/// graph) and shares two nodes at the other two corners. The result is
/// biconnected, is a 3-core, has maximum core number 4 and node connectivity
/// 2, with connectivity levels 2 (grid), 3 (Petersen) and 4 (K5).
inline Graph appendix_a_fixture() {
  std::vector<std::pair<int, int>> edges;
  // 5x5 grid on ids 0..24.
  auto id = [](int r, int c) { return 5 * r + c; };
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      if (c + 1 < 5) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < 5) edges.emplace_back(id(r, c), id(r + 1, c));
    }

  struct CornerSpec {
    int corner;
    int corner_neighbor;
    int base;
    int overlap;  // nodes shared by the two K5
  };
  const CornerSpec corners[] = {
      {id(0, 0), id(0, 1), 25, 1},
      {id(0, 4), id(0, 3), 44, 1},
      {id(4, 0), id(4, 1), 63, 2},
      {id(4, 4), id(4, 3), 81, 2},
  };

  for (const auto& corner_spec : corners) {
    const int b = corner_spec.base;
    append_petersen_edges(edges, b);
    // Two edges into the grid.
    edges.emplace_back(corner_spec.corner, b + 0);
    edges.emplace_back(corner_spec.corner_neighbor, b + 1);
    // Inner K5 on b+10..b+14, joined to the Petersen graph by three edges.
    for (int i = 10; i <= 14; ++i)
      for (int j = i + 1; j <= 14; ++j) edges.emplace_back(b + i, b + j);
    edges.emplace_back(b + 5, b + 10);
    edges.emplace_back(b + 6, b + 11);
    edges.emplace_back(b + 7, b + 12);
    if (corner_spec.overlap == 1) {
      // Outer K5 {b+14, b+15..b+18} shares node b+14; one extra edge to P.
      const int outer[] = {b + 14, b + 15, b + 16, b + 17, b + 18};
      for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) edges.emplace_back(outer[i], outer[j]);
      edges.emplace_back(b + 15, b + 8);
    } else {
      // Outer K5 {b+13..b+17} shares nodes b+13 and b+14 (one shared edge).
      const int outer[] = {b + 13, b + 14, b + 15, b + 16, b + 17};
      for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) edges.emplace_back(outer[i], outer[j]);
    }
  }
  return Graph::from_edges(edges);
}

/// G(n, p) with p chosen to hit the requested average degree.
inline Graph erdos_renyi(int n, double avg_degree, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("erdos_renyi requires n >= 2");
  if (avg_degree <= 0 || avg_degree >= static_cast<double>(n) - 1)
    throw std::invalid_argument("average degree must lie in (0, n-1)");
  const double p = avg_degree / (static_cast<double>(n) - 1);
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform_real() < p) edges.emplace_back(i, j);
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return Graph::from_edges(edges, SelfLoopPolicy::reject, ids);
}

namespace detail {

/// Uniform stub matching of a degree sequence; self-loops and duplicate
/// pairs are dropped afterwards so the result is simple.
inline std::vector<std::pair<int, int>> match_stubs(std::vector<int> stubs,
                                                    Rng& rng) {
  rng.shuffle(stubs);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    if (stubs[i] == stubs[i + 1]) continue;
    edges.emplace_back(std::min(stubs[i], stubs[i + 1]),
                       std::max(stubs[i], stubs[i + 1]));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace detail

/// Configuration-model graph whose degree sequence is drawn from a discrete
/// power law with the given exponent on support [1, n-1] (inverse CDF), then
/// stub-matched and cleaned to a simple graph.
inline Graph powerlaw_configuration(int n, double alpha, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("powerlaw_configuration requires n >= 2");
  if (alpha <= 1.0) throw std::invalid_argument("power-law exponent must exceed 1");
  Rng rng(seed);
  std::vector<double> cumulative(static_cast<std::size_t>(n) - 1);
  double total = 0;
  for (int d = 1; d <= n - 1; ++d) {
    total += std::pow(static_cast<double>(d), -alpha);
    cumulative[static_cast<std::size_t>(d) - 1] = total;
  }
  std::vector<int> degree(static_cast<std::size_t>(n));
  for (auto& d : degree) {
    const double u = rng.uniform_real() * total;
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    d = static_cast<int>(it - cumulative.begin()) + 1;
  }
  // Stub matching needs an even stub count.
  if (std::accumulate(degree.begin(), degree.end(), 0LL) % 2 != 0) {
    for (auto& d : degree)
      if (d < n - 1) {
        ++d;
        break;
      }
  }
  std::vector<int> stubs;
  for (int v = 0; v < n; ++v)
    stubs.insert(stubs.end(), static_cast<std::size_t>(degree[static_cast<std::size_t>(v)]), v);
  const auto edges = detail::match_stubs(std::move(stubs), rng);
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return Graph::from_edges(edges, SelfLoopPolicy::reject, ids);
}

/// Result of one bipartite configuration-model replicate. The stub matching
/// preserves both part degree sequences exactly; collapsing duplicate pairs
/// can only lower degrees, and the removed count records by how much.
struct NullModelResult {
  Graph graph;
  std::size_t duplicate_edges_removed = 0;
  /// Per-node degree of the stub-matched multigraph, before cleanup.
  std::vector<std::pair<int, int>> pre_cleanup_degrees;
};

/// Random bipartite graph with the same two degree sequences as g (before
/// cleanup), produced by pairing part-A stubs with a shuffled copy of the
/// part-B stubs. Cross-part self-loops are impossible; duplicate pairs are
/// collapsed.
inline NullModelResult bipartite_configuration_null(const Graph& g,
                                                    std::uint64_t seed) {
  if (!g.has_parts())
    throw std::invalid_argument("configuration null model requires a bipartite graph");
  Rng rng(seed);
  std::vector<int> a_stubs, b_stubs;
  for (int v : g.part_nodes(Part::a))
    a_stubs.insert(a_stubs.end(), static_cast<std::size_t>(g.degree(v)), v);
  for (int v : g.part_nodes(Part::b))
    b_stubs.insert(b_stubs.end(), static_cast<std::size_t>(g.degree(v)), v);
  rng.shuffle(b_stubs);

  NullModelResult result;
  std::vector<std::pair<int, int>> edges(a_stubs.size());
  for (std::size_t i = 0; i < a_stubs.size(); ++i)
    edges[i] = {a_stubs[i], b_stubs[i]};

  std::unordered_map<int, int> multi_degree;
  for (const auto& [u, v] : edges) {
    ++multi_degree[u];
    ++multi_degree[v];
  }
  for (int v : g.nodes())
    result.pre_cleanup_degrees.emplace_back(v, multi_degree[v]);

  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  result.duplicate_edges_removed = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());
  result.graph = Graph::from_edges(edges, SelfLoopPolicy::reject, g.nodes());
  result.graph.assign_parts(g.part_nodes(Part::a));
  return result;
}

}  // namespace kcohesion
