#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kcohesion {

enum class SelfLoopPolicy { reject, drop };
enum class Part : char { a = 0, b = 1 };

/// Undirected simple graph over integer node ids. Ids are arbitrary
/// non-negative ints (induced subgraphs keep the ids of their parent), stored
/// ascending; neighbor lists are sorted, so all iteration is canonical.
/// Graphs are immutable once built; every query is safe for concurrent reads.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::span<const std::pair<int, int>> edges,
                          SelfLoopPolicy policy = SelfLoopPolicy::reject,
                          std::span<const int> isolated_nodes = {}) {
    Graph g;
    std::vector<int> ids;
    ids.reserve(edges.size() * 2 + isolated_nodes.size());
    for (const auto& [u, v] : edges) {
      if (u == v) {
        if (policy == SelfLoopPolicy::reject)
          throw std::invalid_argument("self-loop on node " + std::to_string(u));
        continue;
      }
      ids.push_back(u);
      ids.push_back(v);
    }
    ids.insert(ids.end(), isolated_nodes.begin(), isolated_nodes.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    g.ids_ = std::move(ids);
    g.adj_.assign(g.ids_.size(), {});
    for (const auto& [u, v] : edges) {
      if (u == v) continue;
      g.adj_[g.slot(u)].push_back(v);
      g.adj_[g.slot(v)].push_back(u);
    }
    g.finish_adjacency();
    return g;
  }

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<int>& nodes() const { return ids_; }

  bool contains(int v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    return it != ids_.end() && *it == v;
  }

  int degree(int v) const { return static_cast<int>(adj_[slot(v)].size()); }

  std::span<const int> neighbors(int v) const { return adj_[slot(v)]; }

  bool has_edge(int u, int v) const {
    const auto& nbrs = adj_[slot(u)];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
  }

  int min_degree() const {
    int d = ids_.empty() ? 0 : std::numeric_limits<int>::max();
    for (const auto& nbrs : adj_) d = std::min(d, static_cast<int>(nbrs.size()));
    return d;
  }

  /// Induced subgraph on `keep`; node ids are preserved, so results of any
  /// nested decomposition refer directly to this graph's ids.
  Graph induced(std::span<const int> keep) const {
    Graph sub;
    sub.ids_.assign(keep.begin(), keep.end());
    std::sort(sub.ids_.begin(), sub.ids_.end());
    sub.ids_.erase(std::unique(sub.ids_.begin(), sub.ids_.end()), sub.ids_.end());
    sub.adj_.resize(sub.ids_.size());
    for (std::size_t s = 0; s < sub.ids_.size(); ++s) {
      const int v = sub.ids_[s];
      for (int u : neighbors(v))
        if (sub.contains(u)) sub.adj_[s].push_back(u);
      sub.edge_count_ += sub.adj_[s].size();
    }
    sub.edge_count_ /= 2;
    if (!part_.empty()) {
      sub.part_.resize(sub.ids_.size());
      for (std::size_t s = 0; s < sub.ids_.size(); ++s)
        sub.part_[s] = part_[slot(sub.ids_[s])];
    }
    return sub;
  }

  /// All edges as (u, v) with u < v, lexicographically sorted.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (std::size_t s = 0; s < ids_.size(); ++s)
      for (int u : adj_[s])
        if (ids_[s] < u) out.emplace_back(ids_[s], u);
    return out;
  }

  // --- bipartite support ------------------------------------------------

  /// Tags every node with a part and checks that all edges cross parts.
  /// Part of graph construction; not meant to be called on a shared graph.
  void assign_parts(std::span<const int> part_a_nodes) {
    part_.assign(ids_.size(), static_cast<char>(Part::b));
    for (int v : part_a_nodes) part_[slot(v)] = static_cast<char>(Part::a);
    for (std::size_t s = 0; s < ids_.size(); ++s)
      for (int u : adj_[s])
        if (part_[slot(u)] == part_[s])
          throw std::invalid_argument("edge " + std::to_string(ids_[s]) + "-" +
                                      std::to_string(u) +
                                      " joins two nodes of the same part");
  }

  bool has_parts() const { return !part_.empty(); }

  Part part_of(int v) const { return static_cast<Part>(part_[slot(v)]); }

  std::vector<int> part_nodes(Part p) const {
    std::vector<int> out;
    for (std::size_t s = 0; s < ids_.size(); ++s)
      if (static_cast<Part>(part_[s]) == p) out.push_back(ids_[s]);
    return out;
  }

 private:
  int slot(int v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v)
      throw std::out_of_range("node " + std::to_string(v) + " not in graph");
    return static_cast<int>(it - ids_.begin());
  }

  void finish_adjacency() {
    edge_count_ = 0;
    for (auto& nbrs : adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      edge_count_ += nbrs.size();
    }
    edge_count_ /= 2;
  }

  std::vector<int> ids_;
  std::vector<std::vector<int>> adj_;
  std::size_t edge_count_ = 0;
  std::vector<char> part_;  // empty unless bipartite-tagged
};

/// Two-coloring over each connected component; returns the part-A node set or
/// nullopt when some cycle is odd.
inline std::optional<std::vector<int>> infer_bipartition(const Graph& g) {
  std::vector<int> color_of;  // parallel to g.nodes(): -1 unseen, 0 A, 1 B
  const auto& ids = g.nodes();
  color_of.assign(ids.size(), -1);
  auto index_of = [&](int v) {
    return static_cast<std::size_t>(
        std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
  };
  std::vector<int> stack;
  for (std::size_t s = 0; s < ids.size(); ++s) {
    if (color_of[s] != -1) continue;
    color_of[s] = 0;
    stack.push_back(ids[s]);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      const int vc = color_of[index_of(v)];
      for (int u : g.neighbors(v)) {
        auto& uc = color_of[index_of(u)];
        if (uc == -1) {
          uc = 1 - vc;
          stack.push_back(u);
        } else if (uc == vc) {
          return std::nullopt;
        }
      }
    }
  }
  std::vector<int> part_a;
  for (std::size_t s = 0; s < ids.size(); ++s)
    if (color_of[s] == 0) part_a.push_back(ids[s]);
  return part_a;
}

/// One-mode projection of a bipartite graph onto `side`: two side-nodes are
/// adjacent iff they share at least one neighbor. Unweighted and simple;
/// multiplicity of shared events is discarded.
inline Graph one_mode_projection(const Graph& g, Part side) {
  if (!g.has_parts())
    throw std::invalid_argument("one_mode_projection requires a bipartite graph");
  const Part other = side == Part::a ? Part::b : Part::a;
  std::vector<std::pair<int, int>> edges;
  for (int event : g.part_nodes(other)) {
    const auto nbrs = g.neighbors(event);
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j)
        edges.emplace_back(nbrs[i], nbrs[j]);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  const auto keep = g.part_nodes(side);
  return Graph::from_edges(edges, SelfLoopPolicy::reject, keep);
}

}  // namespace kcohesion
