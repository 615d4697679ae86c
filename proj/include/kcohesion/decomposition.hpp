#pragma once

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kcohesion/graph.hpp"
#include "kcohesion/graph_concept.hpp"

namespace kcohesion {

/// Core number per node: the largest k of a k-core containing it.
struct CoreNumbers {
  std::vector<int> ids;   // ascending
  std::vector<int> core;  // parallel to ids

  int of(int v) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), v);
    return core[static_cast<std::size_t>(it - ids.begin())];
  }

  int max_core() const {
    int m = 0;
    for (int c : core) m = std::max(m, c);
    return m;
  }
};

namespace detail {

template <graph_like G>
std::unordered_map<int, int> slot_map(const G& g) {
  std::unordered_map<int, int> slot;
  slot.reserve(g.node_count() * 2);
  int i = 0;
  for (int v : g.nodes()) slot.emplace(v, i++);
  return slot;
}

}  // namespace detail

/// Node sets of the connected components, each sorted ascending; components
/// ordered by their smallest node.
template <graph_like G>
std::vector<std::vector<int>> connected_components(const G& g) {
  const auto slot = detail::slot_map(g);
  std::vector<char> seen(g.node_count(), 0);
  std::vector<std::vector<int>> components;
  std::vector<int> stack;
  for (int start : g.nodes()) {
    if (seen[slot.at(start)]) continue;
    seen[slot.at(start)] = 1;
    std::vector<int> comp;
    stack.push_back(start);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int u : g.neighbors(v)) {
        auto& s = seen[slot.at(u)];
        if (!s) {
          s = 1;
          stack.push_back(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

/// Linear-time bucket peeling (repeated removal of minimum-degree nodes).
template <graph_like G>
CoreNumbers core_numbers(const G& g) {
  const std::size_t n = g.node_count();
  CoreNumbers result;
  result.ids.assign(g.nodes().begin(), g.nodes().end());
  result.core.assign(n, 0);
  if (n == 0) return result;
  const auto slot = detail::slot_map(g);

  std::vector<int> deg(n);
  int max_deg = 0;
  for (std::size_t s = 0; s < n; ++s) {
    deg[s] = g.degree(result.ids[s]);
    max_deg = std::max(max_deg, deg[s]);
  }
  // Bucket sort nodes by degree.
  std::vector<int> bin(static_cast<std::size_t>(max_deg) + 2, 0);
  for (std::size_t s = 0; s < n; ++s) ++bin[deg[s] + 1];
  for (std::size_t d = 1; d < bin.size(); ++d) bin[d] += bin[d - 1];
  std::vector<int> order(n), pos(n);
  std::vector<int> fill = bin;
  for (std::size_t s = 0; s < n; ++s) {
    pos[s] = fill[deg[s]]++;
    order[pos[s]] = static_cast<int>(s);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const int vs = order[i];
    result.core[vs] = deg[vs];
    for (int u : g.neighbors(result.ids[vs])) {
      const int us = slot.at(u);
      if (deg[us] > deg[vs]) {
        // Swap u to the front of its degree bucket, then shrink its degree.
        const int du = deg[us];
        const int front = bin[du];
        const int other = order[front];
        if (other != us) {
          std::swap(order[pos[us]], order[front]);
          std::swap(pos[us], pos[other]);
        }
        ++bin[du];
        --deg[us];
      }
    }
  }
  return result;
}

/// Biconnected components as an exact edge partition, plus the articulation
/// points. A bridge forms a 2-node component; isolated nodes form none.
struct BicomponentSet {
  std::vector<std::vector<std::pair<int, int>>> edge_components;
  std::vector<int> articulation_points;

  /// Node set of each edge component, index-aligned with edge_components.
  std::vector<std::vector<int>> node_components() const {
    std::vector<std::vector<int>> out;
    out.reserve(edge_components.size());
    for (const auto& edges : edge_components) {
      std::vector<int> nodes;
      nodes.reserve(edges.size() * 2);
      for (const auto& [u, v] : edges) {
        nodes.push_back(u);
        nodes.push_back(v);
      }
      std::sort(nodes.begin(), nodes.end());
      nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
      out.push_back(std::move(nodes));
    }
    return out;
  }
};

/// Iterative depth-first lowpoint computation (Tarjan).
template <graph_like G>
BicomponentSet biconnected_components(const G& g) {
  const std::size_t n = g.node_count();
  const auto slot = detail::slot_map(g);
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1);
  std::vector<char> articulation(n, 0);
  std::vector<std::pair<int, int>> edge_stack;
  BicomponentSet result;

  struct Frame {
    int v;
    std::vector<int> nbrs;
    std::size_t next = 0;
    int children = 0;
  };

  int timer = 0;
  for (int root : g.nodes()) {
    if (disc[slot.at(root)] != -1) continue;
    std::vector<Frame> stack;
    auto open = [&](int v) {
      const int vs = slot.at(v);
      disc[vs] = low[vs] = timer++;
      Frame f;
      f.v = v;
      for (int u : g.neighbors(v)) f.nbrs.push_back(u);
      stack.push_back(std::move(f));
    };
    open(root);
    while (!stack.empty()) {
      Frame& f = stack.back();
      const int vs = slot.at(f.v);
      if (f.next < f.nbrs.size()) {
        const int u = f.nbrs[f.next++];
        const int us = slot.at(u);
        if (disc[us] == -1) {
          parent[us] = f.v;
          ++f.children;
          edge_stack.emplace_back(f.v, u);
          open(u);
        } else if (u != parent[vs] && disc[us] < disc[vs]) {
          edge_stack.emplace_back(f.v, u);
          low[vs] = std::min(low[vs], disc[us]);
        }
      } else {
        const int v = f.v;
        stack.pop_back();
        if (!stack.empty()) {
          Frame& pf = stack.back();
          const int ps = slot.at(pf.v);
          low[ps] = std::min(low[ps], low[vs]);
          if (low[vs] >= disc[ps]) {
            // Edges above (pf.v, v) form one biconnected component.
            std::vector<std::pair<int, int>> comp;
            while (!edge_stack.empty()) {
              auto e = edge_stack.back();
              edge_stack.pop_back();
              comp.push_back(e);
              if (e.first == pf.v && e.second == v) break;
            }
            result.edge_components.push_back(std::move(comp));
            if (parent[ps] != -1 || pf.children > 1) articulation[ps] = 1;
          }
        }
      }
    }
  }

  // Canonical form: edges as (min, max), sorted within and across components.
  for (auto& comp : result.edge_components) {
    for (auto& e : comp)
      if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(comp.begin(), comp.end());
  }
  std::sort(result.edge_components.begin(), result.edge_components.end());
  for (int v : g.nodes())
    if (articulation[slot.at(v)]) result.articulation_points.push_back(v);
  return result;
}

/// Survivors of iterative minimum-degree peeling at threshold k, ascending.
/// This is the node set of the maximal subgraph with min degree >= k.
template <graph_like G>
std::vector<int> k_core_nodes(const G& g, int k) {
  const auto slot = detail::slot_map(g);
  const std::size_t n = g.node_count();
  std::vector<int> deg(n);
  std::vector<char> removed(n, 0);
  std::vector<int> queue;
  {
    std::size_t s = 0;
    for (int v : g.nodes()) {
      deg[s] = g.degree(v);
      if (deg[s] < k) {
        removed[s] = 1;
        queue.push_back(v);
      }
      ++s;
    }
  }
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (int u : g.neighbors(v)) {
      const int us = slot.at(u);
      if (removed[us]) continue;
      if (--deg[us] < k) {
        removed[us] = 1;
        queue.push_back(u);
      }
    }
  }
  std::vector<int> survivors;
  std::size_t s = 0;
  for (int v : g.nodes()) {
    if (!removed[s]) survivors.push_back(v);
    ++s;
  }
  return survivors;
}

/// Maximal subgraph with minimum degree >= k, recomputed by peeling g itself.
inline Graph k_core(const Graph& g, int k) {
  return g.induced(k_core_nodes(g, k));
}

/// Induced subgraph on the nodes whose precomputed core number is >= k.
inline Graph k_core_subgraph(const Graph& g, int k, const CoreNumbers& cores) {
  std::vector<int> keep;
  for (std::size_t s = 0; s < cores.ids.size(); ++s)
    if (cores.core[s] >= k) keep.push_back(cores.ids[s]);
  return g.induced(keep);
}

}  // namespace kcohesion
