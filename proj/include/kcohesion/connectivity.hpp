#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "kcohesion/decomposition.hpp"
#include "kcohesion/graph.hpp"
#include "kcohesion/graph_concept.hpp"
#include "kcohesion/parallel.hpp"

namespace kcohesion {

enum class Estimator { exact_flow, approx };

namespace detail {

/// Dinic on unit-capacity directed networks. Small and exact; every
/// connectivity question in this library reduces to it.
class UnitFlow {
 public:
  explicit UnitFlow(int nodes) : head_(nodes) {}

  void add_arc(int from, int to, int cap) {
    head_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    head_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0});
  }

  /// Max flow from s to t, stopping early once `cutoff` is reached.
  int max_flow(int s, int t, int cutoff = std::numeric_limits<int>::max()) {
    int flow = 0;
    while (flow < cutoff && bfs(s, t)) {
      iter_.assign(head_.size(), 0);
      while (flow < cutoff) {
        const int pushed = dfs(s, t);
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  /// Residual adjacency (arcs with remaining capacity), valid after max_flow.
  std::vector<std::vector<int>> residual_adjacency() const {
    std::vector<std::vector<int>> adj(head_.size());
    for (std::size_t v = 0; v < head_.size(); ++v)
      for (int a : head_[v])
        if (arcs_[static_cast<std::size_t>(a)].cap > 0)
          adj[v].push_back(arcs_[static_cast<std::size_t>(a)].to);
    return adj;
  }

  /// Nodes reachable from s in the residual network (valid after max_flow).
  std::vector<char> residual_reachable(int s) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int a : head_[v]) {
        const Arc& arc = arcs_[a];
        if (arc.cap > 0 && !seen[arc.to]) {
          seen[arc.to] = 1;
          stack.push_back(arc.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    int cap;
  };

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::deque<int> queue{s};
    level_[s] = 0;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int a : head_[v]) {
        const Arc& arc = arcs_[a];
        if (arc.cap > 0 && level_[arc.to] == -1) {
          level_[arc.to] = level_[v] + 1;
          queue.push_back(arc.to);
        }
      }
    }
    return level_[t] != -1;
  }

  int dfs(int v, int t) {
    if (v == t) return 1;
    for (auto& i = iter_[v]; i < head_[v].size(); ++i) {
      const int a = head_[v][i];
      Arc& arc = arcs_[a];
      if (arc.cap > 0 && level_[arc.to] == level_[v] + 1) {
        if (dfs(arc.to, t)) {
          --arc.cap;
          ++arcs_[a ^ 1].cap;
          return 1;
        }
      }
    }
    level_[v] = -1;
    return 0;
  }

  std::vector<std::vector<int>> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

/// Directed split network for vertex capacities: node w becomes
/// w_in (2w) -> w_out (2w+1) with capacity 1; each undirected edge {x, y}
/// becomes x_out -> y_in and y_out -> x_in. Unit edge capacity gives the
/// correct flow value (node-independent path families are edge-disjoint);
/// cut extraction passes a large edge capacity instead so that minimum cuts
/// cross only the node arcs.
template <graph_like G>
UnitFlow node_split_network(const G& g, const std::unordered_map<int, int>& slot,
                            int edge_capacity = 1) {
  UnitFlow net(static_cast<int>(2 * g.node_count()));
  for (int v : g.nodes()) {
    const int vs = slot.at(v);
    net.add_arc(2 * vs, 2 * vs + 1, 1);
    for (int u : g.neighbors(v))
      net.add_arc(2 * vs + 1, 2 * slot.at(u), edge_capacity);
  }
  return net;
}

}  // namespace detail

/// Exact local node connectivity kappa(u, v): the maximum number of node
/// independent u-v paths, via max flow on the split network. For adjacent
/// pairs the direct edge contributes exactly one path.
template <graph_like G>
int local_node_connectivity_exact(const G& g, int u, int v,
                                  int cutoff = std::numeric_limits<int>::max()) {
  if (u == v) throw std::domain_error("local connectivity needs distinct nodes");
  const auto slot = detail::slot_map(g);
  auto net = detail::node_split_network(g, slot);
  return net.max_flow(2 * slot.at(u) + 1, 2 * slot.at(v), cutoff);
}

/// A minimum u-v vertex cut for a non-adjacent pair: the nodes whose
/// in->out arc crosses the minimum cut of the split network.
template <graph_like G>
std::vector<int> min_vertex_cut_between(const G& g, int u, int v) {
  if (g.has_edge(u, v))
    throw std::invalid_argument("no vertex cut separates an adjacent pair");
  const auto slot = detail::slot_map(g);
  auto net = detail::node_split_network(g, slot, static_cast<int>(g.node_count()));
  net.max_flow(2 * slot.at(u) + 1, 2 * slot.at(v));
  const auto reach = net.residual_reachable(2 * slot.at(u) + 1);
  std::vector<int> cut;
  for (int w : g.nodes()) {
    const int ws = slot.at(w);
    if (reach[2 * ws] && !reach[2 * ws + 1]) cut.push_back(w);
  }
  return cut;
}

/// White-Newman lower bound on kappa(u, v): repeatedly take the breadth-first
/// shortest u-v path, mark its interior nodes as used, and search again among
/// unused nodes until no path remains. Neighbor expansion is in ascending
/// node order and the parent of each node is its first discoverer, so the
/// result is deterministic for a fixed graph.
template <graph_like G>
int local_node_connectivity_approx(const G& g, int u, int v,
                                   int cutoff = std::numeric_limits<int>::max()) {
  if (u == v) throw std::domain_error("local connectivity needs distinct nodes");
  const auto slot = detail::slot_map(g);
  const int n = static_cast<int>(g.node_count());
  std::vector<char> used(n, 0);
  std::vector<int> parent(n);
  std::vector<int> queue;
  int paths = 0;
  if (g.has_edge(u, v)) ++paths;  // direct edge: one path, empty interior
  const int us = slot.at(u);
  const int vs = slot.at(v);
  while (paths < cutoff) {
    std::fill(parent.begin(), parent.end(), -2);
    queue.clear();
    queue.push_back(u);
    parent[us] = -1;
    bool found = false;
    for (std::size_t qi = 0; qi < queue.size() && !found; ++qi) {
      const int x = queue[qi];
      for (int y : g.neighbors(x)) {
        if (x == u && y == v) continue;  // the direct edge is already counted
        const int ys = slot.at(y);
        if (used[ys] || parent[ys] != -2) continue;
        parent[ys] = x;
        if (y == v) {
          found = true;
          break;
        }
        queue.push_back(y);
      }
    }
    if (!found) break;
    ++paths;
    for (int x = parent[vs]; x != u; x = parent[slot.at(x)]) used[slot.at(x)] = 1;
  }
  return paths;
}

template <graph_like G>
int local_connectivity(const G& g, int u, int v, Estimator estimator,
                       int cutoff = std::numeric_limits<int>::max()) {
  return estimator == Estimator::exact_flow
             ? local_node_connectivity_exact(g, u, v, cutoff)
             : local_node_connectivity_approx(g, u, v, cutoff);
}

/// Exact kappa(G). Fixes one minimum-degree node and minimizes local
/// connectivity over its non-neighbors and over non-adjacent pairs of its
/// neighbors; any minimum cut is caught by one of those pairs.
template <graph_like G>
int node_connectivity(const G& g) {
  const auto n = g.node_count();
  if (n < 2) throw std::domain_error("node connectivity needs at least 2 nodes");
  if (connected_components(g).size() > 1) return 0;
  int min_deg = std::numeric_limits<int>::max();
  int pivot = -1;
  for (int v : g.nodes()) {
    if (g.degree(v) < min_deg) {
      min_deg = g.degree(v);
      pivot = v;
    }
  }
  if (min_deg == static_cast<int>(n) - 1) return min_deg;  // complete graph
  int best = min_deg;
  for (int w : g.nodes()) {
    if (best == 1) break;
    if (w == pivot || g.has_edge(pivot, w)) continue;
    best = std::min(best, local_node_connectivity_exact(g, pivot, w, best));
  }
  std::vector<int> nbrs(g.neighbors(pivot).begin(), g.neighbors(pivot).end());
  for (std::size_t i = 0; i < nbrs.size() && best > 1; ++i)
    for (std::size_t j = i + 1; j < nbrs.size() && best > 1; ++j)
      if (!g.has_edge(nbrs[i], nbrs[j]))
        best = std::min(best,
                        local_node_connectivity_exact(g, nbrs[i], nbrs[j], best));
  return best;
}

/// Exact lambda(G): minimum over w of the max flow from a fixed node to w on
/// the unit-capacity edge network.
template <graph_like G>
int edge_connectivity(const G& g) {
  const auto n = g.node_count();
  if (n < 2) throw std::domain_error("edge connectivity needs at least 2 nodes");
  if (connected_components(g).size() > 1) return 0;
  const auto slot = detail::slot_map(g);
  int best = min_degree_of(g);
  const int source = *std::ranges::begin(g.nodes());
  for (int w : g.nodes()) {
    if (w == source || best == 1) continue;
    detail::UnitFlow net(static_cast<int>(n));
    for (int v : g.nodes())
      for (int x : g.neighbors(v))
        if (v < x) {
          net.add_arc(slot.at(v), slot.at(x), 1);
          net.add_arc(slot.at(x), slot.at(v), 1);
        }
    best = std::min(best, net.max_flow(slot.at(source), slot.at(w), best));
  }
  return best;
}

enum class CachePolicy { store, recompute, off };

/// Cache of local connectivity values over unordered node pairs.
/// Distinct-key inserts may come from parallel workers; a mutex keeps the
/// table consistent and the stored values are schedule-independent because
/// each value depends only on the graph.
class PairConnectivityCache {
 public:
  explicit PairConnectivityCache(CachePolicy policy = CachePolicy::store)
      : policy_(policy) {}

  CachePolicy policy() const { return policy_; }

  std::optional<int> get(int u, int v) const {
    if (policy_ != CachePolicy::store) return std::nullopt;
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = values_.find(key(u, v));
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  void put(int u, int v, int kappa) {
    if (policy_ != CachePolicy::store) return;
    std::lock_guard<std::mutex> lock(mutex_);
    values_.emplace(key(u, v), kappa);
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return values_.size();
  }

 private:
  static std::uint64_t key(int u, int v) {
    const auto lo = static_cast<std::uint64_t>(std::min(u, v));
    const auto hi = static_cast<std::uint64_t>(std::max(u, v));
    return (hi << 32) | lo;
  }

  CachePolicy policy_;
  mutable std::mutex mutex_;
  std::unordered_map<std::uint64_t, int> values_;
};

/// Exact rational average of kappa(u, v) over all distinct pairs.
struct AverageConnectivity {
  std::int64_t sum = 0;
  std::int64_t pair_count = 0;

  double value() const {
    return pair_count == 0 ? 0.0
                           : static_cast<double>(sum) / static_cast<double>(pair_count);
  }

  friend bool operator==(const AverageConnectivity&,
                         const AverageConnectivity&) = default;
};

/// Sum of local node connectivity over all distinct pairs divided by the
/// number of pairs. Pair computations are independent; with threads > 1 they
/// run in parallel into per-pair slots, so results match the serial order.
template <graph_like G>
AverageConnectivity average_node_connectivity(
    const G& g, Estimator estimator = Estimator::exact_flow,
    PairConnectivityCache* cache = nullptr, int threads = 1) {
  const auto n = g.node_count();
  if (n < 2) throw std::domain_error("average connectivity needs at least 2 nodes");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  const auto& ids = g.nodes();
  std::vector<int> id_list(std::ranges::begin(ids), std::ranges::end(ids));
  for (std::size_t i = 0; i < id_list.size(); ++i)
    for (std::size_t j = i + 1; j < id_list.size(); ++j)
      pairs.emplace_back(id_list[i], id_list[j]);

  std::vector<int> values(pairs.size(), -1);
  std::vector<std::size_t> missing;
  if (cache != nullptr && cache->policy() == CachePolicy::store) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (auto hit = cache->get(pairs[i].first, pairs[i].second))
        values[i] = *hit;
      else
        missing.push_back(i);
    }
  } else {
    missing.resize(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) missing[i] = i;
  }
  parallel_for(missing.size(), threads, [&](std::size_t m) {
    const auto [u, v] = pairs[missing[m]];
    values[missing[m]] = local_connectivity(g, u, v, estimator);
  });
  if (cache != nullptr) {
    for (std::size_t m : missing)
      cache->put(pairs[m].first, pairs[m].second, values[m]);
  }
  AverageConnectivity avg;
  avg.pair_count = static_cast<std::int64_t>(pairs.size());
  for (int k : values) avg.sum += k;
  return avg;
}

/// kappa, lambda, delta and average kappa of one graph. The Whitney chain
/// kappa <= lambda <= delta holds for every input.
struct ConnectivityReport {
  int kappa = 0;
  int lambda = 0;
  int delta = 0;
  AverageConnectivity average_kappa;
};

template <graph_like G>
ConnectivityReport connectivity_report(const G& g,
                                       Estimator estimator = Estimator::exact_flow,
                                       int threads = 1) {
  ConnectivityReport report;
  report.kappa = node_connectivity(g);
  report.lambda = edge_connectivity(g);
  report.delta = min_degree_of(g);
  report.average_kappa = average_node_connectivity(g, estimator, nullptr, threads);
  return report;
}

}  // namespace kcohesion
