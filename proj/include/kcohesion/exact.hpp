#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcohesion/connectivity.hpp"
#include "kcohesion/decomposition.hpp"
#include "kcohesion/graph.hpp"
#include "kcohesion/kcomponents.hpp"

namespace kcohesion {

namespace detail {

/// Strongly connected components of a directed adjacency list (iterative
/// Tarjan). Returns component ids per node and the component count.
inline std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj,
                                int& comp_count) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> disc(n, -1), low(n, 0), comp(n, -1), scc_stack;
  std::vector<char> on_stack(n, 0);
  comp_count = 0;
  int timer = 0;
  struct Frame {
    int v;
    std::size_t next = 0;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<Frame> stack{{root}};
    disc[root] = low[root] = timer++;
    scc_stack.push_back(root);
    on_stack[root] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[static_cast<std::size_t>(f.v)].size()) {
        const int u = adj[static_cast<std::size_t>(f.v)][f.next++];
        if (disc[u] == -1) {
          disc[u] = low[u] = timer++;
          scc_stack.push_back(u);
          on_stack[u] = 1;
          stack.push_back({u});
        } else if (on_stack[u]) {
          low[f.v] = std::min(low[f.v], disc[u]);
        }
      } else {
        const int v = f.v;
        stack.pop_back();
        if (!stack.empty())
          low[stack.back().v] = std::min(low[stack.back().v], low[v]);
        if (low[v] == disc[v]) {
          while (true) {
            const int u = scc_stack.back();
            scc_stack.pop_back();
            on_stack[u] = 0;
            comp[u] = comp_count;
            if (u == v) break;
          }
          ++comp_count;
        }
      }
    }
  }
  return comp;
}

/// All minimum s-t vertex cuts, for a non-adjacent pair whose local
/// connectivity equals kappa. After a max flow on the split network (with
/// effectively unbounded edge arcs), the minimum cuts correspond one-to-one
/// with the closed sets of the residual graph: a set containing the source,
/// avoiding the sink, with no residual arc leaving it. Every crossing arc of
/// a closed set is a saturated node arc, so a cut is fully determined by how
/// the set meets the SCC components touching saturated node arcs; the
/// enumeration therefore runs over only those "relevant" components (at most
/// 2*kappa plus source and sink), with reachability through the other
/// components collapsed into projected edges.
inline void all_min_st_vertex_cuts(const Graph& g,
                                   const std::unordered_map<int, int>& slot,
                                   int s, int t, int kappa,
                                   std::set<std::vector<int>>& out) {
  auto net = node_split_network(g, slot, static_cast<int>(g.node_count()));
  const int source = 2 * slot.at(s) + 1;  // s_out
  const int sink = 2 * slot.at(t);        // t_in
  if (net.max_flow(source, sink) != kappa) return;

  const auto radj = net.residual_adjacency();
  int comp_count = 0;
  const auto comp = scc_ids(radj, comp_count);
  auto comp_of = [&](int node) { return comp[static_cast<std::size_t>(node)]; };
  const int source_comp = comp_of(source);
  const int sink_comp = comp_of(sink);

  // Saturated node arcs: in -> out missing from the residual.
  std::vector<int> saturated_slots;
  for (int w : g.nodes()) {
    const int ws = slot.at(w);
    const auto& row = radj[static_cast<std::size_t>(2 * ws)];
    if (std::find(row.begin(), row.end(), 2 * ws + 1) == row.end())
      saturated_slots.push_back(ws);
  }

  std::vector<int> relevant{source_comp, sink_comp};
  for (int ws : saturated_slots) {
    relevant.push_back(comp_of(2 * ws));
    relevant.push_back(comp_of(2 * ws + 1));
  }
  std::sort(relevant.begin(), relevant.end());
  relevant.erase(std::unique(relevant.begin(), relevant.end()), relevant.end());
  const auto relevant_index = [&](int c) {
    const auto it = std::lower_bound(relevant.begin(), relevant.end(), c);
    return it != relevant.end() && *it == c
               ? static_cast<int>(it - relevant.begin())
               : -1;
  };

  // Condensation successors, deduplicated.
  std::vector<std::set<int>> successors(static_cast<std::size_t>(comp_count));
  for (std::size_t v = 0; v < radj.size(); ++v)
    for (int u : radj[v])
      if (comp[v] != comp[static_cast<std::size_t>(u)])
        successors[static_cast<std::size_t>(comp[v])].insert(
            comp[static_cast<std::size_t>(u)]);

  // Projected reachability among relevant components: an edge r -> r' when
  // r' is the first relevant component on some condensation path from r.
  const auto m = relevant.size();
  std::vector<std::vector<int>> proj_succ(m), proj_pred(m);
  std::vector<int> proj_in_degree(m, 0);
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<char> seen(static_cast<std::size_t>(comp_count), 0);
    std::vector<int> stack{relevant[r]};
    seen[static_cast<std::size_t>(relevant[r])] = 1;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int d : successors[static_cast<std::size_t>(c)]) {
        if (seen[static_cast<std::size_t>(d)]) continue;
        seen[static_cast<std::size_t>(d)] = 1;
        const int ri = relevant_index(d);
        if (ri >= 0) {
          proj_succ[r].push_back(ri);
          proj_pred[static_cast<std::size_t>(ri)].push_back(static_cast<int>(r));
          ++proj_in_degree[static_cast<std::size_t>(ri)];
        } else {
          stack.push_back(d);
        }
      }
    }
  }
  std::vector<int> topo;
  topo.reserve(m);
  {
    std::vector<int> degree = proj_in_degree;
    std::vector<int> ready;
    for (std::size_t r = 0; r < m; ++r)
      if (degree[r] == 0) ready.push_back(static_cast<int>(r));
    while (!ready.empty()) {
      const int r = ready.back();
      ready.pop_back();
      topo.push_back(r);
      for (int d : proj_succ[static_cast<std::size_t>(r)])
        if (--degree[static_cast<std::size_t>(d)] == 0) ready.push_back(d);
    }
  }

  const int source_rel = relevant_index(source_comp);
  const int sink_rel = relevant_index(sink_comp);
  std::vector<char> in_set(m, 0);
  std::vector<int> cut_scratch;
  auto emit = [&] {
    cut_scratch.clear();
    for (int ws : saturated_slots) {
      const int in_rel = relevant_index(comp_of(2 * ws));
      const int out_rel = relevant_index(comp_of(2 * ws + 1));
      if (in_set[static_cast<std::size_t>(in_rel)] &&
          !in_set[static_cast<std::size_t>(out_rel)])
        cut_scratch.push_back(g.nodes()[static_cast<std::size_t>(ws)]);
    }
    std::sort(cut_scratch.begin(), cut_scratch.end());
    if (static_cast<int>(cut_scratch.size()) == kappa) out.insert(cut_scratch);
  };
  // Walk in projected topological order; a component is forced in when any
  // predecessor is in, the source is always in and the sink always out.
  auto enumerate = [&](auto&& self, std::size_t i) -> void {
    if (i == topo.size()) {
      emit();
      return;
    }
    const int r = topo[i];
    bool forced = r == source_rel;
    for (int p : proj_pred[static_cast<std::size_t>(r)])
      forced = forced || in_set[static_cast<std::size_t>(p)];
    if (!forced) {
      in_set[static_cast<std::size_t>(r)] = 0;
      self(self, i + 1);
    }
    if (r != sink_rel) {
      in_set[static_cast<std::size_t>(r)] = 1;
      self(self, i + 1);
      in_set[static_cast<std::size_t>(r)] = 0;
    }
  };
  enumerate(enumerate, 0);
}

/// Exhaustive minimum-cutset enumeration with a known kappa. Covering pairs
/// as in the global-connectivity scan: every minimum cut either separates
/// the pivot from a non-neighbor or splits two of the pivot's neighbors
/// apart, so enumerating all minimum cuts of those pairs reaches every one.
inline std::vector<std::vector<int>> all_min_cutsets_known(const Graph& g,
                                                           int kappa) {
  std::set<std::vector<int>> out;
  if (kappa == 1) {
    for (int a : biconnected_components(g).articulation_points) out.insert({a});
    return {out.begin(), out.end()};
  }
  const auto slot = slot_map(g);
  int pivot = -1;
  int min_deg = std::numeric_limits<int>::max();
  for (int v : g.nodes())
    if (g.degree(v) < min_deg) {
      min_deg = g.degree(v);
      pivot = v;
    }
  for (int w : g.nodes()) {
    if (w == pivot || g.has_edge(pivot, w)) continue;
    all_min_st_vertex_cuts(g, slot, pivot, w, kappa, out);
  }
  const std::vector<int> nbrs(g.neighbors(pivot).begin(), g.neighbors(pivot).end());
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j)
      if (!g.has_edge(nbrs[i], nbrs[j]))
        all_min_st_vertex_cuts(g, slot, nbrs[i], nbrs[j], kappa, out);
  return {out.begin(), out.end()};
}

}  // namespace detail

/// Every minimum-size node cutset of a connected, non-complete graph:
/// each returned set has size kappa(g), removing it disconnects g, and the
/// list is exhaustive and duplicate-free (lexicographically sorted).
inline std::vector<std::vector<int>> all_min_cutsets(const Graph& g) {
  if (g.node_count() < 2 || connected_components(g).size() != 1)
    throw std::domain_error("all_min_cutsets requires a connected graph");
  if (g.min_degree() == static_cast<int>(g.node_count()) - 1)
    throw std::domain_error("a complete graph has no node cutset");
  return detail::all_min_cutsets_known(g, node_connectivity(g));
}

struct ExactOptions {
  bool compute_average = true;
  int threads = 1;
};

namespace detail {

/// Recursion core shared by the exact detector: explores biconnected
/// subgraphs, records (node set, kappa) pairs, and splits on every minimum
/// cutset with the cut nodes kept on both sides.
inline void explore_exact(const Graph& g, std::vector<int> start,
                          std::vector<std::pair<std::vector<int>, int>>& found) {
  std::set<std::vector<int>> visited;
  std::vector<std::vector<int>> stack{std::move(start)};
  while (!stack.empty()) {
    std::vector<int> s = std::move(stack.back());
    stack.pop_back();
    if (s.size() < 3 || !visited.insert(s).second) continue;
    const Graph gs = g.induced(s);
    const auto blocks = biconnected_components(gs).node_components();
    if (blocks.size() != 1 || blocks.front().size() != s.size()) {
      for (const auto& b : blocks)
        if (b.size() >= 3) stack.push_back(b);
      continue;
    }
    const int kappa = node_connectivity(gs);
    found.emplace_back(s, kappa);
    if (kappa == static_cast<int>(s.size()) - 1) continue;  // complete
    for (const auto& cut : detail::all_min_cutsets_known(gs, kappa)) {
      std::vector<int> rest;
      for (int v : s)
        if (!std::binary_search(cut.begin(), cut.end(), v)) rest.push_back(v);
      for (const auto& part : connected_components(gs.induced(rest))) {
        std::vector<int> child;
        child.reserve(part.size() + cut.size());
        std::merge(part.begin(), part.end(), cut.begin(), cut.end(),
                   std::back_inserter(child));
        if (child.size() >= s.size()) continue;
        // Descendants can only contribute components of level >= kappa+1.
        // Those have internal minimum degree >= kappa+1, so they survive
        // (kappa+1)-core peeling of the child; pruning to that core keeps
        // the recursion from re-walking structure that cannot host them.
        auto pruned = k_core_nodes(gs.induced(child), kappa + 1);
        // A deeper component needs level >= kappa+1, hence > kappa+1 nodes.
        if (pruned.size() >= static_cast<std::size_t>(kappa) + 2)
          stack.push_back(std::move(pruned));
      }
    }
  }
}

inline std::optional<double> exact_average(const Graph& g,
                                           const std::vector<int>& nodes,
                                           const ExactOptions& opt) {
  if (!opt.compute_average) return std::nullopt;
  return average_node_connectivity(g.induced(nodes), Estimator::exact_flow,
                                   nullptr, opt.threads)
      .value();
}

/// Keeps only sets not contained in another set of the same collection.
inline std::vector<std::vector<int>> maximal_sets(
    std::vector<std::vector<int>> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::stable_sort(sets.begin(), sets.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<std::vector<int>> kept;
  for (auto& s : sets) {
    bool covered = false;
    for (const auto& big : kept)
      if (std::includes(big.begin(), big.end(), s.begin(), s.end())) {
        covered = true;
        break;
      }
    if (!covered) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

inline DetectionResult assemble_exact(
    const Graph& g, DetectionMethod method,
    const std::vector<std::pair<std::vector<int>, int>>& found,
    const ExactOptions& opt) {
  LevelBuilder builder;
  builder.method = method;
  for (auto& comp : connected_components(g))
    if (comp.size() > 1) builder.add(1, std::move(comp), 1.0);
  int max_kappa = 0;
  for (const auto& [nodes, kappa] : found) max_kappa = std::max(max_kappa, kappa);
  for (int k = 2; k <= max_kappa; ++k) {
    std::vector<std::vector<int>> level_sets;
    for (const auto& [nodes, kappa] : found)
      if (kappa >= k && nodes.size() > static_cast<std::size_t>(k))
        level_sets.push_back(nodes);
    for (auto& nodes : maximal_sets(std::move(level_sets))) {
      std::optional<double> avg =
          k == 2 ? std::optional<double>(2.0) : exact_average(g, nodes, opt);
      builder.add(k, std::move(nodes), avg);
    }
  }
  DetectionResult result;
  result.method = method;
  result.levels = builder.finish();
  result.k_numbers = k_number_map(g, result.levels);
  return result;
}

}  // namespace detail

/// Exact k-component hierarchy by recursive minimum-cutset removal: compute
/// kappa of the current biconnected subgraph, enumerate all minimum cutsets,
/// split with cut nodes kept on both sides, and recurse until complete or
/// trivial. Maximal node sets are aggregated per level at the end. Practical
/// at desk scale only.
inline DetectionResult k_components_exact(const Graph& g,
                                          const ExactOptions& opt = {}) {
  std::vector<std::pair<std::vector<int>, int>> found;
  for (const auto& comp : connected_components(g)) {
    if (comp.size() < 3) continue;
    for (const auto& block : biconnected_components(g.induced(comp)).node_components())
      if (block.size() >= 3) detail::explore_exact(g, block, found);
  }
  return detail::assemble_exact(g, DetectionMethod::moody_white, found, opt);
}

/// Definitional oracle: enumerates every connected induced subgraph, computes
/// its exact connectivity, and keeps the maximal sets per level. Refused
/// above 14 nodes.
inline DetectionResult k_components_bruteforce(const Graph& g,
                                               const ExactOptions& opt = {}) {
  const std::size_t n = g.node_count();
  if (n > 14)
    throw std::invalid_argument("brute-force detector is limited to 14 nodes, got " +
                                std::to_string(n));
  const std::vector<int>& ids = g.nodes();
  std::vector<std::pair<std::vector<int>, int>> found;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) < 3) continue;
    std::vector<int> nodes;
    for (std::size_t s = 0; s < n; ++s)
      if (mask & (1u << s)) nodes.push_back(ids[s]);
    const Graph sub = g.induced(nodes);
    if (connected_components(sub).size() != 1) continue;
    found.emplace_back(std::move(nodes), node_connectivity(sub));
  }
  return detail::assemble_exact(g, DetectionMethod::brute_force, found, opt);
}

/// Accuracy check of detected components: actual connectivity of each
/// component's induced subgraph, with the true sub-structure attached when
/// the claim fails.
struct VerificationRecord {
  int id = -1;
  int claimed_k = 0;
  int actual_kappa = 0;
  bool confirmed = false;
  std::vector<KComponent> refinement;  // true components at the claimed level
};

struct VerificationReport {
  std::vector<VerificationRecord> records;

  double confirmed_fraction() const {
    if (records.empty()) return 1.0;
    std::size_t ok = 0;
    for (const auto& r : records) ok += r.confirmed ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(records.size());
  }
};

inline VerificationReport verify_components(const Graph& g, const LevelMap& detected,
                                            int min_level = 1) {
  VerificationReport report;
  for (const auto& [k, comps] : detected) {
    if (k < min_level) continue;
    for (const auto& comp : comps) {
      VerificationRecord rec;
      rec.id = comp.id;
      rec.claimed_k = k;
      const Graph sub = g.induced(comp.nodes);
      rec.actual_kappa = node_connectivity(sub);
      rec.confirmed = rec.actual_kappa >= k;
      if (!rec.confirmed) {
        ExactOptions opt;
        opt.compute_average = false;
        const auto exact = k_components_exact(sub, opt);
        auto it = exact.levels.find(k);
        if (it != exact.levels.end()) rec.refinement = it->second;
      }
      report.records.push_back(std::move(rec));
    }
  }
  return report;
}

}  // namespace kcohesion
