#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kcohesion/complement.hpp"
#include "kcohesion/connectivity.hpp"
#include "kcohesion/csr.hpp"
#include "kcohesion/decomposition.hpp"
#include "kcohesion/graph.hpp"

namespace kcohesion {

enum class DetectionMethod { heuristic_approx, heuristic_exact_flow, moody_white, brute_force };

inline const char* to_string(DetectionMethod m) {
  switch (m) {
    case DetectionMethod::heuristic_approx: return "heuristic-approx";
    case DetectionMethod::heuristic_exact_flow: return "heuristic-exact-flow";
    case DetectionMethod::moody_white: return "moody-white";
    case DetectionMethod::brute_force: return "brute-force";
  }
  return "?";
}

/// One detected k-component: a node set claimed to be k-connected, with more
/// than k nodes by construction.
struct KComponent {
  int id = -1;
  int k = 0;
  std::vector<int> nodes;  // sorted ascending
  std::optional<double> average_connectivity;
  DetectionMethod method = DetectionMethod::heuristic_approx;
};

using LevelMap = std::map<int, std::vector<KComponent>>;

/// Per-node component number (largest k of a containing component) and the
/// average connectivity of the deepest containing component.
struct KNumberMap {
  std::vector<int> ids;  // ascending, all nodes of the analyzed graph
  std::vector<int> k;
  std::vector<double> average_k;

  std::size_t index_of(int v) const {
    return static_cast<std::size_t>(
        std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
  }
  int k_of(int v) const { return k[index_of(v)]; }
  double average_of(int v) const { return average_k[index_of(v)]; }
};

struct DetectionResult {
  LevelMap levels;
  KNumberMap k_numbers;
  DetectionMethod method = DetectionMethod::heuristic_approx;
};

enum class Relaxation { density, degree_spread };

struct HeuristicOptions {
  Estimator estimator = Estimator::approx;
  Relaxation relaxation = Relaxation::density;
  double min_density = 0.95;
  int degree_spread = 2;  // used by the degree-spread criterion only
  bool compute_average = true;
  CachePolicy cache_policy = CachePolicy::store;
  bool rebuild_auxiliary = false;
  int threads = 1;
};

namespace detail {

inline std::uint64_t pair_key(int u, int v) {
  const auto lo = static_cast<std::uint64_t>(std::min(u, v));
  const auto hi = static_cast<std::uint64_t>(std::max(u, v));
  return (hi << 32) | lo;
}

/// Auxiliary graph built from one pass over all node pairs of sg: (u, v) is
/// an H-edge iff the estimated kappa(u, v) >= k, held as a complement view.
/// Optionally keeps the pair values for average-connectivity reuse. The pair
/// space is split into contiguous chunks across workers; each value depends
/// only on sg, so the result is identical for any thread count.
struct PairScan {
  ComplementView h;
  std::unordered_map<std::uint64_t, int> values;  // id-pair key; may be empty
};

inline PairScan scan_pairs(const Graph& sg, int k, Estimator estimator,
                           bool keep_values, int threads) {
  const auto& ids = sg.nodes();
  const std::size_t n = ids.size();
  PairScan result{ComplementView(ids), {}};
  if (n < 2) return result;
  const std::size_t total = n * (n - 1) / 2;
  std::vector<std::size_t> row_start(n + 1, 0);  // pairs with first slot < i
  for (std::size_t i = 0; i < n; ++i) row_start[i + 1] = row_start[i] + (n - 1 - i);

  // Full values are only needed when they will be reused; otherwise the
  // estimator can stop at k paths, which does not change the H edges.
  const int cutoff = keep_values ? std::numeric_limits<int>::max() : k;
  std::vector<int> values;
  if (keep_values) values.resize(total);
  const std::size_t workers =
      threads <= 1 ? 1 : std::min(static_cast<std::size_t>(threads), total);
  std::vector<std::vector<std::pair<int, int>>> absent(workers);
  const CsrGraph csr = CsrGraph::from(sg);

  parallel_for(workers, static_cast<int>(workers), [&](std::size_t w) {
    const std::size_t begin = total * w / workers;
    const std::size_t end = total * (w + 1) / workers;
    if (begin >= end) return;
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(row_start.begin(), row_start.end(), begin) -
        row_start.begin() - 1);
    std::size_t j = i + 1 + (begin - row_start[i]);
    WnWorkspace wn(static_cast<int>(n));
    for (std::size_t p = begin; p < end; ++p) {
      int kappa;
      if (estimator == Estimator::approx) {
        // When only the >= k decision matters, adjacency plus common
        // neighbors certifies it without a search: the marking estimator
        // finds the direct edge and one length-2 path per common neighbor
        // before anything else, so its cutoff answer is already known.
        if (!keep_values &&
            certified_paths(csr, static_cast<int>(i), static_cast<int>(j), k) >= k)
          kappa = k;
        else
          kappa = wn.count(csr, static_cast<int>(i), static_cast<int>(j), cutoff);
      } else {
        kappa = local_node_connectivity_exact(sg, ids[i], ids[j], cutoff);
      }
      if (kappa < k) absent[w].emplace_back(ids[i], ids[j]);
      if (keep_values) values[p] = kappa;
      if (++j == n) {
        ++i;
        j = i + 1;
      }
    }
  });
  for (const auto& chunk : absent)
    for (const auto& [u, v] : chunk) result.h.add_absent_edge(u, v);
  if (keep_values) {
    result.values.reserve(total * 2);
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        result.values.emplace(pair_key(ids[i], ids[j]), values[p++]);
  }
  return result;
}

inline bool uniform_core(const CoreNumbers& cn) {
  for (int c : cn.core)
    if (c != cn.core.front()) return false;
  return true;
}

inline bool is_complete(const ComplementView& hc) {
  const auto n = hc.node_count();
  return count_edges(hc) == n * (n - 1) / 2;
}

inline bool relaxation_ok(const ComplementView& hc, const HeuristicOptions& opt) {
  if (opt.relaxation == Relaxation::density) return density(hc) >= opt.min_density;
  int lo = std::numeric_limits<int>::max(), hi = 0;
  for (int v : hc.nodes()) {
    lo = std::min(lo, hc.degree(v));
    hi = std::max(hi, hc.degree(v));
  }
  return hi - lo <= opt.degree_spread;
}

/// Candidate extraction inside one biconnected component of the auxiliary
/// graph: walk core values downward, take the nodes with exactly that core
/// number (plus small fully-connected overlaps, skipped for the first,
/// largest value), accept cliques outright and otherwise prune minimum-degree
/// nodes, re-coring against the original graph, until the relaxation
/// criterion holds or nothing is left. Returns the biconnected pieces of the
/// accepted candidates mapped back to sg, each with more than k nodes.
inline std::vector<std::vector<int>> candidate_components(
    const ComplementView& hs, const Graph& sg, int k, const HeuristicOptions& opt) {
  std::vector<std::vector<int>> found;
  const CoreNumbers h_core = core_numbers(hs);
  std::vector<int> c_values = h_core.core;
  std::sort(c_values.begin(), c_values.end(), std::greater<int>());
  c_values.erase(std::unique(c_values.begin(), c_values.end()), c_values.end());

  bool first = true;
  for (int c_value : c_values) {
    std::vector<int> cands;
    for (std::size_t s = 0; s < h_core.ids.size(); ++s)
      if (h_core.core[s] == c_value) cands.push_back(h_core.ids[s]);

    std::vector<int> hc_nodes = cands;
    if (first) {
      first = false;  // no overlap check for the biggest candidate
    } else {
      std::vector<int> overlap;
      for (int x : hs.nodes()) {
        if (std::binary_search(cands.begin(), cands.end(), x)) continue;
        bool adjacent_to_all = true;
        for (int c : cands)
          if (!hs.has_edge(x, c)) {
            adjacent_to_all = false;
            break;
          }
        if (adjacent_to_all) overlap.push_back(x);
      }
      // Overlaps of size >= k would fuse distinct k-components; keep them out.
      if (!overlap.empty() && static_cast<int>(overlap.size()) < k) {
        hc_nodes.insert(hc_nodes.end(), overlap.begin(), overlap.end());
        std::sort(hc_nodes.begin(), hc_nodes.end());
      }
    }
    if (hc_nodes.size() <= static_cast<std::size_t>(k)) continue;

    ComplementView hc = hs.induced(hc_nodes);
    Graph gc;
    if (uniform_core(core_numbers(hc)) && is_complete(hc)) {
      gc = k_core(sg.induced(hc.nodes()), k);
      if (gc.node_count() == 0) continue;
    } else {
      bool accepted = false;
      while (hc.node_count() > 0) {
        gc = k_core(sg.induced(hc.nodes()), k);
        if (gc.node_count() == 0) break;
        hc = hs.induced(gc.nodes());
        const CoreNumbers hc_core = core_numbers(hc);
        if (uniform_core(hc_core) && relaxation_ok(hc, opt)) {
          accepted = true;
          break;
        }
        int min_deg = std::numeric_limits<int>::max();
        for (int v : hc.nodes()) min_deg = std::min(min_deg, hc.degree(v));
        std::vector<int> remaining;
        for (int v : hc.nodes())
          if (hc.degree(v) != min_deg) remaining.push_back(v);
        hc = hs.induced(remaining);
      }
      if (!accepted) continue;
    }
    if (gc.node_count() <= static_cast<std::size_t>(k)) continue;

    for (const auto& piece : biconnected_components(gc).node_components()) {
      if (piece.size() <= static_cast<std::size_t>(k)) continue;
      const Graph gk = k_core(sg.induced(piece), k);
      if (gk.node_count() > static_cast<std::size_t>(k))
        found.push_back(gk.nodes());
    }
  }
  return found;
}

}  // namespace detail

/// Auxiliary graph H over one bicomponent of a k-core: nodes of `subgraph`,
/// edge iff estimated kappa(u, v) >= k, held as a complement view.
inline ComplementView build_auxiliary_graph(const Graph& subgraph, int k,
                                            Estimator estimator, int threads = 1) {
  return detail::scan_pairs(subgraph, k, estimator, false, threads).h;
}

/// Candidate node sets extracted from one biconnected component of H,
/// checked and re-cored against `sg`.
inline std::vector<std::vector<int>> extract_candidates(
    const ComplementView& h_bicomponent, const Graph& sg, int k,
    const HeuristicOptions& opt) {
  return detail::candidate_components(h_bicomponent, sg, k, opt);
}

namespace detail {

struct LevelBuilder {
  LevelMap levels;
  DetectionMethod method;

  void add(int k, std::vector<int> nodes, std::optional<double> avg) {
    KComponent comp;
    comp.k = k;
    comp.nodes = std::move(nodes);
    comp.average_connectivity = avg;
    comp.method = method;
    levels[k].push_back(std::move(comp));
  }

  LevelMap finish() {
    int next_id = 0;
    for (auto& [k, comps] : levels) {
      std::sort(comps.begin(), comps.end(),
                [](const KComponent& a, const KComponent& b) {
                  return a.nodes < b.nodes;
                });
      for (auto& c : comps) c.id = next_id++;
    }
    return std::move(levels);
  }
};

inline std::optional<double> average_from_values(
    const std::vector<int>& nodes,
    const std::unordered_map<std::uint64_t, int>& kappa) {
  std::int64_t sum = 0, count = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      sum += kappa.at(pair_key(nodes[i], nodes[j]));
      ++count;
    }
  if (count == 0) return std::nullopt;
  return static_cast<double>(sum) / static_cast<double>(count);
}

}  // namespace detail

/// Per-node component numbers from detected levels: the largest containing
/// level, with the average connectivity of the deepest containing component
/// (the larger average when two deepest overlap on the node). Nodes outside
/// every component keep (0, 0); level-1 membership gives (1, 1).
inline KNumberMap k_number_map(const Graph& g, const LevelMap& levels) {
  KNumberMap map;
  map.ids = g.nodes();
  map.k.assign(map.ids.size(), 0);
  map.average_k.assign(map.ids.size(), 0.0);
  for (const auto& [k, comps] : levels) {
    for (const auto& comp : comps) {
      const double avg = comp.average_connectivity.value_or(static_cast<double>(k));
      for (int v : comp.nodes) {
        const auto i = map.index_of(v);
        if (k > map.k[i]) {
          map.k[i] = k;
          map.average_k[i] = avg;
        } else if (k == map.k[i]) {
          map.average_k[i] = std::max(map.average_k[i], avg);
        }
      }
    }
  }
  return map;
}

/// Heuristic k-component detection: exact connected components at level 1 and
/// biconnected components at level 2, then for each k up to the maximum core
/// number, extra-cohesive block extraction through the auxiliary graph of
/// every biconnected part of the k-core. Average connectivity reuses the
/// pairwise values from the auxiliary-graph stage when the cache policy is
/// `store`, and recomputes them inside each component when it is `recompute`.
inline DetectionResult k_components_heuristic(const Graph& g,
                                              const HeuristicOptions& opt = {}) {
  detail::LevelBuilder builder;
  builder.method = opt.estimator == Estimator::exact_flow
                       ? DetectionMethod::heuristic_exact_flow
                       : DetectionMethod::heuristic_approx;

  for (auto& comp : connected_components(g))
    if (comp.size() > 1) builder.add(1, std::move(comp), 1.0);
  for (auto& comp : biconnected_components(g).node_components())
    if (comp.size() > 2) builder.add(2, std::move(comp), 2.0);

  const CoreNumbers cores = core_numbers(g);
  const int max_core = cores.max_core();
  for (int k = 3; k <= max_core; ++k) {
    const Graph c = k_core_subgraph(g, k, cores);
    for (const auto& bicomp : biconnected_components(c).node_components()) {
      if (bicomp.size() < static_cast<std::size_t>(k)) continue;
      const Graph sg = g.induced(bicomp);
      const bool store = opt.cache_policy == CachePolicy::store;
      const bool keep_values = store && opt.compute_average;
      const auto scan = detail::scan_pairs(sg, k, opt.estimator, keep_values,
                                           opt.threads);
      const ComplementView& h = scan.h;

      std::vector<std::vector<int>> detected;
      for (const auto& h_nodes : biconnected_components(h).node_components()) {
        if (h_nodes.size() <= static_cast<std::size_t>(k)) continue;
        const ComplementView hs = h.induced(h_nodes);
        for (auto& comp : detail::candidate_components(hs, sg, k, opt))
          detected.push_back(std::move(comp));
      }

      if (opt.rebuild_auxiliary) {
        // Accuracy variant: rebuild H from pairwise connectivity inside each
        // candidate and rerun the extraction until the node set is stable.
        std::vector<std::vector<int>> stable;
        std::vector<std::vector<int>> queue = std::move(detected);
        while (!queue.empty()) {
          std::vector<int> cand = std::move(queue.back());
          queue.pop_back();
          const Graph inner = g.induced(cand);
          const ComplementView rebuilt =
              detail::scan_pairs(inner, k, opt.estimator, false, opt.threads).h;
          std::vector<std::vector<int>> refined;
          for (const auto& h_nodes :
               biconnected_components(rebuilt).node_components()) {
            if (h_nodes.size() <= static_cast<std::size_t>(k)) continue;
            for (auto& piece : detail::candidate_components(
                     rebuilt.induced(h_nodes), inner, k, opt))
              refined.push_back(std::move(piece));
          }
          bool self_stable = false;
          for (auto& piece : refined) {
            if (piece == cand)
              self_stable = true;  // strict subsets go back for another pass
            else
              queue.push_back(std::move(piece));
          }
          if (self_stable) stable.push_back(std::move(cand));
        }
        std::sort(stable.begin(), stable.end());
        stable.erase(std::unique(stable.begin(), stable.end()), stable.end());
        detected = std::move(stable);
      }

      for (auto& comp : detected) {
        std::optional<double> avg;
        if (opt.compute_average) {
          if (keep_values && !opt.rebuild_auxiliary) {
            avg = detail::average_from_values(comp, scan.values);
          } else {
            const auto a = average_node_connectivity(
                g.induced(comp), opt.estimator, nullptr, opt.threads);
            avg = a.value();
          }
        }
        builder.add(k, std::move(comp), avg);
      }
    }
  }

  DetectionResult result;
  result.method = builder.method;
  result.levels = builder.finish();
  result.k_numbers = k_number_map(g, result.levels);
  return result;
}

/// Nesting forest of detected components. The parent of a component is the
/// smallest component of strictly lower level that contains it (deepest
/// level first); a component at level k+1 with no containing k-level
/// component is recorded as a structure warning, which can happen under the
/// approximate estimator.
struct CohesiveBlockTree {
  std::vector<KComponent> components;  // indexed by component id
  std::vector<int> parent;             // -1 for roots
  std::vector<std::string> warnings;
};

inline CohesiveBlockTree build_block_tree(const LevelMap& levels) {
  CohesiveBlockTree tree;
  for (const auto& [k, comps] : levels)
    for (const auto& c : comps) tree.components.push_back(c);
  std::sort(tree.components.begin(), tree.components.end(),
            [](const KComponent& a, const KComponent& b) { return a.id < b.id; });
  tree.parent.assign(tree.components.size(), -1);

  auto contains = [](const std::vector<int>& outer, const std::vector<int>& inner) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
  };
  for (std::size_t i = 0; i < tree.components.size(); ++i) {
    const auto& c = tree.components[i];
    if (c.k <= 1) continue;
    int best = -1;
    for (std::size_t j = 0; j < tree.components.size(); ++j) {
      const auto& p = tree.components[j];
      if (p.k >= c.k || !contains(p.nodes, c.nodes)) continue;
      if (best == -1) {
        best = static_cast<int>(j);
        continue;
      }
      const auto& b = tree.components[static_cast<std::size_t>(best)];
      if (p.k > b.k || (p.k == b.k && p.nodes.size() < b.nodes.size()))
        best = static_cast<int>(j);
    }
    tree.parent[i] = best;
    const int want = c.k - 1;
    const bool direct = best != -1 &&
                        tree.components[static_cast<std::size_t>(best)].k == want;
    if (!direct)
      tree.warnings.push_back("component " + std::to_string(c.id) + " (k=" +
                              std::to_string(c.k) + ", order " +
                              std::to_string(c.nodes.size()) +
                              ") is not contained in any component of level " +
                              std::to_string(want));
  }
  return tree;
}

}  // namespace kcohesion
