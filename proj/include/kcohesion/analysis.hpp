#pragma once

#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kcohesion/exact.hpp"
#include "kcohesion/generators.hpp"
#include "kcohesion/graph.hpp"
#include "kcohesion/kcomponents.hpp"
#include "kcohesion/parallel.hpp"
#include "kcohesion/rng.hpp"

namespace kcohesion {

/// Dispatch over the four detectors with one option bundle.
struct DetectorConfig {
  DetectionMethod method = DetectionMethod::heuristic_approx;
  HeuristicOptions heuristic;
};

inline DetectionResult detect(const Graph& g, const DetectorConfig& config) {
  switch (config.method) {
    case DetectionMethod::heuristic_approx:
    case DetectionMethod::heuristic_exact_flow: {
      HeuristicOptions opt = config.heuristic;
      opt.estimator = config.method == DetectionMethod::heuristic_exact_flow
                          ? Estimator::exact_flow
                          : Estimator::approx;
      return k_components_heuristic(g, opt);
    }
    case DetectionMethod::moody_white: {
      ExactOptions opt;
      opt.compute_average = config.heuristic.compute_average;
      opt.threads = config.heuristic.threads;
      return k_components_exact(g, opt);
    }
    case DetectionMethod::brute_force: {
      ExactOptions opt;
      opt.compute_average = config.heuristic.compute_average;
      opt.threads = config.heuristic.threads;
      return k_components_bruteforce(g, opt);
    }
  }
  throw std::logic_error("unknown detection method");
}

// --- k-number frequencies against the configuration null model -----------

struct FrequencyTable {
  std::map<int, std::size_t> actual;                    // k -> node count
  std::map<int, std::pair<double, double>> null_stats;  // k -> (mean, std)
  int replicates = 0;
  std::vector<double> removed_edge_fraction;  // per replicate, of stub edges
};

struct FrequencyOptions {
  int replicates = 64;
  std::uint64_t seed = 0;
  /// When >= 0, run exactly this replicate index (same derived seed as in a
  /// full run), so any replicate is reproducible in isolation.
  int only_replicate = -1;
  bool project = false;  // analyze the one-mode projection of each network
  Part projection_side = Part::a;
  DetectorConfig detector;
  int threads = 1;  // replicates run in parallel with derived seeds
};

namespace detail {

inline std::map<int, std::size_t> knumber_counts(const KNumberMap& kn) {
  std::map<int, std::size_t> counts;
  for (int k : kn.k)
    if (k >= 1) ++counts[k];
  return counts;
}

}  // namespace detail

/// Detector frequencies on g and on seeded configuration-model replicates.
/// Replicate i uses a seed derived from (seed, i), so any replicate can be
/// reproduced in isolation and results are identical for any thread count.
/// For one-mode analysis the null networks are generated as bipartite graphs
/// and projected before detection.
inline FrequencyTable knumber_frequencies(const Graph& g,
                                          const FrequencyOptions& opt) {
  if (opt.replicates < 0) throw std::invalid_argument("replicates must be >= 0");
  if ((opt.replicates > 0 || opt.only_replicate >= 0) && !g.has_parts())
    throw std::invalid_argument("the null model requires a bipartite graph");

  FrequencyTable table;
  table.replicates = opt.only_replicate >= 0 ? 1 : opt.replicates;
  const Graph actual_target =
      opt.project ? one_mode_projection(g, opt.projection_side) : g;
  table.actual = detail::knumber_counts(detect(actual_target, opt.detector).k_numbers);

  const bool single = opt.only_replicate >= 0;
  const auto r = single ? std::size_t{1} : static_cast<std::size_t>(opt.replicates);
  std::vector<std::map<int, std::size_t>> counts(r);
  std::vector<double> removed(r, 0.0);
  parallel_for(r, opt.threads, [&](std::size_t i) {
    const auto index = single ? static_cast<std::size_t>(opt.only_replicate) : i;
    auto null_model = bipartite_configuration_null(g, Rng::derive(opt.seed, index));
    removed[i] = g.edge_count() == 0
                     ? 0.0
                     : static_cast<double>(null_model.duplicate_edges_removed) /
                           static_cast<double>(g.edge_count());
    const Graph target = opt.project
                             ? one_mode_projection(null_model.graph, opt.projection_side)
                             : null_model.graph;
    counts[i] = detail::knumber_counts(detect(target, opt.detector).k_numbers);
  });
  table.removed_edge_fraction = std::move(removed);
  if (r == 0) return table;

  // Mean and population standard deviation per level; a level absent from a
  // replicate counts as zero there.
  std::vector<int> levels_seen;
  for (const auto& c : counts)
    for (const auto& [k, count] : c) levels_seen.push_back(k);
  std::sort(levels_seen.begin(), levels_seen.end());
  levels_seen.erase(std::unique(levels_seen.begin(), levels_seen.end()),
                    levels_seen.end());
  for (int k : levels_seen) {
    std::vector<double> values;
    values.reserve(r);
    for (const auto& c : counts) {
      auto it = c.find(k);
      values.push_back(it == c.end() ? 0.0 : static_cast<double>(it->second));
    }
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    table.null_stats[k] = {mean, std::sqrt(var)};
  }
  return table;
}

// --- block-tree export ----------------------------------------------------

struct ExportFilters {
  /// Presentation thresholds used by the tree figures: drop 1-components
  /// with < 20 nodes, 2-components with < 15, tricomponents with < 10.
  bool paper_filters = false;
  bool with_members = false;  // JSON only
};

namespace detail {

inline bool filtered_out(const KComponent& c, const ExportFilters& f) {
  if (!f.paper_filters) return false;
  if (c.k == 1) return c.nodes.size() < 20;
  if (c.k == 2) return c.nodes.size() < 15;
  if (c.k == 3) return c.nodes.size() < 10;
  return false;
}

/// Parent in the filtered tree: nearest kept ancestor.
inline std::vector<int> effective_parents(const CohesiveBlockTree& tree,
                                          const std::vector<char>& kept) {
  std::vector<int> parent(tree.components.size(), -1);
  for (std::size_t i = 0; i < tree.components.size(); ++i) {
    int p = tree.parent[i];
    while (p != -1 && !kept[static_cast<std::size_t>(p)])
      p = tree.parent[static_cast<std::size_t>(p)];
    parent[i] = p;
  }
  return parent;
}

inline std::string format_avg(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace detail

/// DOT serialization: one node per component labelled with level, order and
/// average connectivity (3 decimals); edges point from parent to child.
inline std::string export_block_tree_dot(const CohesiveBlockTree& tree,
                                         const ExportFilters& filters = {}) {
  std::vector<char> kept(tree.components.size(), 1);
  for (std::size_t i = 0; i < tree.components.size(); ++i)
    kept[i] = detail::filtered_out(tree.components[i], filters) ? 0 : 1;
  const auto parent = detail::effective_parents(tree, kept);
  std::ostringstream out;
  out << "digraph cohesive_blocks {\n";
  for (std::size_t i = 0; i < tree.components.size(); ++i) {
    if (!kept[i]) continue;
    const auto& c = tree.components[i];
    char label[96];
    if (c.average_connectivity)
      std::snprintf(label, sizeof label, "k=%d n=%zu avg=%.3f", c.k,
                    c.nodes.size(), *c.average_connectivity);
    else
      std::snprintf(label, sizeof label, "k=%d n=%zu", c.k, c.nodes.size());
    out << "  c" << c.id << " [label=\"" << label << "\"];\n";
  }
  for (std::size_t i = 0; i < tree.components.size(); ++i) {
    if (!kept[i] || parent[i] == -1) continue;
    out << "  c" << tree.components[static_cast<std::size_t>(parent[i])].id
        << " -> c" << tree.components[i].id << ";\n";
  }
  out << "}\n";
  return out.str();
}

/// JSON serialization: an array of {id, k, order, avg_connectivity, parent},
/// plus the member node list (as labels) when `with_members` is set.
inline std::string export_block_tree_json(
    const CohesiveBlockTree& tree, const ExportFilters& filters = {},
    const std::vector<std::string>* labels = nullptr) {
  std::vector<char> kept(tree.components.size(), 1);
  for (std::size_t i = 0; i < tree.components.size(); ++i)
    kept[i] = detail::filtered_out(tree.components[i], filters) ? 0 : 1;
  const auto parent = detail::effective_parents(tree, kept);
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < tree.components.size(); ++i) {
    if (!kept[i]) continue;
    const auto& c = tree.components[i];
    nlohmann::json item;
    item["id"] = c.id;
    item["k"] = c.k;
    item["order"] = c.nodes.size();
    if (c.average_connectivity)
      item["avg_connectivity"] = *c.average_connectivity;
    else
      item["avg_connectivity"] = nullptr;
    if (parent[i] == -1)
      item["parent"] = nullptr;
    else
      item["parent"] = tree.components[static_cast<std::size_t>(parent[i])].id;
    if (filters.with_members) {
      nlohmann::json members = nlohmann::json::array();
      for (int v : c.nodes) {
        if (labels != nullptr)
          members.push_back((*labels)[static_cast<std::size_t>(v)]);
        else
          members.push_back(std::to_string(v));
      }
      item["nodes"] = std::move(members);
    }
    out.push_back(std::move(item));
  }
  return out.dump(2) + "\n";
}

// --- Kamada-Kawai layout ---------------------------------------------------

struct LayoutPoint {
  int node = 0;
  double x = 0;
  double y = 0;
  double z = 0;  // average component number, copied verbatim
};

namespace detail {

/// Localized stress minimization over ideal springs between every node pair,
/// with spring lengths equal to geodesic distances. Each sweep updates the
/// points one at a time (which never increases the stress); iteration stops
/// on a relative stress change below 1e-6 or after 1000 sweeps.
inline void kamada_kawai_component(const Graph& g, const std::vector<int>& comp,
                                   Rng& rng, std::vector<double>& xs,
                                   std::vector<double>& ys) {
  const std::size_t n = comp.size();
  xs.assign(n, 0);
  ys.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.uniform_real() * static_cast<double>(n);
    ys[i] = rng.uniform_real() * static_cast<double>(n);
  }
  if (n < 2) return;

  // All-pairs geodesic distances by one BFS per node.
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, 0));
  std::unordered_map<int, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(comp[i], i);
  std::vector<int> queue;
  for (std::size_t s = 0; s < n; ++s) {
    auto& row = dist[s];
    std::vector<char> seen(n, 0);
    queue.clear();
    queue.push_back(comp[s]);
    seen[s] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int v = queue[qi];
      const std::size_t vi = index.at(v);
      for (int u : g.neighbors(v)) {
        auto it = index.find(u);
        if (it == index.end() || seen[it->second]) continue;
        seen[it->second] = 1;
        row[it->second] = row[vi] + 1;
        queue.push_back(u);
      }
    }
  }

  auto stress = [&] {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = static_cast<double>(dist[i][j]);
        const double w = 1.0 / (d * d);
        const double dx = xs[i] - xs[j];
        const double dy = ys[i] - ys[j];
        const double delta = std::sqrt(dx * dx + dy * dy) - d;
        s += w * delta * delta;
      }
    return s;
  };

  double previous = stress();
  for (int sweep = 0; sweep < 1000; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      double wx = 0, wy = 0, wsum = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = static_cast<double>(dist[i][j]);
        const double w = 1.0 / (d * d);
        double dx = xs[i] - xs[j];
        double dy = ys[i] - ys[j];
        double len = std::sqrt(dx * dx + dy * dy);
        if (len < 1e-12) {  // coincident points: push along a fixed direction
          dx = 1.0;
          dy = 0.0;
          len = 1.0;
        }
        wx += w * (xs[j] + d * dx / len);
        wy += w * (ys[j] + d * dy / len);
        wsum += w;
      }
      xs[i] = wx / wsum;
      ys[i] = wy / wsum;
    }
    const double current = stress();
    if (previous - current < 1e-6 * std::max(previous, 1e-12)) break;
    previous = current;
  }
}

}  // namespace detail

/// Seeded Kamada-Kawai scatter: x, y from stress minimization (per connected
/// component, components offset horizontally), z copied from the k-number
/// map's average field.
inline std::vector<LayoutPoint> layout_scatter(const Graph& g,
                                               const KNumberMap& knumbers,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LayoutPoint> points;
  points.reserve(g.node_count());
  double cursor = 0;
  for (const auto& comp : connected_components(g)) {
    std::vector<double> xs, ys;
    detail::kamada_kawai_component(g, comp, rng, xs, ys);
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      lo = std::min(lo, xs[i]);
      hi = std::max(hi, xs[i]);
    }
    for (std::size_t i = 0; i < comp.size(); ++i) {
      LayoutPoint p;
      p.node = comp[i];
      p.x = xs[i] - lo + cursor;
      p.y = ys[i];
      p.z = knumbers.average_of(comp[i]);
      points.push_back(p);
    }
    cursor += (hi - lo) + 1.0;
  }
  std::sort(points.begin(), points.end(),
            [](const LayoutPoint& a, const LayoutPoint& b) { return a.node < b.node; });
  return points;
}

// --- benchmark harness ------------------------------------------------------

struct BenchmarkCell {
  std::string generator;  // "er" | "powerlaw" | "appendix-a"
  int n = 0;
  double avg_degree = 6.0;
  double alpha = 2.0;
  std::uint64_t seed = 0;
  DetectionMethod method = DetectionMethod::heuristic_approx;
  double timeout_seconds = 600.0;
};

struct BenchmarkRecord {
  std::string generator;
  std::size_t n = 0;
  std::size_t m = 0;
  DetectionMethod method = DetectionMethod::heuristic_approx;
  double wall_seconds = 0;
  std::string status;  // "ok" or "timeout"
  std::map<int, std::size_t> level_histogram;
};

namespace detail {

inline Graph build_benchmark_graph(const BenchmarkCell& cell) {
  if (cell.generator == "er") return erdos_renyi(cell.n, cell.avg_degree, cell.seed);
  if (cell.generator == "powerlaw")
    return powerlaw_configuration(cell.n, cell.alpha, cell.seed);
  if (cell.generator == "appendix-a") return appendix_a_fixture();
  throw std::invalid_argument("unknown benchmark generator: " + cell.generator);
}

}  // namespace detail

/// Times one detector run per cell, each in a forked child so a per-cell
/// timeout can kill a runaway computation without stopping the plan. The
/// benchmark measures plain structure detection (averages off), matching the
/// way the exact algorithm is measured.
inline std::vector<BenchmarkRecord> run_benchmark(std::span<const BenchmarkCell> plan,
                                                  int threads = 1) {
  std::vector<BenchmarkRecord> records;
  for (const auto& cell : plan) {
    BenchmarkRecord rec;
    rec.generator = cell.generator;
    rec.method = cell.method;
    const Graph g = detail::build_benchmark_graph(cell);
    rec.n = g.node_count();
    rec.m = g.edge_count();

    int fds[2];
    if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
    const pid_t child = fork();
    if (child < 0) throw std::runtime_error("fork failed");
    if (child == 0) {
      close(fds[0]);
      DetectorConfig config;
      config.method = cell.method;
      config.heuristic.compute_average = false;
      config.heuristic.cache_policy = CachePolicy::off;
      config.heuristic.threads = threads;
      const auto start = std::chrono::steady_clock::now();
      const auto result = detect(g, config);
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;
      std::ostringstream line;
      line << elapsed.count();
      for (const auto& [k, comps] : result.levels)
        line << " " << k << ":" << comps.size();
      line << "\n";
      const std::string payload = line.str();
      ssize_t ignored = write(fds[1], payload.data(), payload.size());
      (void)ignored;
      close(fds[1]);
      _exit(0);
    }
    close(fds[1]);

    struct pollfd pfd{fds[0], POLLIN, 0};
    const int wait_ms = static_cast<int>(cell.timeout_seconds * 1000.0);
    std::string payload;
    const int ready = poll(&pfd, 1, wait_ms);
    if (ready > 0) {
      char buf[4096];
      ssize_t got;
      while ((got = read(fds[0], buf, sizeof buf)) > 0) payload.append(buf, static_cast<std::size_t>(got));
    }
    close(fds[0]);
    if (payload.empty()) {
      kill(child, SIGKILL);
      rec.status = "timeout";
      rec.wall_seconds = cell.timeout_seconds;
    } else {
      std::istringstream in(payload);
      in >> rec.wall_seconds;
      std::string item;
      while (in >> item) {
        const auto colon = item.find(':');
        rec.level_histogram[std::stoi(item.substr(0, colon))] =
            static_cast<std::size_t>(std::stoull(item.substr(colon + 1)));
      }
      rec.status = "ok";
    }
    int wstatus = 0;
    waitpid(child, &wstatus, 0);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace kcohesion
