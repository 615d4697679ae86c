#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "kcohesion/graph.hpp"

namespace kcohesion {

/// Bijection between external string labels and dense internal node ids.
struct LabelMap {
  std::vector<std::string> labels;  // by node id
  std::unordered_map<std::string, int> index;

  int intern(const std::string& label) {
    auto [it, inserted] = index.emplace(label, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  }

  const std::string& label_of(int id) const {
    return labels[static_cast<std::size_t>(id)];
  }

  static LabelMap identity(std::size_t n) {
    LabelMap map;
    map.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      map.labels.push_back(std::to_string(i));
      map.index.emplace(map.labels.back(), static_cast<int>(i));
    }
    return map;
  }
};

struct EdgeListData {
  Graph graph;
  LabelMap labels;
};

struct ReadOptions {
  /// Treat the two columns as the two parts of a bipartite graph
  /// (left column = part A).
  bool bipartite_columns = false;
  /// Validate/derive a bipartition by 2-coloring instead of column position.
  bool infer_parts = false;
  SelfLoopPolicy self_loops = SelfLoopPolicy::reject;
};

/// Edge-list reader: one edge per line as two whitespace-separated tokens;
/// lines starting with '#' and blank lines are ignored. Duplicate edges
/// collapse; a self-loop is an input error (naming the line) unless the
/// policy says drop.
inline EdgeListData read_edge_list(std::istream& in, const ReadOptions& options = {}) {
  EdgeListData data;
  std::vector<std::pair<int, int>> edges;
  std::vector<char> in_part_a;  // by id, only used for bipartite columns
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream tokens(line);
    std::string u, v, extra;
    if (!(tokens >> u)) continue;       // blank line
    if (u.front() == '#') continue;     // comment
    if (!(tokens >> v) || (tokens >> extra))
      throw std::invalid_argument("line " + std::to_string(line_number) +
                                  ": expected exactly two tokens");
    if (u == v) {
      if (options.self_loops == SelfLoopPolicy::reject)
        throw std::invalid_argument("line " + std::to_string(line_number) +
                                    ": self-loop on '" + u + "'");
      continue;
    }
    const int ui = data.labels.intern(u);
    const int vi = data.labels.intern(v);
    if (options.bipartite_columns && !options.infer_parts) {
      in_part_a.resize(data.labels.labels.size(), -1);
      for (auto [id, part] : {std::pair{ui, 1}, std::pair{vi, 0}}) {
        auto& tag = in_part_a[static_cast<std::size_t>(id)];
        if (tag == -1)
          tag = static_cast<char>(part);
        else if (tag != part)
          throw std::invalid_argument(
              "line " + std::to_string(line_number) + ": node '" +
              data.labels.label_of(id) + "' appears in both columns");
      }
    }
    edges.emplace_back(ui, vi);
  }
  std::vector<int> all_ids(data.labels.labels.size());
  for (std::size_t i = 0; i < all_ids.size(); ++i) all_ids[i] = static_cast<int>(i);
  data.graph = Graph::from_edges(edges, SelfLoopPolicy::drop, all_ids);
  if (options.infer_parts) {
    auto part_a = infer_bipartition(data.graph);
    if (!part_a)
      throw std::invalid_argument("graph is not bipartite (odd cycle found)");
    data.graph.assign_parts(*part_a);
  } else if (options.bipartite_columns) {
    std::vector<int> part_a;
    for (std::size_t i = 0; i < in_part_a.size(); ++i)
      if (in_part_a[i] == 1) part_a.push_back(static_cast<int>(i));
    data.graph.assign_parts(part_a);
  }
  return data;
}

/// Writes the standard edge-list format: two labels per line; for bipartite
/// graphs the part-A endpoint is the left column. Ordering is canonical, so
/// equal graphs serialize byte-identically.
inline void write_edge_list(std::ostream& out, const Graph& g, const LabelMap& labels) {
  for (const auto& [u, v] : g.edges()) {
    int left = u, right = v;
    if (g.has_parts() && g.part_of(u) != Part::a) std::swap(left, right);
    out << labels.label_of(left) << '\t' << labels.label_of(right) << '\n';
  }
}

}  // namespace kcohesion
