#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "kcohesion/graph.hpp"

namespace kcohesion::detail {

/// Compact slot-indexed adjacency for the hot pairwise loops. Slot s is the
/// position of its node id in g.nodes(), so ascending slots preserve the
/// canonical id order and traversal stays deterministic.
struct CsrGraph {
  int n = 0;
  std::vector<int> offsets;
  std::vector<int> nbrs;

  static CsrGraph from(const Graph& g) {
    CsrGraph csr;
    csr.n = static_cast<int>(g.node_count());
    csr.offsets.assign(static_cast<std::size_t>(csr.n) + 1, 0);
    const auto& ids = g.nodes();
    for (int s = 0; s < csr.n; ++s)
      csr.offsets[static_cast<std::size_t>(s) + 1] =
          csr.offsets[static_cast<std::size_t>(s)] + g.degree(ids[static_cast<std::size_t>(s)]);
    csr.nbrs.resize(static_cast<std::size_t>(csr.offsets.back()));
    for (int s = 0; s < csr.n; ++s) {
      std::size_t at = static_cast<std::size_t>(csr.offsets[static_cast<std::size_t>(s)]);
      for (int u : g.neighbors(ids[static_cast<std::size_t>(s)])) {
        const auto it = std::lower_bound(ids.begin(), ids.end(), u);
        csr.nbrs[at++] = static_cast<int>(it - ids.begin());
      }
    }
    return csr;
  }

  std::span<const int> row(int s) const {
    return {nbrs.data() + offsets[static_cast<std::size_t>(s)],
            nbrs.data() + offsets[static_cast<std::size_t>(s) + 1]};
  }

  bool has_arc(int s, int t) const {
    const auto r = row(s);
    return std::binary_search(r.begin(), r.end(), t);
  }
};

/// Direct edge plus common-neighbor count, capped at `cap`. Each common
/// neighbor carries one length-2 node-independent path, so this is a lower
/// bound on what the marking estimator finds.
inline int certified_paths(const CsrGraph& g, int s, int t, int cap) {
  int found = g.has_arc(s, t) ? 1 : 0;
  const auto a = g.row(s);
  const auto b = g.row(t);
  std::size_t x = 0, y = 0;
  while (found < cap && x < a.size() && y < b.size()) {
    if (a[x] < b[y]) ++x;
    else if (a[x] > b[y]) ++y;
    else {
      if (a[x] != s && a[x] != t) ++found;
      ++x;
      ++y;
    }
  }
  return found;
}

/// Reusable scratch for the shortest-path marking estimator. Version stamps
/// avoid clearing the arrays between the millions of pairs scanned while
/// building auxiliary graphs.
class WnWorkspace {
 public:
  explicit WnWorkspace(int n)
      : parent_(static_cast<std::size_t>(n), -1),
        used_(static_cast<std::size_t>(n), 0),
        seen_(static_cast<std::size_t>(n), 0) {
    queue_.reserve(static_cast<std::size_t>(n));
  }

  /// Node-independent path count between slots s and t, identical to the
  /// generic local_node_connectivity_approx on the same graph.
  int count(const CsrGraph& g, int s, int t,
            int cutoff = std::numeric_limits<int>::max()) {
    ++pair_epoch_;
    int paths = 0;
    if (g.has_arc(s, t)) ++paths;
    while (paths < cutoff) {
      ++bfs_epoch_;
      queue_.clear();
      queue_.push_back(s);
      seen_[static_cast<std::size_t>(s)] = bfs_epoch_;
      bool found = false;
      for (std::size_t qi = 0; qi < queue_.size() && !found; ++qi) {
        const int x = queue_[qi];
        for (int y : g.row(x)) {
          if (x == s && y == t) continue;  // direct edge already counted
          const auto yi = static_cast<std::size_t>(y);
          if (used_[yi] == pair_epoch_ || seen_[yi] == bfs_epoch_) continue;
          seen_[yi] = bfs_epoch_;
          parent_[yi] = x;
          if (y == t) {
            found = true;
            break;
          }
          queue_.push_back(y);
        }
      }
      if (!found) break;
      ++paths;
      for (int x = parent_[static_cast<std::size_t>(t)]; x != s;
           x = parent_[static_cast<std::size_t>(x)])
        used_[static_cast<std::size_t>(x)] = pair_epoch_;
    }
    return paths;
  }

 private:
  std::vector<int> parent_;
  std::vector<std::uint64_t> used_, seen_;
  std::vector<int> queue_;
  std::uint64_t pair_epoch_ = 0;
  std::uint64_t bfs_epoch_ = 0;
};

}  // namespace kcohesion::detail
