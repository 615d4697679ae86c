#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kcohesion/graph.hpp"

namespace kcohesion {

/// Graph view that stores only the edges that are NOT present. Queries behave
/// as if the dense version existed: degree(v) = n - 1 - |absent(v)|, neighbor
/// iteration walks the node list skipping stored non-edges. Memory is
/// proportional to the absent edges, which is what makes the near-complete
/// auxiliary graphs of the k-component heuristic feasible.
///
/// Mutation (add_absent_edge) appends; the absent lists are re-sorted lazily
/// on the next query. Build single-threaded, then read concurrently.
class ComplementView {
 public:
  ComplementView() = default;

  explicit ComplementView(std::vector<int> node_ids) : ids_(std::move(node_ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    absent_.resize(ids_.size());
  }

  /// Records that (u, v) is not an edge of the viewed graph.
  void add_absent_edge(int u, int v) {
    if (u == v) return;
    absent_[slot(u)].push_back(v);
    absent_[slot(v)].push_back(u);
    sorted_ = false;
  }

  std::size_t node_count() const { return ids_.size(); }
  const std::vector<int>& nodes() const { return ids_; }

  bool contains(int v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    return it != ids_.end() && *it == v;
  }

  int degree(int v) const {
    ensure_sorted();
    return static_cast<int>(ids_.size() - 1 - absent_[slot(v)].size());
  }

  bool has_edge(int u, int v) const {
    if (u == v || !contains(v)) return false;
    ensure_sorted();
    const auto& a = absent_[slot(u)];
    return !std::binary_search(a.begin(), a.end(), v);
  }

  class NeighborRange {
   public:
    class iterator {
     public:
      using value_type = int;
      using difference_type = std::ptrdiff_t;
      using iterator_category = std::forward_iterator_tag;

      iterator() = default;
      iterator(const ComplementView* view, const std::vector<int>* absent, int v,
               std::size_t pos)
          : view_(view), absent_(absent), v_(v), pos_(pos) {
        advance();
      }

      int operator*() const { return view_->ids_[pos_]; }
      iterator& operator++() {
        ++pos_;
        advance();
        return *this;
      }
      iterator operator++(int) {
        iterator old = *this;
        ++*this;
        return old;
      }
      bool operator==(const iterator& other) const { return pos_ == other.pos_; }

     private:
      void advance() {
        // Walk ids and the sorted absent list in lockstep.
        while (pos_ < view_->ids_.size()) {
          const int candidate = view_->ids_[pos_];
          while (absent_pos_ < absent_->size() && (*absent_)[absent_pos_] < candidate)
            ++absent_pos_;
          const bool is_absent =
              absent_pos_ < absent_->size() && (*absent_)[absent_pos_] == candidate;
          if (candidate != v_ && !is_absent) break;
          ++pos_;
        }
      }

      const ComplementView* view_ = nullptr;
      const std::vector<int>* absent_ = nullptr;
      int v_ = 0;
      std::size_t pos_ = 0;
      std::size_t absent_pos_ = 0;
    };

    NeighborRange(const ComplementView* view, int v) : view_(view), v_(v) {
      view_->ensure_sorted();
    }
    iterator begin() const {
      return iterator(view_, &view_->absent_[view_->slot(v_)], v_, 0);
    }
    iterator end() const {
      return iterator(view_, &view_->absent_[view_->slot(v_)], v_,
                      view_->ids_.size());
    }

   private:
    const ComplementView* view_;
    int v_;
  };

  NeighborRange neighbors(int v) const { return NeighborRange(this, v); }

  /// Restriction to `keep`: absent pairs with both ends kept stay absent.
  ComplementView induced(std::span<const int> keep) const {
    ensure_sorted();
    ComplementView sub(std::vector<int>(keep.begin(), keep.end()));
    for (std::size_t s = 0; s < sub.ids_.size(); ++s) {
      const int v = sub.ids_[s];
      for (int u : absent_[slot(v)])
        if (u > v && sub.contains(u)) sub.add_absent_edge(v, u);
    }
    sub.ensure_sorted();
    return sub;
  }

  /// Dense materialization, for tests and desk-scale cross-checks.
  Graph materialize() const {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < ids_.size(); ++i)
      for (std::size_t j = i + 1; j < ids_.size(); ++j)
        if (has_edge(ids_[i], ids_[j])) edges.emplace_back(ids_[i], ids_[j]);
    return Graph::from_edges(edges, SelfLoopPolicy::reject, ids_);
  }

 private:
  friend class NeighborRange;

  std::size_t slot(int v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v)
      throw std::out_of_range("node " + std::to_string(v) + " not in view");
    return static_cast<std::size_t>(it - ids_.begin());
  }

  void ensure_sorted() const {
    if (sorted_) return;
    for (auto& a : absent_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    sorted_ = true;
  }

  std::vector<int> ids_;
  mutable std::vector<std::vector<int>> absent_;
  mutable bool sorted_ = true;
};

/// View of the complement of g: pairs adjacent in g become the stored
/// non-edges.
inline ComplementView complement_view(const Graph& g) {
  ComplementView view(g.nodes());
  for (const auto& [u, v] : g.edges()) view.add_absent_edge(u, v);
  return view;
}

/// Materialized complement graph on the same node set.
inline Graph complement(const Graph& g) {
  return complement_view(g).materialize();
}

}  // namespace kcohesion
