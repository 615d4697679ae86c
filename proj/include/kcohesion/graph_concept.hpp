#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <limits>
#include <ranges>
#include <stdexcept>

namespace kcohesion {

/// Read interface shared by Graph and ComplementView. Every decomposition and
/// connectivity routine in this library is written against it, so the dense
/// auxiliary graph can be traversed through its complement storage without
/// ever being materialized.
template <typename G>
concept graph_like = requires(const G& g, int u, int v) {
  { g.node_count() } -> std::convertible_to<std::size_t>;
  { g.nodes() } -> std::ranges::input_range;
  { g.contains(v) } -> std::convertible_to<bool>;
  { g.degree(v) } -> std::convertible_to<int>;
  { g.neighbors(v) } -> std::ranges::input_range;
  { g.has_edge(u, v) } -> std::convertible_to<bool>;
};

template <graph_like G>
std::size_t count_edges(const G& g) {
  std::size_t twice = 0;
  for (int v : g.nodes()) twice += static_cast<std::size_t>(g.degree(v));
  return twice / 2;
}

/// 2m / n(n-1).
template <graph_like G>
double density(const G& g) {
  const auto n = g.node_count();
  if (n < 2) throw std::domain_error("density requires at least 2 nodes");
  return 2.0 * static_cast<double>(count_edges(g)) /
         (static_cast<double>(n) * static_cast<double>(n - 1));
}

template <graph_like G>
int min_degree_of(const G& g) {
  int d = std::numeric_limits<int>::max();
  bool any = false;
  for (int v : g.nodes()) {
    d = std::min(d, g.degree(v));
    any = true;
  }
  return any ? d : 0;
}

}  // namespace kcohesion
