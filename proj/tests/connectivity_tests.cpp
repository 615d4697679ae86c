#include <catch2/catch_amalgamated.hpp>

#include "kcohesion/kcohesion.hpp"
#include "test_support.hpp"

using namespace kcohesion;

TEST_CASE("exact local connectivity") {
  SECTION("complete graph pairs") {
    const Graph g = complete_graph(5);
    for (int u = 0; u < 5; ++u)
      for (int v = u + 1; v < 5; ++v)
        CHECK(local_node_connectivity_exact(g, u, v) == 4);
  }
  SECTION("petersen pairs") {
    const Graph g = petersen_graph();
    for (int u : g.nodes())
      for (int v : g.nodes())
        if (u < v) CHECK(local_node_connectivity_exact(g, u, v) == 3);
  }
  SECTION("path endpoints") {
    CHECK(local_node_connectivity_exact(path_graph(3), 0, 2) == 1);
  }
  SECTION("same node is a domain error") {
    CHECK_THROWS_AS(local_node_connectivity_exact(path_graph(3), 1, 1),
                    std::domain_error);
  }
  SECTION("different components give zero") {
    const Graph g = testsupport::from_pairs({{0, 1}, {2, 3}});
    CHECK(local_node_connectivity_exact(g, 0, 3) == 0);
  }
  SECTION("cutoff caps the flow") {
    CHECK(local_node_connectivity_exact(complete_graph(6), 0, 1, 2) == 2);
  }
}

TEST_CASE("approximate local connectivity") {
  SECTION("cycle endpoints find both sides") {
    CHECK(local_node_connectivity_approx(cycle_graph(4), 0, 2) == 2);
  }
  SECTION("cliques are exact under the marking scheme") {
    const Graph g = complete_graph(5);
    for (int u = 0; u < 5; ++u)
      for (int v = u + 1; v < 5; ++v)
        CHECK(local_node_connectivity_approx(g, u, v) == 4);
  }
  SECTION("deterministic across calls") {
    const Graph g = testsupport::random_connected(30, 4.0, 5);
    for (int u : g.nodes())
      for (int v : g.nodes())
        if (u < v)
          CHECK(local_node_connectivity_approx(g, u, v) ==
                local_node_connectivity_approx(g, u, v));
  }
}

TEST_CASE("lower-bound property of the approximation") {
  // Densities from sparse to half-full, all pairs.
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 10 + static_cast<int>(seed % 16);
    const double density = 0.05 + 0.45 * static_cast<double>(seed) / 30.0;
    const Graph g = erdos_renyi(n, density * (n - 1), seed);
    for (int u : g.nodes())
      for (int v : g.nodes())
        if (u < v) {
          CHECK(local_node_connectivity_approx(g, u, v) <=
                local_node_connectivity_exact(g, u, v));
          ++checked;
        }
  }
  CHECK(checked > 1000);
}

TEST_CASE("menger cross-check on small graphs") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 6 + static_cast<int>(seed % 6);
    const Graph g = erdos_renyi(n, 2.5, seed * 13 + 1);
    for (int u : g.nodes())
      for (int v : g.nodes()) {
        if (u >= v || g.has_edge(u, v)) continue;
        CHECK(local_node_connectivity_exact(g, u, v) ==
              testsupport::brute_force_min_cut_size(g, u, v));
      }
  }
}

TEST_CASE("global node connectivity") {
  CHECK(node_connectivity(petersen_graph()) == 3);
  CHECK(node_connectivity(appendix_a_fixture()) == 2);
  CHECK(node_connectivity(star_graph(4)) == 1);
  CHECK(node_connectivity(complete_graph(7)) == 6);
  CHECK(node_connectivity(testsupport::from_pairs({{0, 1}, {2, 3}})) == 0);
  CHECK(node_connectivity(cycle_graph(6)) == 2);
  CHECK_THROWS_AS(node_connectivity(path_graph(1)), std::domain_error);
}

TEST_CASE("minimum vertex cut extraction") {
  const Graph g = cycle_graph(4);
  const auto cut = min_vertex_cut_between(g, 0, 2);
  CHECK(cut == std::vector<int>{1, 3});
  CHECK_THROWS_AS(min_vertex_cut_between(g, 0, 1), std::invalid_argument);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph h = testsupport::random_connected(12, 3.0, seed + 50);
    for (int u : h.nodes())
      for (int v : h.nodes()) {
        if (u >= v || h.has_edge(u, v)) continue;
        const auto c = min_vertex_cut_between(h, u, v);
        CHECK(static_cast<int>(c.size()) ==
              local_node_connectivity_exact(h, u, v));
        CHECK(testsupport::disconnects(h, c, u, v));
      }
  }
}

TEST_CASE("edge connectivity") {
  CHECK(edge_connectivity(cycle_graph(6)) == 2);
  CHECK(edge_connectivity(complete_graph(5)) == 4);
  CHECK(edge_connectivity(testsupport::from_pairs({{0, 1}, {2, 3}})) == 0);
  CHECK(edge_connectivity(star_graph(5)) == 1);
  SECTION("fixture has lambda 2") {
    // Whitney forces lambda >= kappa = 2; a 2-edge cut exists at each
    // Petersen attachment, so lambda = 2.
    CHECK(edge_connectivity(appendix_a_fixture()) == 2);
  }
}

TEST_CASE("average node connectivity") {
  SECTION("complete graphs give exactly n-1") {
    for (int n : {3, 5, 8}) {
      const auto avg = average_node_connectivity(complete_graph(n));
      CHECK(avg.sum == static_cast<std::int64_t>(n - 1) * (n * (n - 1) / 2));
      CHECK(avg.value() == static_cast<double>(n - 1));
    }
  }
  SECTION("path of three averages to one") {
    CHECK(average_node_connectivity(path_graph(3)).value() == 1.0);
  }
  SECTION("C4 averages to two") {
    const auto avg = average_node_connectivity(cycle_graph(4));
    CHECK(avg.sum == 12);
    CHECK(avg.pair_count == 6);
  }
  SECTION("matches the brute-force pair oracle") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Graph g = testsupport::random_connected(10, 3.0, seed + 7);
      std::int64_t sum = 0;
      for (int u : g.nodes())
        for (int v : g.nodes())
          if (u < v) sum += testsupport::brute_force_local_connectivity(g, u, v);
      const auto avg = average_node_connectivity(g);
      CHECK(avg.sum == sum);
    }
  }
  SECTION("pair cache is consumed when storing") {
    const Graph g = cycle_graph(5);
    PairConnectivityCache cache(CachePolicy::store);
    cache.put(0, 1, 99);  // poisoned value proves the cache is read
    const auto avg = average_node_connectivity(g, Estimator::exact_flow, &cache);
    CHECK(avg.sum == 99 + 9 * 2);
    CHECK(cache.size() == 10);
  }
  SECTION("threaded computation matches serial") {
    const Graph g = testsupport::random_connected(40, 5.0, 3);
    const auto serial = average_node_connectivity(g, Estimator::exact_flow, nullptr, 1);
    const auto parallel = average_node_connectivity(g, Estimator::exact_flow, nullptr, 8);
    CHECK(serial == parallel);
  }
  SECTION("degenerate input") {
    CHECK_THROWS_AS(average_node_connectivity(path_graph(1)), std::domain_error);
  }
}

TEST_CASE("whitney chain and average bound") {
  std::vector<Graph> matrix;
  matrix.push_back(complete_graph(6));
  matrix.push_back(petersen_graph());
  matrix.push_back(cycle_graph(8));
  matrix.push_back(star_graph(6));
  matrix.push_back(testsupport::barbell_k4());
  for (std::uint64_t seed = 0; seed < 8; ++seed)
    matrix.push_back(erdos_renyi(24, 2.0 + static_cast<double>(seed), seed));
  for (const auto& g : matrix) {
    const auto report = connectivity_report(g);
    CHECK(report.kappa <= report.lambda);
    CHECK(report.lambda <= report.delta);
    if (report.kappa > 0)  // connected
      CHECK(report.average_kappa.value() >= static_cast<double>(report.kappa));
  }
}
