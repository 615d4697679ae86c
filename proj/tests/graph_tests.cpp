#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "kcohesion/kcohesion.hpp"
#include "test_support.hpp"

using namespace kcohesion;

TEST_CASE("edge-list construction") {
  SECTION("path graph from pairs") {
    const Graph g = testsupport::from_pairs({{0, 1}, {1, 2}});
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(0, 2));
  }
  SECTION("duplicate edges collapse") {
    const Graph g = testsupport::from_pairs({{0, 1}, {0, 1}, {1, 0}});
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
  }
  SECTION("self-loop rejected by default") {
    std::vector<std::pair<int, int>> edges{{0, 0}};
    CHECK_THROWS_AS(Graph::from_edges(edges), std::invalid_argument);
  }
  SECTION("self-loop dropped on request") {
    std::vector<std::pair<int, int>> edges{{0, 0}, {0, 1}};
    const Graph g = Graph::from_edges(edges, SelfLoopPolicy::drop);
    CHECK(g.edge_count() == 1);
  }
}

TEST_CASE("edge-list reader") {
  SECTION("comments, blanks and labels") {
    std::istringstream in("# header\n\na b\nb c\na b\n");
    const auto data = read_edge_list(in);
    CHECK(data.graph.node_count() == 3);
    CHECK(data.graph.edge_count() == 2);
    CHECK(data.labels.label_of(0) == "a");
  }
  SECTION("self-loop error names the line") {
    std::istringstream in("a b\nc c\n");
    try {
      read_edge_list(in);
      FAIL("expected an input error");
    } catch (const std::invalid_argument& err) {
      CHECK(std::string(err.what()).find("line 2") != std::string::npos);
    }
  }
  SECTION("wrong token count errors") {
    std::istringstream in("a b c\n");
    CHECK_THROWS_AS(read_edge_list(in), std::invalid_argument);
  }
  SECTION("bipartite columns define parts") {
    std::istringstream in("u1 e1\nu2 e1\nu1 e2\n");
    ReadOptions opt;
    opt.bipartite_columns = true;
    const auto data = read_edge_list(in, opt);
    REQUIRE(data.graph.has_parts());
    CHECK(data.graph.part_of(data.labels.index.at("u1")) == Part::a);
    CHECK(data.graph.part_of(data.labels.index.at("e1")) == Part::b);
  }
  SECTION("node in both columns rejected") {
    std::istringstream in("a b\nb c\n");
    ReadOptions opt;
    opt.bipartite_columns = true;
    CHECK_THROWS_AS(read_edge_list(in, opt), std::invalid_argument);
  }
  SECTION("2-coloring inference") {
    std::istringstream in("a b\nb c\nc d\n");
    ReadOptions opt;
    opt.infer_parts = true;
    const auto data = read_edge_list(in, opt);
    REQUIRE(data.graph.has_parts());
    CHECK(data.graph.part_of(data.labels.index.at("a")) !=
          data.graph.part_of(data.labels.index.at("b")));
  }
  SECTION("odd cycle fails inference") {
    std::istringstream in("a b\nb c\nc a\n");
    ReadOptions opt;
    opt.infer_parts = true;
    CHECK_THROWS_AS(read_edge_list(in, opt), std::invalid_argument);
  }
}

TEST_CASE("round-trip through the writer") {
  const Graph g = testsupport::random_connected(40, 4.0, 7);
  const LabelMap labels = LabelMap::identity(g.node_count());
  std::ostringstream out;
  write_edge_list(out, g, labels);
  std::istringstream in(out.str());
  const auto back = read_edge_list(in);
  // Same structure under the label bijection.
  REQUIRE(back.graph.node_count() == g.node_count());
  REQUIRE(back.graph.edge_count() == g.edge_count());
  for (const auto& [u, v] : g.edges())
    CHECK(back.graph.has_edge(back.labels.index.at(labels.label_of(u)),
                              back.labels.index.at(labels.label_of(v))));
}

TEST_CASE("one-mode projection") {
  SECTION("star projects to a triangle") {
    // Center in part B, three leaves in part A.
    std::istringstream in("a1 c\na2 c\na3 c\n");
    ReadOptions opt;
    opt.bipartite_columns = true;
    const auto data = read_edge_list(in, opt);
    const Graph proj = one_mode_projection(data.graph, Part::a);
    CHECK(proj.node_count() == 3);
    CHECK(proj.edge_count() == 3);
  }
  SECTION("multiplicity collapses to one edge") {
    // Two events shared by the same two authors.
    std::istringstream in("a e1\nb e1\na e2\nb e2\n");
    ReadOptions opt;
    opt.bipartite_columns = true;
    const auto data = read_edge_list(in, opt);
    const Graph proj = one_mode_projection(data.graph, Part::a);
    CHECK(proj.node_count() == 2);
    CHECK(proj.edge_count() == 1);
  }
  SECTION("non-bipartite input errors") {
    const Graph g = complete_graph(3);
    CHECK_THROWS_AS(one_mode_projection(g, Part::a), std::invalid_argument);
  }
  SECTION("projection degree bound") {
    std::istringstream in("a e1\nb e1\nc e1\na e2\nd e2\n");
    ReadOptions opt;
    opt.bipartite_columns = true;
    const auto data = read_edge_list(in, opt);
    const Graph proj = one_mode_projection(data.graph, Part::a);
    for (int v : proj.nodes()) {
      int bound = 0;
      for (int e : data.graph.neighbors(v))
        bound += data.graph.degree(e) - 1;
      CHECK(proj.degree(v) <= bound);
    }
  }
}

TEST_CASE("density") {
  CHECK(density(complete_graph(5)) == 1.0);
  CHECK(density(path_graph(3)) == Catch::Approx(2.0 / 3.0));
  CHECK(density(appendix_a_fixture()) == Catch::Approx(2.0 * 200 / (99.0 * 98)));
  CHECK_THROWS_AS(density(path_graph(1)), std::domain_error);
}

TEST_CASE("complement view") {
  SECTION("complement of the empty graph is complete") {
    const Graph empty = Graph::from_edges({}, SelfLoopPolicy::reject,
                                          std::vector<int>{0, 1, 2, 3});
    const ComplementView view = complement_view(empty);
    CHECK(view.degree(0) == 3);
    CHECK(view.has_edge(1, 3));
    CHECK(count_edges(view) == 6);
  }
  SECTION("complement of K4 is empty") {
    const ComplementView view = complement_view(complete_graph(4));
    for (int v : view.nodes()) CHECK(view.degree(v) == 0);
  }
  SECTION("neighbor iteration skips absent edges and self") {
    ComplementView view(std::vector<int>{1, 3, 5, 7});
    view.add_absent_edge(1, 5);
    std::vector<int> nbrs;
    for (int u : view.neighbors(1)) nbrs.push_back(u);
    CHECK(nbrs == std::vector<int>{3, 7});
  }
  SECTION("induced restriction keeps absent pairs") {
    ComplementView view(std::vector<int>{0, 1, 2, 3});
    view.add_absent_edge(0, 1);
    view.add_absent_edge(2, 3);
    const ComplementView sub = view.induced(std::vector<int>{0, 1, 2});
    CHECK_FALSE(sub.has_edge(0, 1));
    CHECK(sub.has_edge(0, 2));
    CHECK(sub.degree(0) == 1);
  }
  SECTION("double complement behaves like the original") {
    for (std::uint64_t seed : {11, 12, 13}) {
      const int n = 40 + static_cast<int>(seed % 21);  // up to 60
      const Graph g = testsupport::random_connected(n, 5.0, seed);
      const ComplementView twice = complement_view(complement(g));
      // Identical results for every operation on the graph interface.
      const auto direct = core_numbers(g);
      const auto via_view = core_numbers(twice);
      REQUIRE(direct.ids == via_view.ids);
      CHECK(direct.core == via_view.core);
      CHECK(connected_components(g) == connected_components(twice));
      const auto bic_a = biconnected_components(g);
      const auto bic_b = biconnected_components(twice);
      CHECK(bic_a.edge_components == bic_b.edge_components);
      CHECK(bic_a.articulation_points == bic_b.articulation_points);
      CHECK(k_core_nodes(g, 3) == k_core_nodes(twice, 3));
      CHECK(node_connectivity(g) == node_connectivity(twice));
      CHECK(edge_connectivity(g) == edge_connectivity(twice));
      CHECK(density(g) == density(twice));
      CHECK(min_degree_of(g) == min_degree_of(twice));
      CHECK(local_node_connectivity_approx(g, 0, 7) ==
            local_node_connectivity_approx(twice, 0, 7));
      CHECK(local_node_connectivity_exact(g, 1, 9) ==
            local_node_connectivity_exact(twice, 1, 9));
      CHECK(average_node_connectivity(g).sum == average_node_connectivity(twice).sum);
    }
  }
  SECTION("materialized complement of a random graph matches the view") {
    const Graph g = erdos_renyi(50, 6.0, 3);
    const ComplementView view = complement_view(g);
    const Graph dense = view.materialize();
    const auto through_view = core_numbers(view);
    const auto through_dense = core_numbers(dense);
    REQUIRE(through_view.ids == through_dense.ids);
    CHECK(through_view.core == through_dense.core);
    CHECK(count_edges(view) == dense.edge_count());
  }
}

TEST_CASE("bipartite part validation") {
  std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}};
  Graph g = Graph::from_edges(edges);
  CHECK_THROWS_AS(g.assign_parts(std::vector<int>{0, 1}), std::invalid_argument);
  Graph ok = Graph::from_edges(edges);
  ok.assign_parts(std::vector<int>{0, 2});
  CHECK(ok.part_of(1) == Part::b);
}
