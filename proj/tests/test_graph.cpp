#include <doctest.h>

#include "quadforge/error.hpp"
#include "quadforge/graph.hpp"
#include "quadforge/graph_expr.hpp"
#include "support.hpp"

using namespace quadforge;

TEST_SUITE("graph") {
    TEST_CASE("graph normalizes vertices and edges") {
        const Graph g({3, 1, 2, 1}, {{3, 1}, {1, 2}, {1, 3}});
        CHECK(g.vertices() == std::vector<int>{1, 2, 3});
        CHECK(g.edge_count() == 2);
        CHECK(g.edges().front() == VertexPair(1, 2));
        CHECK(g.edge_id(3, 1) == 1);
        CHECK(g.neighbors(1) == std::vector<int>{2, 3});
        CHECK_FALSE(g.has_edge(2, 3));
        CHECK(g.is_connected());
    }

    TEST_CASE("graph rejects loops and stray endpoints") {
        CHECK_THROWS_AS(Graph({0, 1}, {{1, 1}}), StructureError);
        CHECK_THROWS_AS(Graph({0, 1}, {{0, 2}}), StructureError);
        CHECK_THROWS_AS(Graph({-1, 1}, {}), StructureError);
    }

    TEST_CASE("degrees of K5") {
        const auto k5 = eval(GraphExpr::complete(5));
        CHECK(k5.edge_count() == 10);
        CHECK(min_degree(k5) == 4);
        CHECK(universal_vertices(k5) == std::vector<int>{0, 1, 2, 3, 4});
        CHECK(missing_edge_count(k5) == 0);
    }

    TEST_CASE("few missing edges force large minimum degree") {
        // A vertex misses at most t edges, so t <= n - 4 leaves degree >= 3.
        for (int n = 5; n <= 9; ++n) {
            const auto kn = eval(GraphExpr::complete(n));
            std::vector<VertexPair> drop;
            for (int i = 1; i <= n - 4; ++i) drop.push_back({0, i});
            const auto g = kn.with_edges_removed(drop);
            CHECK(missing_edge_count(g) == n - 4);
            CHECK(min_degree(g) == 3);
        }
    }
}

TEST_SUITE("graph_expr") {
    TEST_CASE("basic constructors") {
        CHECK(eval(parse_graph_expr("complete(5)")).edge_count() == 10);
        const auto e4 = eval(parse_graph_expr("complement(complete(4))"));
        CHECK(e4.vertex_count() == 4);
        CHECK(e4.edge_count() == 0);
        const auto c5 = eval(parse_graph_expr("C(5)"));
        CHECK(c5.edge_count() == 5);
        CHECK(min_degree(c5) == 2);
        const auto k36 = eval(parse_graph_expr("K(3,6)"));
        CHECK(k36.edge_count() == 18);
        CHECK(k36.degree(0) == 6);
        CHECK(k36.degree(3) == 3);
    }

    TEST_CASE("H and J blocks") {
        CHECK(h_graph(0) == eval(GraphExpr::complete(4)).relabeled({{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
        const auto h2 = h_graph(2);
        CHECK(h2.edges() == std::vector<VertexPair>{{1, 2}, {1, 4}, {2, 4}, {3, 4}});
        const auto h4 = h_graph(4);
        CHECK(h4.edges() == std::vector<VertexPair>{{1, 4}, {2, 4}});
        CHECK(j_graph(8).edge_count() == 20);
        CHECK(j_graph(4).edge_count() == 24);
        CHECK_FALSE(j_graph(8).has_edge(1, 2));
        CHECK_FALSE(j_graph(8).has_edge(5, 8));
        CHECK(j_graph(8).has_edge(1, 3));
    }

    TEST_CASE("join with a union keeps left labels and shifts the right") {
        const auto g = eval(parse_graph_expr("join(empty(2), disjoint_union(join(K(1), H(2)), K(1)))"));
        // 2 * 6 join edges + 4 spoke edges + 4 edges of the block.
        CHECK(g.vertex_count() == 8);
        CHECK(g.edge_count() == 20);
        CHECK(g == eval(parse_graph_expr("join(empty(2),union(join(K(1),H(2)),K(1)))")));
    }

    TEST_CASE("parse round trip and errors") {
        for (const char* text : {"K(4)", "delete(K(5), 0-1, 2-3)", "subdivide(K(4), 0-1)", "join(C(4), empty(2))",
                                 "J(8)", "complement(K(2,3))"}) {
            const auto e = parse_graph_expr(text);
            CHECK(eval(parse_graph_expr(to_string(e))) == eval(e));
        }
        CHECK_THROWS_AS(parse_graph_expr("K(4"), FormatError);
        CHECK_THROWS_AS(parse_graph_expr("frob(3)"), FormatError);
        CHECK_THROWS_AS(eval(parse_graph_expr("delete(K(3), 0-5)")), DomainError);
        CHECK_THROWS_AS(eval(parse_graph_expr("H(3)")), DomainError);
    }

    TEST_CASE("record targets") {
        const auto p70 = phi_target("phi_7_0_plus");
        CHECK(p70.vertex_count() == 8);
        CHECK(p70.edge_count() == 22);
        const auto lab = join_labels("phi_7_0_plus");
        CHECK(p70.degree(lab.z) == 2);
        CHECK(p70.neighbors(lab.z) == std::vector<int>{lab.x, lab.y});
        CHECK_FALSE(p70.has_edge(lab.x, lab.y));

        const auto p118 = phi_target("phi_11_8_plus_star");
        CHECK(p118.vertex_count() == 12);
        CHECK(p118.edge_count() == 48);
        CHECK(phi_target("phi_6_1").edge_count() == 14);
        CHECK(phi_target("phi_7_2_plus").vertex_count() == 8);
        CHECK(min_degree(phi_target("phi_7_2_plus")) == 2);
        CHECK_THROWS_AS(phi_target("phi_9_9"), DomainError);
    }

    TEST_CASE("isomorphism") {
        const auto k23 = eval(GraphExpr::complete_bipartite(2, 3));
        // C4 with a vertex joined to two opposite corners.
        const auto c4plus = qf_test::graph_of({{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {2, 4}});
        CHECK(are_isomorphic(k23, c4plus));
        CHECK_FALSE(are_isomorphic(eval(GraphExpr::complete(4)), eval(GraphExpr::cycle(4))));
        const auto p = phi_target("phi_10_1_star");
        CHECK(are_isomorphic(p, p));
        CHECK(are_isomorphic(phi_7_2_plus_star_variant(0), phi_target("phi_7_2_plus")));
        CHECK_FALSE(are_isomorphic(phi_7_2_plus_star_variant(0), phi_7_2_plus_star_variant(1)));
    }
}
