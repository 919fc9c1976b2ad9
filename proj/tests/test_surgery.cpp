#include <doctest.h>

#include "quadforge/catalog.hpp"
#include "quadforge/certificate.hpp"
#include "quadforge/error.hpp"
#include "quadforge/graph_expr.hpp"
#include "quadforge/surgery.hpp"
#include "support.hpp"

using namespace quadforge;

namespace {

Catalog& catalog() {
    static Catalog c(qf_test::source_catalog(), false);
    return c;
}

Embedding witness(const std::string& name) { return catalog().get_witness(name); }

/// Planar K_{2,3}: C4 with a vertex inside one face joined to 0 and 2.
Embedding k23_planar() {
    const auto c4 = qf_test::c4_sphere();
    return insert_degree2(c4, c4.face_vertex_lists().front(), 0);
}

}  // namespace

TEST_SUITE("surgery") {
    TEST_CASE("disk site of a vertex") {
        const auto e = witness("phi_5_0_star");
        const auto s = diamond_site(e, 0);
        CHECK(s.vertex == 0);
        CHECK(s.around.size() == 4);
        CHECK(s.far.size() == 4);
        CHECK_THROWS_AS(diamond_site(qf_test::c4_sphere(), 0), SurgeryError);
        CHECK_THROWS_AS(diamond_site(qf_test::k2_sphere(), 0), SurgeryError);
    }

    TEST_CASE("sum of two planar K_{2,3}") {
        const auto a = k23_planar();
        CHECK(a.graph().degree(0) == 3);
        const auto s = diamond_sum(a, 0, a, 2);
        const auto c = certify(s);
        CHECK(c.n == 5);
        CHECK(c.chi == 2);
        CHECK(c.quadrangular);
        CHECK(c.orientable);
        CHECK(are_isomorphic(s.graph(), eval(GraphExpr::complete_bipartite(2, 3))));
    }

    TEST_CASE("join record summed with K_{6,3}") {
        const auto p = witness("phi_7_0_plus");
        const auto x = join_labels("phi_7_0_plus").x;
        const auto k63 = catalog().build_kmn(6, 3);
        CHECK(face_simple_sum_hypotheses(p, x, k63, 6));
        CHECK(face_simple_sum_hypotheses(k63, 6, p, x));
        const auto s = diamond_sum(p, x, k63, 6);
        const auto c = certify(s);
        CHECK(c.quadrangular);
        CHECK(c.face_simple);
        CHECK_FALSE(c.orientable);
        CHECK(c.chi == certify(p).chi + 0 - 2);
        CHECK(are_isomorphic(s.graph(), eval(parse_graph_expr("join(union(join(K(1),H(0)),K(1)),empty(3))"))));
    }

    TEST_CASE("sum labels") {
        const auto a = witness("phi_5_0_star");
        const auto b = catalog().build_kmn(2, 4);
        const auto r = diamond_sum_labeled(a, 0, b, 0);
        // Left labels survive; the far pole of b is renamed past both maxima.
        CHECK(r.embedding.graph().vertices() == std::vector<int>{1, 2, 3, 4, 6});
        CHECK(r.second_labels.size() == 5);
        CHECK(r.second_labels.at(1) == 6);
        for (const auto& [from, to] : r.second_labels) CHECK(r.embedding.graph().has_vertex(to));
        CHECK(certify(r.embedding).chi == 0 + 2 - 2);
    }

    TEST_CASE("sum preconditions") {
        const auto a = witness("phi_5_0_star");
        const auto k63 = catalog().build_kmn(6, 3);
        CHECK_THROWS_AS(diamond_sum(a, 0, k63, 6), SurgeryError);
        CHECK_THROWS_AS(diamond_sum(a, 0, a, 9), SurgeryError);
        // Gluing two K4 blocks duplicates their edges.
        CHECK_THROWS_AS(diamond_sum(a, 0, a, 1), SurgeryError);
        CHECK_FALSE(face_simple_sum_hypotheses(a, 0, k63, 6));
    }

    TEST_CASE("sums follow the orientability law for every gluing") {
        const auto k63 = catalog().build_kmn(6, 3);
        for (int off = 0; off < 6; ++off)
            for (bool reflect : {false, true}) {
                const auto s = diamond_sum(k63, 6, k63, 7, off, reflect);
                CHECK(is_quadrangular(s));
                CHECK(is_orientable(s));
                CHECK(euler_characteristic(s) == -2);
                CHECK(s.graph().vertex_count() == 9 + 9 - 2 - 6);
            }
        const auto p40 = witness("phi_4_0");
        const auto k23 = catalog().build_kmn(2, 3);
        for (int off = 0; off < 3; ++off)
            for (bool reflect : {false, true}) {
                const auto s = diamond_sum(p40, 0, k23, 0, off, reflect);
                CHECK_FALSE(is_orientable(s));
                CHECK(euler_characteristic(s) == 1 + 2 - 2);
            }
    }

    TEST_CASE("handle on the 8-vertex record") {
        const auto e = witness("phi_8_4_star");
        const auto sites = find_handle_sites(e, {4, 5, 6, 7});
        REQUIRE_FALSE(sites.empty());
        const auto h = handle_augment(e, sites.front());
        const auto c = certify(h);
        CHECK(c.n == 8);
        CHECK(c.t == 0);
        CHECK(c.orientable);
        CHECK(c.quadrangular);
        CHECK(c.chi == certify(e).chi - 2);
        CHECK(h == witness("q_8_0_star"));
    }

    TEST_CASE("handle on the 12-vertex record") {
        const auto e = witness("phi_11_8_plus_star");
        const auto sites = find_handle_sites(e, {1, 2, 3, 4});
        REQUIRE_FALSE(sites.empty());
        bool matched = false;
        for (const auto& s : sites) {
            const auto h = handle_augment(e, s);
            CHECK(certify(h).orientable);
            CHECK(euler_characteristic(h) == -14);
            matched = matched || h.graph() == phi_target("phi_11_4_plus_star");
        }
        CHECK(matched);
    }

    TEST_CASE("handle site edge cases") {
        const auto c4 = qf_test::c4_sphere();
        CHECK(find_handle_sites(c4, {0, 1, 2, 3}).empty());
        CHECK_THROWS_AS(find_handle_sites(witness("phi_8_4_star"), {4, 5, 4, 7}), SurgeryError);
        HandleSite bogus;
        bogus.alpha = {0, 1, 2, 3};
        bogus.beta = {0, 1, 2, 3};
        CHECK_THROWS_AS(handle_augment(witness("phi_5_0_star"), bogus), SurgeryError);
    }

    TEST_CASE("deleting degree-2 vertices") {
        const auto c73 = certify(delete_degree2(witness("phi_7_2_plus"), 7));
        CHECK(c73.n == 7);
        CHECK(c73.t == 3);
        CHECK(c73.face_simple);
        CHECK_FALSE(c73.orientable);
        const auto c71 = certify(delete_degree2(witness("phi_7_0_plus"), 7));
        CHECK(c71.n == 7);
        CHECK(c71.t == 1);
        const auto c111 = certify(delete_degree2(witness("phi_11_0_plus_star"), 11));
        CHECK(c111.n == 11);
        CHECK(c111.t == 1);
        CHECK(c111.orientable);
        CHECK(c111.face_simple);
        CHECK_THROWS_AS(delete_degree2(witness("phi_5_0_star"), 0), SurgeryError);
    }

    TEST_CASE("inserting degree-2 vertices") {
        const auto a = witness("phi_5_0_star");
        const auto face = a.face_vertex_lists().front();
        const auto b = insert_degree2(a, face, face[0]);
        const auto c = certify(b);
        CHECK(c.n == 6);
        CHECK(c.t == 3);
        CHECK(c.orientable);
        CHECK(c.chi == 0);
        CHECK_FALSE(c.minimal);
        CHECK(delete_degree2(b, fresh_label(a.graph())) == a);

        const auto k = k23_planar();
        CHECK(certify(k).chi == 2);
        CHECK(is_quadrangular(k));
        CHECK(are_isomorphic(k.graph(), eval(GraphExpr::complete_bipartite(2, 3))));
        CHECK_THROWS_AS(insert_degree2(a, {0, 1, 2, 3}, 7), SurgeryError);
    }
}
