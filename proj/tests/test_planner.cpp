#include <doctest.h>

#include "quadforge/catalog.hpp"
#include "quadforge/error.hpp"
#include "quadforge/planner.hpp"
#include "support.hpp"

using namespace quadforge;

namespace {

constexpr auto O = SurfaceKind::Orientable;
constexpr auto N = SurfaceKind::Nonorientable;

Catalog& catalog() {
    static Catalog c(qf_test::source_catalog(), false);
    return c;
}

/// Structural soundness of a plan: each step adds 4 (join on 7 + 1 vertices) or
/// 8 (join on 11 + 1) vertices and i missing edges to its child, the nonorientable
/// recursion may bottom out in the orientable torus record, and every leaf is a
/// stored record certifying exactly its annotated pair.
void check_plan(const PlanNode& node) {
    using T = PlanNode::Type;
    const auto& r = node.result;
    CAPTURE(r.n);
    CAPTURE(r.t);
    if (node.type == T::Base || node.type == T::Special) {
        REQUIRE(node.children.empty());
        const auto c = certify(catalog().get_witness(node.record));
        CHECK(c.n == r.n);
        CHECK(c.t == r.t);
        CHECK(c.orientable == (r.kind == O));
        return;
    }
    REQUIRE(node.children.size() == 1);
    const auto& child = node.children[0].result;
    const int grow = node.type == T::OrientStep ? 8 : 4;
    CHECK(child.n == r.n - grow);
    CHECK(child.t == r.t - node.i);
    CHECK(child.t >= 0);
    if (node.type == T::NonorientStep) {
        CHECK(r.kind == N);
        CHECK((node.i == 0 || node.i == 2 || node.i == 4));
    } else {
        CHECK(r.kind == O);
        CHECK(child.kind == O);
        if (node.type == T::OrientStep) CHECK((node.i == 0 || node.i == 4 || node.i == 8));
        if (node.type == T::IntermediateStep) CHECK(node.i == 2);
    }
    check_plan(node.children[0]);
}

}  // namespace

TEST_SUITE("planner") {
    TEST_CASE("admissibility examples") {
        for (int t = 0; t <= 2; ++t) CHECK_FALSE(admissible({6, t, O}));
        CHECK(admissible({9, 2, O}));
        CHECK(admissible({6, 1, N}));
        CHECK_FALSE(admissible({6, 2, N}));
        CHECK(is_special({4, 2, O}));
        CHECK(is_special({6, 3, N}));
        CHECK_FALSE(admissible({4, 2, O}));
        CHECK_FALSE(admissible({10, 7, N}));
        CHECK_FALSE(admissible({4, 0, N}));
    }

    TEST_CASE("admissibility matches the Euler count") {
        for (int n = 1; n <= 60; ++n)
            for (int t = -1; t <= n; ++t)
                for (auto kind : {O, N}) {
                    CAPTURE(n);
                    CAPTURE(t);
                    CHECK(admissible({n, t, kind}) == qf_test::oracle_admissible(n, t, kind == O));
                }
    }

    TEST_CASE("rejection messages cite the congruence") {
        const auto why = inadmissibility_reason({6, 0, O});
        CHECK(why.find("modulo 4") != std::string::npos);
        CHECK(why.find("n(n-5)/2") != std::string::npos);
        CHECK(inadmissibility_reason({8, 1, N}).find("modulo 2") != std::string::npos);
        CHECK(inadmissibility_reason({9, 2, O}).empty());
        CHECK_THROWS_AS(plan({6, 0, O}), DomainError);
        CHECK_THROWS_AS(parse_surface_kind("flat"), DomainError);
    }

    TEST_CASE("plan shapes") {
        CHECK(to_text(plan({10, 3, N})) == "NonorientStep(i=2) (10,3) nonorientable\n  Base(phi_6_1) (6,1) nonorientable\n");
        CHECK(to_text(plan({13, 4, O})) == "OrientStep(i=4) (13,4) orientable\n  Base(phi_5_0_star) (5,0) orientable\n");
        CHECK(to_text(plan({23, 11, O})) ==
              "OrientStep(i=8) (23,11) orientable\n  OrientStep(i=0) (15,3) orientable\n    Base(q_7_3_star) (7,3) orientable\n");
        CHECK(to_text(plan({20, 10, N})) ==
              "NonorientStep(i=4) (20,10) nonorientable\n"
              "  NonorientStep(i=4) (16,6) nonorientable\n"
              "    NonorientStep(i=2) (12,2) nonorientable\n"
              "      NonorientStep(i=0) (8,0) nonorientable\n"
              "        Base(phi_4_0) (4,0) nonorientable\n");
        CHECK(to_text(plan({10, 5, O})) == "IntermediateStep (10,5) orientable\n  Base(q_6_3_star) (6,3) orientable\n");
        CHECK(plan({4, 2, O}).type == PlanNode::Type::Special);
        CHECK(plan({6, 3, N}).record == "special_6_3_klein");
    }

    TEST_CASE("every admissible plan up to 60 vertices is sound") {
        for (int n = 4; n <= 60; ++n)
            for (int t = 0; t <= n - 4; ++t)
                for (auto kind : {O, N})
                    if (admissible({n, t, kind})) check_plan(plan({n, t, kind}));
    }

    TEST_CASE("execution") {
        Planner p(catalog());
        const auto e8 = p.execute(plan({8, 0, N}));
        const auto c8 = certify(e8);
        CHECK(c8.n == 8);
        CHECK(c8.edges == 28);
        CHECK(c8.chi == -6);
        CHECK_FALSE(c8.orientable);
        CHECK(c8.face_simple);
        CHECK_FALSE(c8.universal.empty());
        CHECK(p.execute(plan({6, 1, N})) == catalog().get_witness("phi_6_1"));
        const auto e5 = p.execute(plan({5, 0, O}));
        CHECK(e5 == catalog().get_witness("phi_5_0_star"));
        CHECK(euler_characteristic(e5) == 0);
        CHECK(p.sum_events().size() == 2);
        for (const auto& ev : p.sum_events()) {
            CHECK(ev.hypotheses);
            CHECK(ev.face_simple);
        }
    }

    TEST_CASE("generation") {
        Planner p(catalog());
        const auto g = p.generate({20, 10, N});
        CHECK(g.certificate.n == 20);
        CHECK(g.certificate.t == 10);
        CHECK_FALSE(g.certificate.orientable);
        CHECK(g.certificate.face_simple);
        CHECK(g.certificate.minimal);
        CHECK_FALSE(g.certificate.universal.empty());

        const auto c4 = p.generate({4, 2, O});
        CHECK_FALSE(c4.certificate.face_simple);
        CHECK(c4.certificate.chi == 2);
        const auto klein = p.generate({6, 3, N});
        CHECK(klein.certificate.face_simple);
        CHECK(klein.certificate.chi == 0);
        CHECK_FALSE(klein.certificate.orientable);

        const auto o = p.generate({21, 8, O});
        CHECK(o.certificate.orientable);
        CHECK(o.certificate.min_degree >= 3);
        CHECK(o.certificate.face_simple);
        CHECK_THROWS_AS(p.generate({21, 9, O}), DomainError);
    }

    TEST_CASE("generation is deterministic across planners") {
        Planner a(catalog());
        Planner b(catalog());
        for (const ParamRequest r : {ParamRequest{14, 7, O}, ParamRequest{17, 4, N}, ParamRequest{29, 24, O}})
            CHECK(a.generate(r).embedding == b.generate(r).embedding);
    }

    TEST_CASE("pivot vertex") {
        CHECK(pivot_vertex(catalog().get_witness("phi_5_0_star")) == 0);
        CHECK_THROWS_AS(pivot_vertex(qf_test::c4_sphere()), DomainError);
        const auto e = catalog().get_witness("phi_6_1");
        const int v = pivot_vertex(e);
        CHECK(e.graph().degree(v) == 5);
    }
}
