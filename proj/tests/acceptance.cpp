// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "quadforge/catalog.hpp"
#include "quadforge/emap_io.hpp"
#include "quadforge/error.hpp"
#include "quadforge/graph_expr.hpp"
#include "quadforge/planner.hpp"
#include "quadforge/search.hpp"
#include "quadforge/surgery.hpp"
#include "support.hpp"

using namespace quadforge;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Collects failures of one criterion; the first few are printed.
struct Verdict {
    int failures = 0;
    std::string first;
    std::string detail;

    void fail(const std::string& why) {
        if (failures++ == 0) first = why;
    }
    void check(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

std::string pair_name(int n, int t, SurfaceKind k) {
    return to_string(k) + " (" + std::to_string(n) + "," + std::to_string(t) + ")";
}

struct Context {
    Catalog catalog{qf_test::source_catalog(), false};
    Planner planner{catalog};
};

/// Certificates of every admissible pair of one kind, with the shared checks.
Verdict generation_sweep(Context& ctx, SurfaceKind kind, int lo, int hi, bool orientable_checks) {
    Verdict v;
    int pairs = 0;
    double worst = 0;
    const auto t0 = Clock::now();
    for (int n = lo; n <= hi; ++n)
        for (int t = 0; t <= n - 4; ++t) {
            const ParamRequest req{n, t, kind};
            if (!admissible(req)) continue;
            ++pairs;
            const auto name = pair_name(n, t, kind);
            const auto t1 = Clock::now();
            try {
                const auto g = ctx.planner.generate(req);
                const auto c = certify(g.embedding);
                v.check(c.n == n && c.t == t, name + ": wrong (n,t)");
                v.check(c.orientable == (kind == SurfaceKind::Orientable), name + ": wrong orientability");
                v.check(c.quadrangular, name + ": not quadrangular");
                v.check(c.face_simple, name + ": not face-simple");
                v.check(!c.universal.empty(), name + ": no universal vertex");
                v.check(c.minimal, name + ": minimality criterion not met");
                const bool independent = qf_test::oracle_face_simple(g.embedding.face_vertex_lists());
                v.check(independent == c.face_simple, name + ": independent face-simplicity check disagrees");
                if (orientable_checks) {
                    v.check(c.min_degree >= 3, name + ": minimum degree below 3");
                    // Orientable quadrangulation of minimum degree >= 3: predicted face-simple.
                    const bool predicted = c.orientable && c.quadrangular && c.min_degree >= 3;
                    v.check(predicted == independent, name + ": prediction for minimum degree >= 3 disagrees");
                }
            } catch (const std::exception& e) {
                v.fail(name + ": " + e.what());
            }
            const double s = seconds_since(t1);
            worst = std::max(worst, s);
            v.check(s < 5.0, name + ": took " + std::to_string(s) + " s");
        }
    std::ostringstream d;
    d << pairs << " pairs, slowest " << worst << " s, total " << seconds_since(t0) << " s";
    v.detail = d.str();
    v.check(seconds_since(t0) < 600, "sweep exceeded 10 minutes");
    return v;
}

Verdict criterion_admissibility() {
    Verdict v;
    int checked = 0;
    for (int n = 1; n <= 60; ++n)
        for (int t = -1; t <= n; ++t)
            for (auto kind : {SurfaceKind::Orientable, SurfaceKind::Nonorientable}) {
                ++checked;
                const bool want = qf_test::oracle_admissible(n, t, kind == SurfaceKind::Orientable);
                v.check(admissible({n, t, kind}) == want, pair_name(n, t, kind) + ": admissibility disagrees with Euler count");
            }
    for (int t = 0; t <= 6; ++t) v.check(!admissible({6, t, SurfaceKind::Orientable}), "orientable n=6 row is not empty");
    v.detail = std::to_string(checked) + " (n,t,kind) triples";
    return v;
}

Verdict criterion_sum_laws(Context& ctx) {
    Verdict v;
    std::vector<std::pair<std::string, Embedding>> pool;
    for (const auto& r : record_table()) pool.emplace_back(r.name, ctx.catalog.get_witness(r.name));
    for (int m : {2, 6, 10})
        for (int n = 2; n <= 6; ++n)
            pool.emplace_back("K_{" + std::to_string(m) + "," + std::to_string(n) + "}", ctx.catalog.build_kmn(m, n));

    std::mt19937_64 rng(20240601);
    auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
    int done = 0;
    int attempts = 0;
    int rejected = 0;
    while (done < 100 && attempts < 100000) {
        ++attempts;
        const auto& [an, a] = pool[pick(pool.size())];
        const auto& [bn, b] = pool[pick(pool.size())];
        const auto& av = a.graph().vertices();
        const int x = av[pick(av.size())];
        const auto d = a.graph().degree(x);
        std::vector<int> candidates;
        for (int y : b.graph().vertices())
            if (b.graph().degree(y) == d) candidates.push_back(y);
        if (d < 3 || candidates.empty()) continue;
        const int y = candidates[pick(candidates.size())];
        const int offset = static_cast<int>(pick(d));
        const bool reflect = pick(2) == 1;
        Embedding s;
        try {
            diamond_site(a, x);
            diamond_site(b, y);
            s = diamond_sum(a, x, b, y, offset, reflect);
        } catch (const SurgeryError&) {
            ++rejected;  // site not a disk, or the gluing would create a parallel edge
            continue;
        }
        ++done;
        const auto what = an + "@" + std::to_string(x) + " + " + bn + "@" + std::to_string(y);
        v.check(euler_characteristic(s) == euler_characteristic(a) + euler_characteristic(b) - 2, what + ": chi law");
        v.check(is_quadrangular(s), what + ": not quadrangular");
        v.check(is_orientable(s) == (is_orientable(a) && is_orientable(b)), what + ": orientability law");
        v.check(s.graph().vertex_count() == a.graph().vertex_count() + b.graph().vertex_count() - 2 - d, what + ": vertex count");
    }
    v.check(done == 100, "only " + std::to_string(done) + " compositions could be drawn");
    v.detail = std::to_string(done) + " compositions (" + std::to_string(rejected) + " rejected draws)";
    return v;
}

Verdict criterion_face_simple_sums(const Context& ctx) {
    Verdict v;
    int applicable = 0;
    for (const auto& e : ctx.planner.sum_events()) {
        if (!e.hypotheses) continue;
        ++applicable;
        v.check(e.face_simple, e.context + ": hypotheses hold but the sum is not face-simple");
    }
    v.check(applicable > 0, "no diamond sum met the hypotheses");
    v.detail = std::to_string(applicable) + " of " + std::to_string(ctx.planner.sum_events().size()) +
               " sums met the hypotheses";
    return v;
}

Verdict criterion_kmn(Context& ctx) {
    Verdict v;
    const auto t0 = Clock::now();
    int built = 0;
    for (int m : {6, 10})
        for (int n = 2; n <= 15; ++n) {
            const auto name = "K_{" + std::to_string(m) + "," + std::to_string(n) + "}";
            try {
                const auto e = ctx.catalog.build_kmn(m, n);
                const auto c = certify(e);
                ++built;
                v.check(e.graph() == eval(GraphExpr::complete_bipartite(m, n)), name + ": wrong graph");
                v.check(c.orientable && c.quadrangular, name + ": not an orientable quadrangulation");
                v.check(c.chi == m + n - m * n / 2, name + ": wrong chi");
                if (n >= 3) v.check(c.face_simple, name + ": not face-simple");
            } catch (const std::exception& e) {
                v.fail(name + ": " + e.what());
            }
        }
    v.check(seconds_since(t0) < 120, "took longer than 2 minutes");
    v.detail = std::to_string(built) + " embeddings in " + std::to_string(seconds_since(t0)) + " s";
    return v;
}

Verdict criterion_handles(Context& ctx) {
    Verdict v;
    const auto p84 = ctx.catalog.get_witness("phi_8_4_star");
    const auto s84 = find_handle_sites(p84, {4, 5, 6, 7});
    v.check(!s84.empty(), "no handle site on the 8-vertex record");
    if (!s84.empty()) {
        const auto c = certify(handle_augment(p84, s84.front()));
        v.check(c.n == 8 && c.t == 0 && c.orientable && c.quadrangular, "handle on the 8-vertex record is not an orientable (8,0)");
    }
    const auto p118 = ctx.catalog.get_witness("phi_11_8_plus_star");
    const auto target = phi_target("phi_11_0_plus_star");
    int chains = 0;
    int exact = 0;
    for (const auto& s1 : find_handle_sites(p118, {1, 2, 3, 4})) {
        const auto mid = handle_augment(p118, s1);
        for (const auto& s2 : find_handle_sites(mid, {5, 6, 7, 8})) {
            const auto fin = handle_augment(mid, s2);
            ++chains;
            if (fin.graph() == target && is_orientable(fin) && is_quadrangular(fin)) ++exact;
        }
    }
    v.check(chains > 0, "no chain of two handle sites on the 12-vertex record");
    v.check(exact == chains, std::to_string(chains - exact) + " handle chains miss the target graph");
    v.detail = std::to_string(s84.size()) + " sites on the 8-vertex record, " + std::to_string(chains) +
               " two-step chains on the 12-vertex record";
    return v;
}

Verdict criterion_sweeps() {
    Verdict v;
    std::ostringstream d;
    const auto t0 = Clock::now();
    for (int n = 3; n <= 8; ++n) {
        const auto r = sweep_face_simple(n, 2, Orientability::Orientable);
        if (n < 8) v.check(!r.witness, "face-simple sphere quadrangulation on " + std::to_string(n) + " vertices");
        if (n == 8) {
            v.check(r.witness.has_value(), "no face-simple sphere quadrangulation on 8 vertices");
            if (r.witness) v.check(are_isomorphic(r.witness->graph(), qf_test::cube_graph()), "8-vertex sphere witness is not the cube");
        }
    }
    const double sphere = seconds_since(t0);
    const auto t1 = Clock::now();
    for (int n = 3; n <= 6; ++n) {
        const auto r = sweep_face_simple(n, 1, Orientability::Nonorientable);
        if (n < 6) v.check(!r.witness, "face-simple projective quadrangulation on " + std::to_string(n) + " vertices");
        if (n == 6) v.check(r.witness.has_value() && is_face_simple(*r.witness), "no face-simple projective quadrangulation on 6 vertices");
    }
    const double projective = seconds_since(t1);
    v.check(sphere < 900 && projective < 900, "sweep exceeded 15 minutes");
    d << "sphere " << sphere << " s, projective plane " << projective << " s";
    v.detail = d.str();
    return v;
}

Verdict criterion_acquisition(Context& ctx) {
    Verdict v;
    std::ostringstream d;
    double slowest_search = 0;
    for (const char* name : {"phi_4_0", "phi_5_0_star", "phi_6_1", "phi_7_0_plus", "phi_7_2_plus", "phi_7_4_plus", "K_6_3",
                             "special_4_2_sphere", "special_6_3_klein"}) {
        const auto& rec = find_record(name);
        const auto t0 = Clock::now();
        bool found = false;
        for (const auto& spec : rec.specs) {
            ExactOptions opt;
            opt.node_budget = 200'000'000;
            const auto r = search_exact(spec, opt);
            if (r.status == SearchStatus::Found && satisfies(*r.embedding, spec)) {
                found = true;
                break;
            }
        }
        const double s = seconds_since(t0);
        slowest_search = std::max(slowest_search, s);
        v.check(found, std::string(name) + ": exact search found no witness");
        v.check(s < 60, std::string(name) + ": exact search took " + std::to_string(s) + " s");
    }
    double slowest_load = 0;
    for (const char* name : {"phi_7_2_plus_star", "phi_8_4_star", "phi_10_1_star", "phi_11_8_plus_star"}) {
        const auto t0 = Clock::now();
        try {
            const auto e = read_emap_file(ctx.catalog.directory() / (std::string(name) + ".emap"));
            v.check(Catalog::matching_spec(find_record(name), e).has_value(), std::string(name) + ": stored witness violates its spec");
        } catch (const std::exception& e) {
            v.fail(std::string(name) + ": " + e.what());
        }
        const double s = seconds_since(t0);
        slowest_load = std::max(slowest_load, s);
        v.check(s < 1.0, std::string(name) + ": re-verification took " + std::to_string(s) + " s");
    }
    d << "slowest small search " << slowest_search << " s, slowest large re-verification " << slowest_load << " s";
    v.detail = d.str();
    return v;
}

Verdict criterion_determinism(Context& ctx) {
    Verdict v;
    for (const auto& r : record_table()) {
        const auto text = read_text_file(ctx.catalog.directory() / (r.name + ".emap"));
        const auto e = parse_emap(text);
        v.check(parse_emap(write_emap(e)) == e, r.name + ": write-parse changes the embedding");
        v.check(write_emap(e) == text, r.name + ": stored text is not in canonical form");
    }
    int runs = 0;
    for (const auto& [n, t, kind] : std::vector<std::tuple<int, int, std::string>>{
             {10, 3, "nonorientable"}, {26, 21, "nonorientable"}, {29, 24, "orientable"}, {14, 7, "orientable"}, {6, 3, "nonorientable"}}) {
        std::string first;
        for (int rep = 0; rep < 2; ++rep) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run({"quadforge", "--catalog", ctx.catalog.directory().string(), "gen", "--n", std::to_string(n),
                                       "--t", std::to_string(t), "--kind", kind},
                                      out, err);
            v.check(code == 0, "gen " + std::to_string(n) + "," + std::to_string(t) + " failed: " + err.str());
            if (rep == 0)
                first = out.str();
            else
                v.check(out.str() == first, "gen " + std::to_string(n) + "," + std::to_string(t) + " is not byte-identical");
            ++runs;
        }
    }
    v.detail = std::to_string(record_table().size()) + " witnesses round-tripped, " + std::to_string(runs) + " gen runs";
    return v;
}

}  // namespace

int main() {
    Context ctx;
    struct Criterion {
        int id;
        const char* title;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "nonorientable pairs 6 <= n <= 26",
         [&] { return generation_sweep(ctx, SurfaceKind::Nonorientable, 6, 26, false); }},
        {2, "orientable pairs 5 <= n <= 29", [&] { return generation_sweep(ctx, SurfaceKind::Orientable, 5, 29, true); }},
        {3, "admissibility arithmetic", [] { return criterion_admissibility(); }},
        {4, "diamond-sum laws", [&] { return criterion_sum_laws(ctx); }},
        {5, "face-simple sums under the sum hypotheses", [&] { return criterion_face_simple_sums(ctx); }},
        {6, "complete bipartite embeddings", [&] { return criterion_kmn(ctx); }},
        {7, "handle augmentation", [&] { return criterion_handles(ctx); }},
        {8, "minimality sweeps", [] { return criterion_sweeps(); }},
        {9, "witness acquisition", [&] { return criterion_acquisition(ctx); }},
        {10, "round trip and determinism", [&] { return criterion_determinism(ctx); }},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto t0 = Clock::now();
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        std::cout << "criterion " << c.id << ": " << (v.failures == 0 ? "PASS" : "FAIL") << " - " << c.title;
        if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
        std::cout << " [" << seconds_since(t0) << " s]\n";
        if (v.failures != 0) {
            std::cout << "  " << v.failures << " failure(s); first: " << v.first << '\n';
            ++failed;
        }
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
