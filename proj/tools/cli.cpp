#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "quadforge/catalog.hpp"
#include "quadforge/certificate.hpp"
#include "quadforge/emap_io.hpp"
#include "quadforge/error.hpp"
#include "quadforge/planner.hpp"
#include "quadforge/search.hpp"
#include "quadforge/surgery.hpp"

namespace quadforge::cli {

namespace {

namespace fs = std::filesystem;

/// Bad usage detected after CLI11 parsing succeeded.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    bool quiet = false;
    std::string catalog_dir;

    std::unique_ptr<Catalog> open_catalog(bool allow_search = true) const {
        const fs::path dir = catalog_dir.empty() ? Catalog::default_directory() : fs::path(catalog_dir);
        return std::make_unique<Catalog>(dir, allow_search);
    }

    /// Emap to `path` or stdout (unless quiet), then the certificate.
    void emit(const Embedding& emb, const std::string& path) const {
        if (!path.empty())
            write_emap_file(path, emb);
        else if (!quiet)
            out << write_emap(emb);
        out << to_text(certify(emb));
    }

    void note(const std::string& line) const {
        if (!quiet) out << line << '\n';
    }
};

std::vector<int> parse_int_list(const std::string& text, std::size_t expected, const std::string& flag) {
    std::vector<int> values;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError(flag + ": '" + item + "' is not an integer");
        }
    }
    if (expected != 0 && values.size() != expected)
        throw UsageError(flag + " expects " + std::to_string(expected) + " comma-separated integers");
    return values;
}

std::string site_text(const HandleSite& s) {
    std::ostringstream o;
    o << "alpha=(" << s.alpha[0] << ',' << s.alpha[1] << ',' << s.alpha[2] << ',' << s.alpha[3] << ") beta=(" << s.beta[0]
      << ',' << s.beta[1] << ',' << s.beta[2] << ',' << s.beta[3] << ')';
    return o.str();
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

// gen ---------------------------------------------------------------------

struct GenArgs {
    int n = 0;
    int t = 0;
    std::string kind;
    bool plan_only = false;
    std::string out;
};

int cmd_gen(const Context& ctx, const GenArgs& a) {
    const ParamRequest req{a.n, a.t, parse_surface_kind(a.kind)};
    const auto p = plan(req);
    if (a.plan_only) {
        ctx.out << to_text(p);
        return kOk;
    }
    auto catalog = ctx.open_catalog();
    Planner planner(*catalog);
    const auto g = planner.generate(req);
    ctx.emit(g.embedding, a.out);
    return kOk;
}

// verify ------------------------------------------------------------------

int cmd_verify(const Context& ctx, const std::string& file, const std::vector<std::string>& expects) {
    std::vector<std::pair<std::string, std::string>> wanted;
    for (const auto& e : expects) {
        const auto eq = e.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--expect takes key=value, got '" + e + "'");
        wanted.emplace_back(e.substr(0, eq), e.substr(eq + 1));
    }
    const auto emb = read_emap_file(file);
    const auto cert = certify(emb);
    ctx.out << to_text(cert);
    int code = kOk;
    for (const auto& issue : consistency_issues(cert)) {
        ctx.err << "inconsistent certificate: " << issue << '\n';
        code = kDomainFailure;
    }
    for (const auto& [key, value] : wanted) {
        std::string got;
        try {
            got = certificate_value(cert, key);
        } catch (const DomainError& ex) {
            throw UsageError(ex.what());
        }
        if (got != value) {
            ctx.err << "expectation failed: " << key << "=" << value << " (certificate has " << key << "=" << got << ")\n";
            code = kDomainFailure;
        }
    }
    return code;
}

// search ------------------------------------------------------------------

struct SearchArgs {
    std::string spec;
    std::string method = "exact";
    std::optional<std::uint64_t> seed;
    int restarts = 64;
    std::uint64_t budget = 0;
    int workers = 1;
    std::string out;
};

SearchResult run_anneal(const WitnessSpec& spec, const SearchArgs& a) {
    AnnealOptions base;
    base.seed = a.seed.value_or(1);
    base.restarts = a.restarts;
    if (a.budget != 0) base.steps_per_restart = a.budget;
    if (a.workers <= 1) return search_anneal(spec, base);

    std::atomic<bool> cancel{false};
    std::vector<SearchResult> results(static_cast<std::size_t>(a.workers));
    {
        std::vector<std::jthread> pool;
        for (int i = 0; i < a.workers; ++i)
            pool.emplace_back([&, i] {
                auto opt = base;
                opt.seed = base.seed + static_cast<std::uint64_t>(i);
                opt.cancel = &cancel;
                results[static_cast<std::size_t>(i)] = search_anneal(spec, opt);
                if (results[static_cast<std::size_t>(i)].status == SearchStatus::Found) cancel = true;
            });
    }
    SearchResult merged;
    for (auto& r : results) {
        merged.nodes += r.nodes;
        if (r.status == SearchStatus::Found && !merged.embedding) {
            merged.status = SearchStatus::Found;
            merged.embedding = std::move(r.embedding);
            merged.seed = r.seed;
        }
    }
    return merged;
}

int cmd_search(const Context& ctx, const SearchArgs& a) {
    if (a.method != "exact" && a.method != "anneal") throw UsageError("--method must be 'exact' or 'anneal'");
    if (a.workers < 1) throw UsageError("--workers must be positive");
    const auto spec = parse_witness_spec(read_text_file(a.spec));
    validate(spec);
    if (trivially_unsatisfiable(spec)) {
        ctx.err << "spec is unsatisfiable: the graph has no embedding meeting its size and orientability constraints\n";
        return kDomainFailure;
    }
    SearchResult r;
    if (a.method == "exact") {
        ExactOptions opt;
        opt.node_budget = a.budget;
        opt.seed = a.seed.value_or(0);
        opt.workers = a.workers;
        r = search_exact(spec, opt);
    } else {
        r = run_anneal(spec, a);
    }
    switch (r.status) {
    case SearchStatus::Found:
        if (!ctx.quiet) ctx.err << "found seed=" << r.seed << " nodes=" << r.nodes << '\n';
        ctx.emit(*r.embedding, a.out);
        return kOk;
    case SearchStatus::None:
        ctx.err << "no embedding satisfies the spec (complete search, " << r.nodes << " nodes)\n";
        return kDomainFailure;
    case SearchStatus::Exhausted:
        break;
    }
    ctx.err << "search budget exhausted after " << r.nodes << " nodes without a witness\n";
    return kDomainFailure;
}

// dual --------------------------------------------------------------------

int cmd_dual(const Context& ctx, const std::string& file) {
    const auto emb = read_emap_file(file);
    const auto d = dual_multigraph(emb);
    if (!ctx.quiet) {
        const bool loops = d.has_loop();
        const bool parallel = d.has_parallel_edges();
        ctx.out << "dual nodes=" << d.node_count << " edges=" << d.edges.size() << " loops=" << yes_no(loops)
                << " parallel=" << yes_no(parallel) << " simple=" << yes_no(!loops && !parallel) << '\n';
        for (std::size_t e = 0; e < d.edges.size(); ++e) ctx.out << "d " << e << ' ' << d.edges[e].first << ' ' << d.edges[e].second << '\n';
    }
    ctx.out << to_text(certify(emb));
    return kOk;
}

// sweep -------------------------------------------------------------------

struct SweepArgs {
    std::string surface;
    int max_n = 0;
    bool force = false;
    int min_degree = 1;
    std::string out_dir;
};

int cmd_sweep(const Context& ctx, const SweepArgs& a) {
    int chi = 0;
    Orientability o{};
    if (a.surface == "sphere") {
        chi = 2;
        o = Orientability::Orientable;
    } else if (a.surface == "projective") {
        chi = 1;
        o = Orientability::Nonorientable;
    } else {
        throw UsageError("--surface must be 'sphere' or 'projective'");
    }
    if (a.max_n > 8 && !a.force) throw UsageError("--max-n above 8 is slow; pass --force to run it anyway");
    if (a.min_degree < 1) throw UsageError("--min-degree must be at least 1");
    std::optional<int> first;
    for (int n = 3; n <= a.max_n; ++n) {
        // Rotation-system enumeration stops at 8 vertices; above that only the
        // face search applies, which needs minimum degree 2 (no loss: face-simple
        // quadrangulations have minimum degree 3).
        const int md = n > 8 ? std::max(a.min_degree, 2) : a.min_degree;
        const auto rep = sweep_face_simple(n, chi, o, md);
        ctx.out << "n=" << n << " graphs=" << rep.graphs << " face_simple=" << yes_no(rep.witness.has_value()) << '\n';
        if (rep.witness) {
            if (!first) first = n;
            if (!a.out_dir.empty()) {
                fs::create_directories(a.out_dir);
                write_emap_file(fs::path(a.out_dir) / (a.surface + "_n" + std::to_string(n) + ".emap"), *rep.witness);
            }
        }
    }
    if (first)
        ctx.out << "smallest face-simple quadrangulation: n=" << *first << '\n';
    else
        ctx.out << "no face-simple quadrangulation with n <= " << a.max_n << '\n';
    return kOk;
}

// catalog -----------------------------------------------------------------

int cmd_catalog_build(const Context& ctx) {
    auto catalog = ctx.open_catalog();
    catalog->build();
    for (const auto& m : catalog->manifest()) ctx.note(m.name + " " + m.provenance);
    ctx.note("catalog: " + catalog->directory().string());
    return kOk;
}

int cmd_catalog_verify(const Context& ctx) {
    auto catalog = ctx.open_catalog(false);
    int code = kOk;
    for (const auto& v : catalog->verify_all()) {
        if (v.ok) {
            ctx.note("ok " + v.name);
        } else {
            ctx.err << "FAIL " << v.name << ": " << v.message << '\n';
            code = kDomainFailure;
        }
    }
    return code;
}

int cmd_catalog_list(const Context& ctx) {
    auto catalog = ctx.open_catalog(false);
    for (const auto& r : record_table()) {
        const bool present = fs::exists(catalog->directory() / (r.name + ".emap"));
        ctx.out << r.name << ' ' << r.provenance_text() << ' ' << (present ? "present" : "missing") << '\n';
    }
    return kOk;
}

// surgery -----------------------------------------------------------------

struct SurgeryArgs {
    std::string file_a;
    int v = 0;
    std::string file_b;
    int w = 0;
    int offset = 0;
    bool reflect = false;
    std::string cycle;
    std::optional<std::size_t> site;
    bool list = false;
    int vertex = 0;
    std::string face;
    int corner = 0;
    std::string out;
};

int cmd_diamond(const Context& ctx, const SurgeryArgs& a) {
    const auto x = read_emap_file(a.file_a);
    const auto y = read_emap_file(a.file_b);
    if (!ctx.quiet && face_simple_sum_hypotheses(x, a.v, y, a.w)) ctx.note("face-simple sum hypotheses hold");
    ctx.emit(diamond_sum(x, a.v, y, a.w, a.offset, a.reflect), a.out);
    return kOk;
}

int cmd_handle(const Context& ctx, const SurgeryArgs& a) {
    const auto emb = read_emap_file(a.file_a);
    const auto c = parse_int_list(a.cycle, 4, "--cycle");
    const auto sites = find_handle_sites(emb, {c[0], c[1], c[2], c[3]});
    if (a.list) {
        for (std::size_t i = 0; i < sites.size(); ++i) ctx.out << "site " << i << ' ' << site_text(sites[i]) << '\n';
        return sites.empty() ? kDomainFailure : kOk;
    }
    if (sites.empty()) {
        ctx.err << "no handle site adds the cycle " << a.cycle << '\n';
        return kDomainFailure;
    }
    const std::size_t k = a.site.value_or(0);
    if (k >= sites.size())
        throw UsageError("--site " + std::to_string(k) + " out of range (" + std::to_string(sites.size()) + " sites)");
    ctx.emit(handle_augment(emb, sites[k]), a.out);
    return kOk;
}

int cmd_delete(const Context& ctx, const SurgeryArgs& a) {
    ctx.emit(delete_degree2(read_emap_file(a.file_a), a.vertex), a.out);
    return kOk;
}

int cmd_insert(const Context& ctx, const SurgeryArgs& a) {
    ctx.emit(insert_degree2(read_emap_file(a.file_a), parse_int_list(a.face, 4, "--face"), a.corner), a.out);
    return kOk;
}

// ------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constructs and certifies face-simple minimal quadrangulations", "quadforge"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "quadforge 0.1.0");

    Context ctx{out, err, false, {}};
    app.add_flag("-q,--quiet", ctx.quiet, "Print only certificates");
    app.add_option("--catalog", ctx.catalog_dir, "Catalog directory (default: $QUADFORGE_CATALOG or the bundled catalog)");

    std::function<int()> action;
    auto bind = [&](CLI::App* sub, std::function<int()> f) { sub->callback([&action, f] { action = f; }); };

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Construct an (n,t)-quadrangulation");
    g->add_option("--n", gen.n, "Vertex count")->required();
    g->add_option("--t", gen.t, "Edges missing from K_n")->required();
    g->add_option("--kind", gen.kind, "orientable or nonorientable")->required();
    g->add_flag("--plan-only", gen.plan_only, "Print the construction plan and stop");
    g->add_option("--out", gen.out, "Write the embedding here instead of stdout");
    bind(g, [&] { return cmd_gen(ctx, gen); });

    std::string verify_file;
    std::vector<std::string> expects;
    auto* v = app.add_subcommand("verify", "Certify an embedding file");
    v->add_option("file", verify_file, "Embedding file")->required();
    v->add_option("--expect", expects, "Required certificate value, key=value");
    bind(v, [&] { return cmd_verify(ctx, verify_file, expects); });

    SearchArgs search;
    auto* s = app.add_subcommand("search", "Search for an embedding meeting a spec");
    s->add_option("--spec", search.spec, "Spec file")->required();
    s->add_option("--method", search.method, "exact or anneal");
    s->add_option("--seed", search.seed, "Seed (exact: 0 runs a complete search)");
    s->add_option("--restarts", search.restarts, "Annealing restarts");
    s->add_option("--budget", search.budget, "Exact: node budget; anneal: steps per restart (0 = default)");
    s->add_option("--workers", search.workers, "Parallel workers");
    s->add_option("--out", search.out, "Write the embedding here instead of stdout");
    bind(s, [&] { return cmd_search(ctx, search); });

    SurgeryArgs sa;
    auto* surgery = app.add_subcommand("surgery", "Apply one surgery to embedding files");
    surgery->require_subcommand(1);
    auto* dia = surgery->add_subcommand("diamond", "Diamond sum of A at v and B at w");
    dia->add_option("a", sa.file_a)->required();
    dia->add_option("v", sa.v)->required();
    dia->add_option("b", sa.file_b)->required();
    dia->add_option("w", sa.w)->required();
    dia->add_option("--offset", sa.offset, "Boundary identification offset");
    dia->add_flag("--reflect", sa.reflect, "Identify the boundaries in the same direction");
    auto* han = surgery->add_subcommand("handle", "Handle augmentation adding a 4-cycle");
    han->add_option("file", sa.file_a)->required();
    han->add_option("--cycle", sa.cycle, "a,b,c,d")->required();
    han->add_option("--site", sa.site, "Index among the available sites (default 0)");
    han->add_flag("--list", sa.list, "List the available sites");
    auto* del = surgery->add_subcommand("delete", "Delete a degree-2 vertex");
    del->add_option("file", sa.file_a)->required();
    del->add_option("--vertex", sa.vertex)->required();
    auto* ins = surgery->add_subcommand("insert", "Insert a degree-2 vertex into a face");
    ins->add_option("file", sa.file_a)->required();
    ins->add_option("--face", sa.face, "a,b,c,d")->required();
    ins->add_option("--corner", sa.corner)->required();
    for (auto* sub : {dia, han, del, ins}) sub->add_option("--out", sa.out, "Write the embedding here instead of stdout");
    bind(dia, [&] { return cmd_diamond(ctx, sa); });
    bind(han, [&] { return cmd_handle(ctx, sa); });
    bind(del, [&] { return cmd_delete(ctx, sa); });
    bind(ins, [&] { return cmd_insert(ctx, sa); });

    auto* cat = app.add_subcommand("catalog", "Manage the witness catalog");
    cat->require_subcommand(1);
    bind(cat->add_subcommand("build", "Materialize missing records"), [&] { return cmd_catalog_build(ctx); });
    bind(cat->add_subcommand("verify", "Re-certify every stored record"), [&] { return cmd_catalog_verify(ctx); });
    bind(cat->add_subcommand("list", "List records"), [&] { return cmd_catalog_list(ctx); });

    std::string dual_file;
    auto* d = app.add_subcommand("dual", "Print the dual multigraph");
    d->add_option("file", dual_file)->required();
    bind(d, [&] { return cmd_dual(ctx, dual_file); });

    int km = 0;
    int kn = 0;
    std::string kmn_out;
    auto* k = app.add_subcommand("kmn", "Quadrangular embedding of K_{m,n}");
    k->add_option("--m", km, "m = 2 mod 4")->required();
    k->add_option("--n", kn, "n >= 2")->required();
    k->add_option("--out", kmn_out, "Write the embedding here instead of stdout");
    bind(k, [&] {
        ctx.emit(ctx.open_catalog()->build_kmn(km, kn), kmn_out);
        return int{kOk};
    });

    SweepArgs sweep;
    auto* sw = app.add_subcommand("sweep", "Exhaustive search for the smallest face-simple quadrangulation");
    sw->add_option("--surface", sweep.surface, "sphere or projective")->required();
    sw->add_option("--max-n", sweep.max_n, "Largest vertex count")->required();
    sw->add_flag("--force", sweep.force, "Allow --max-n above 8");
    sw->add_option("--min-degree", sweep.min_degree, "Skip graphs of smaller minimum degree");
    sw->add_option("--out-dir", sweep.out_dir, "Write witnesses here");
    bind(sw, [&] { return cmd_sweep(ctx, sweep); });

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }
    return action ? action() : kInputError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args.empty() ? std::vector<std::string>{"quadforge"} : args, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDomainFailure;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kDomainFailure;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace quadforge::cli
