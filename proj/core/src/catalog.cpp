#include "quadforge/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "quadforge/emap_io.hpp"
#include "quadforge/error.hpp"
#include "quadforge/graph_expr.hpp"
#include "quadforge/surgery.hpp"

#ifndef QUADFORGE_SOURCE_CATALOG
#define QUADFORGE_SOURCE_CATALOG "catalog"
#endif

namespace quadforge {

namespace {

using Kind = Predicate::Kind;

WitnessSpec make_spec(Graph g, Orientability o, std::vector<Predicate> preds) {
    WitnessSpec s;
    s.chi = static_cast<int>(g.vertex_count()) - static_cast<int>(g.edge_count()) / 2;
    s.graph = std::move(g);
    s.orientability = o;
    s.predicates = std::move(preds);
    return s;
}

// Target of a "+" record after deleting z; x and y stay non-adjacent.
Graph without_vertex(const Graph& g, int z) {
    std::vector<int> vs;
    for (int v : g.vertices())
        if (v != z) vs.push_back(v);
    std::vector<VertexPair> es;
    for (const auto& e : g.edges())
        if (e.u != z && e.v != z) es.push_back(e);
    return Graph(vs, es);
}

Predicate fs() { return {Kind::FaceSimple, {}}; }
Predicate universal() { return {Kind::UniversalVertex, {}}; }
Predicate nearly(int v) { return {Kind::NearlyFaceSimpleExcept, {v}}; }
Predicate del_fs(int z) { return {Kind::DeleteDegree2FaceSimple, {z}}; }
Predicate handles(std::vector<int> cycles) { return {Kind::HandleSites, std::move(cycles)}; }

CatalogRecord searched(std::string name, std::string expr, std::vector<WitnessSpec> specs) {
    CatalogRecord r;
    r.name = std::move(name);
    r.expression = std::move(expr);
    r.specs = std::move(specs);
    return r;
}

CatalogRecord derived(std::string name, std::string expr, std::vector<WitnessSpec> specs, std::string op,
                      std::string parent) {
    CatalogRecord r = searched(std::move(name), std::move(expr), std::move(specs));
    r.provenance = CatalogRecord::Provenance::Derived;
    r.operation = std::move(op);
    r.parents = {std::move(parent)};
    return r;
}

std::vector<CatalogRecord> build_table() {
    using O = Orientability;
    std::vector<CatalogRecord> t;
    {
        std::vector<WitnessSpec> alts;
        for (int v = 0; v < 4; ++v) alts.push_back(make_spec(phi_target("phi_4_0"), O::Nonorientable, {nearly(v)}));
        t.push_back(searched("phi_4_0", "K(4)", alts));
    }
    t.push_back(searched("phi_5_0_star", "K(5)", {make_spec(phi_target("phi_5_0_star"), O::Orientable, {fs()})}));
    t.push_back(searched("phi_6_1", "delete(K(6), 4-5)",
                         {make_spec(phi_target("phi_6_1"), O::Nonorientable, {fs(), universal()})}));
    for (int i : {0, 2, 4}) {
        const std::string name = "phi_7_" + std::to_string(i) + "_plus";
        std::vector<Predicate> preds{nearly(5)};
        if (i != 4) preds.push_back(del_fs(7));
        t.push_back(searched(name, "subdivided K1 + H(" + std::to_string(i) + ") block with x=5, y=6, z=7",
                             {make_spec(phi_target(name), O::Nonorientable, preds)}));
    }
    t.push_back(searched("phi_7_2_plus_star", "subdivided K1 + (K4 minus two edges) with x=5, y=6, z=7",
                         {make_spec(phi_7_2_plus_star_variant(0), O::Orientable, {nearly(5), del_fs(7)}),
                          make_spec(phi_7_2_plus_star_variant(1), O::Orientable, {nearly(5), del_fs(7)})}));
    t.push_back(searched("phi_8_4_star", "K(8) minus the 4-cycle (4 5 6 7)",
                         {make_spec(phi_target("phi_8_4_star"), O::Orientable,
                                    {fs(), universal(), handles({4, 5, 6, 7})})}));
    t.push_back(searched("phi_10_1_star", "delete(K(10), 8-9)",
                         {make_spec(phi_target("phi_10_1_star"), O::Orientable, {fs(), universal()})}));
    t.push_back(searched("phi_11_8_plus_star", "subdivided K1 + J(8) block with x=9, y=10, z=11",
                         {make_spec(phi_target("phi_11_8_plus_star"), O::Orientable,
                                    {nearly(9), handles({1, 2, 3, 4, 5, 6, 7, 8})})}));
    t.push_back(searched("K_6_3", "K(6,3)",
                         {make_spec(eval(GraphExpr::complete_bipartite(6, 3)), O::Orientable, {fs()})}));
    t.push_back(searched("special_4_2_sphere", "C(4)", {make_spec(eval(GraphExpr::cycle(4)), O::Orientable, {})}));
    t.push_back(searched("special_6_3_klein", "delete(K(6), 3-4, 3-5, 4-5)",
                         {make_spec(eval(parse_graph_expr("delete(K(6), 3-4, 3-5, 4-5)")), O::Nonorientable,
                                    {fs(), universal()})}));

    // derived records
    {
        auto r = derived("phi_11_4_plus_star", "subdivided K1 + J(4) block with x=9, y=10, z=11",
                         {make_spec(phi_target("phi_11_4_plus_star"), O::Orientable,
                                    {nearly(9), del_fs(11), handles({5, 6, 7, 8})})},
                         "handle", "phi_11_8_plus_star");
        r.cycle = {1, 2, 3, 4};
        t.push_back(r);
        auto s = derived("phi_11_0_plus_star", "subdivided K1 + K(8) block with x=9, y=10, z=11",
                         {make_spec(phi_target("phi_11_0_plus_star"), O::Orientable, {nearly(9), del_fs(11)})},
                         "handle", "phi_11_4_plus_star");
        s.cycle = {5, 6, 7, 8};
        t.push_back(s);
    }
    auto deletion = [&](const std::string& name, const std::string& parent, int z, O o) {
        const auto& p = *std::find_if(t.begin(), t.end(), [&](const CatalogRecord& r) { return r.name == parent; });
        std::vector<WitnessSpec> alts;
        for (const auto& ps : p.specs) alts.push_back(make_spec(without_vertex(ps.graph, z), o, {fs(), universal()}));
        auto r = derived(name, parent + " minus vertex " + std::to_string(z), alts, "delete_degree2",
                         parent);
        r.vertex = z;
        t.push_back(r);
    };
    deletion("q_7_1", "phi_7_0_plus", 7, O::Nonorientable);
    deletion("q_7_3", "phi_7_2_plus", 7, O::Nonorientable);
    deletion("q_7_3_star", "phi_7_2_plus_star", 7, O::Orientable);
    deletion("q_11_5_star", "phi_11_4_plus_star", 11, O::Orientable);
    deletion("q_11_1_star", "phi_11_0_plus_star", 11, O::Orientable);
    {
        auto r = derived("q_8_0_star", "K(8)", {make_spec(eval(GraphExpr::complete(8)), O::Orientable, {fs(), universal()})},
                         "handle", "phi_8_4_star");
        r.cycle = {4, 5, 6, 7};
        t.push_back(r);
    }
    t.push_back(derived("q_6_3_star", "K(5) plus vertex 5 joined to 0 and 1",
                        {make_spec(Graph::from_edges(std::vector<VertexPair>{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3},
                                                                             {1, 4}, {2, 3}, {2, 4}, {3, 4}, {0, 5}, {1, 5}}),
                                   O::Orientable, {universal()})},
                        "insert_degree2", "phi_5_0_star"));
    return t;
}

std::string fail_text(const CatalogRecord& r, const Embedding& emb) {
    std::string why;
    std::string all;
    for (const auto& s : r.specs) {
        satisfies(emb, s, &why);
        all += (all.empty() ? "" : "; ") + why;
    }
    return all;
}

}  // namespace

std::string CatalogRecord::provenance_text() const {
    if (provenance == Provenance::Searched) return "searched";
    std::string out = "derived:" + operation + "(";
    for (std::size_t i = 0; i < parents.size(); ++i) out += (i ? "," : "") + parents[i];
    return out + ")";
}

const std::vector<CatalogRecord>& record_table() {
    static const std::vector<CatalogRecord> table = build_table();
    return table;
}

const CatalogRecord& find_record(const std::string& name) {
    for (const auto& r : record_table())
        if (r.name == name) return r;
    throw DomainError("unknown catalog record '" + name + "'");
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string spec_hash(const WitnessSpec& spec) { return hex64(fnv1a64(to_text(spec))); }

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
    std::vector<ManifestEntry> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        ManifestEntry e;
        std::string extra;
        if (!(ls >> e.name >> e.spec_hash >> e.file_hash >> e.provenance) || (ls >> extra))
            throw FormatError("manifest line needs <name> <spec-hash> <file-hash> <provenance>", no, "manifest.txt");
        out.push_back(std::move(e));
    }
    return out;
}

std::string write_manifest(const std::vector<ManifestEntry>& entries) {
    std::string out;
    for (const auto& e : entries) out += e.name + ' ' + e.spec_hash + ' ' + e.file_hash + ' ' + e.provenance + '\n';
    return out;
}

Catalog::Catalog(std::filesystem::path directory, bool allow_search)
    : dir_(std::move(directory)), allow_search_(allow_search) {}

std::filesystem::path Catalog::default_directory() {
    if (const char* env = std::getenv("QUADFORGE_CATALOG"); env && *env) return env;
    return QUADFORGE_SOURCE_CATALOG;
}

std::optional<WitnessSpec> Catalog::matching_spec(const CatalogRecord& record, const Embedding& emb) {
    for (const auto& s : record.specs)
        if (satisfies(emb, s)) return s;
    return std::nullopt;
}

std::vector<ManifestEntry> Catalog::manifest() const {
    const auto path = dir_ / "manifest.txt";
    if (!std::filesystem::exists(path)) return {};
    return parse_manifest(read_text_file(path));
}

void Catalog::record_manifest(const CatalogRecord& record, const Embedding& emb, const std::string& file_text) {
    const auto spec = matching_spec(record, emb);
    ManifestEntry entry{record.name, spec ? spec_hash(*spec) : std::string(16, '0'), hex64(fnv1a64(file_text)),
                        record.provenance_text()};
    auto entries = manifest();
    bool replaced = false;
    for (auto& e : entries)
        if (e.name == record.name) {
            if (e == entry) return;
            e = entry;
            replaced = true;
        }
    if (!replaced) entries.push_back(entry);
    // keep table order
    std::vector<ManifestEntry> ordered;
    for (const auto& r : record_table())
        for (const auto& e : entries)
            if (e.name == r.name) ordered.push_back(e);
    write_text_file_atomic(dir_ / "manifest.txt", write_manifest(ordered));
}

Embedding Catalog::get_witness(const std::string& name) {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
    const auto& record = find_record(name);
    const auto path = dir_ / (name + ".emap");
    Embedding emb;
    if (std::filesystem::exists(path)) {
        try {
            emb = read_emap_file(path);
        } catch (const FormatError& ex) {
            throw CatalogError("record " + name + ": witness file is corrupt: " + ex.what());
        }
        if (!matching_spec(record, emb))
            throw CatalogError("record " + name + ": stored witness violates its spec (" + fail_text(record, emb) + ")");
    } else {
        emb = materialize(record);
        std::filesystem::create_directories(dir_);
        const auto text = write_emap(emb);
        write_text_file_atomic(path, text);
        record_manifest(record, emb, text);
    }
    cache_.emplace(name, emb);
    return emb;
}

Embedding Catalog::materialize(const CatalogRecord& record) {
    if (record.provenance == CatalogRecord::Provenance::Derived) return derive(record);
    if (!allow_search_) throw CatalogError("record " + record.name + ": witness missing and search is disabled");
    constexpr std::uint64_t budget = 200'000'000;
    std::string tried;
    for (const auto& spec : record.specs) {
        ExactOptions options;
        options.node_budget = budget;
        const auto result = search_exact(spec, options);
        if (result.status == SearchStatus::Found) return *result.embedding;
        tried += "\n" + to_text(spec) + "-> " + (result.status == SearchStatus::None ? "none" : "budget exhausted") +
                 " after " + std::to_string(result.nodes) + " nodes";
    }
    throw CatalogError("record " + record.name + ": search failed (node budget " + std::to_string(budget) +
                       ") for every spec:" + tried);
}

Embedding Catalog::derive(const CatalogRecord& record) {
    const Embedding parent = get_witness(record.parents.at(0));
    auto accept = [&](const Embedding& e) { return matching_spec(record, e).has_value(); };
    if (record.operation == "delete_degree2") {
        auto e = delete_degree2(parent, record.vertex);
        if (accept(e)) return e;
        throw CatalogError("record " + record.name + ": deletion result violates its spec (" + fail_text(record, e) + ")");
    }
    if (record.operation == "handle") {
        for (const auto& site : find_handle_sites(parent, record.cycle)) {
            auto e = handle_augment(parent, site);
            if (accept(e)) return e;
        }
        throw CatalogError("record " + record.name + ": no handle site of " + record.parents[0] + " meets the spec");
    }
    if (record.operation == "insert_degree2") {
        for (const auto& face : parent.face_vertex_lists()) {
            for (std::size_t k = 0; k < face.size(); ++k) {
                const int p = face[k];
                const int r = face[(k + 2) % face.size()];
                Embedding e;
                try {
                    e = insert_degree2(parent, face, p);
                } catch (const SurgeryError&) {
                    continue;
                }
                const int z = fresh_label(parent.graph());
                std::map<int, int> map{{p, 0}, {r, 1}, {z, static_cast<int>(parent.graph().vertex_count())}};
                int next = 2;
                for (int v : parent.graph().vertices())
                    if (v != p && v != r) map[v] = next++;
                auto relabeled = relabel(e, map);
                if (accept(relabeled)) return relabeled;
            }
        }
        throw CatalogError("record " + record.name + ": no insertion into " + record.parents[0] + " meets the spec");
    }
    throw CatalogError("record " + record.name + ": unknown operation " + record.operation);
}

void Catalog::build() {
    for (const auto& r : record_table()) {
        const auto e = get_witness(r.name);
        const auto path = dir_ / (r.name + ".emap");
        std::lock_guard lock(mu_);
        record_manifest(r, e, read_text_file(path));
    }
}

std::vector<VerifyEntry> Catalog::verify_all() {
    std::vector<VerifyEntry> report;
    std::map<std::string, ManifestEntry> listed;
    try {
        for (auto& e : manifest()) listed[e.name] = e;
    } catch (const FormatError& ex) {
        report.push_back({"manifest", false, ex.what()});
    }
    // a fresh, search-free view so that verification reads only what is on disk
    Catalog disk(dir_, false);
    for (const auto& r : record_table()) {
        VerifyEntry entry{r.name, false, {}};
        const auto path = dir_ / (r.name + ".emap");
        try {
            if (!std::filesystem::exists(path)) throw CatalogError("witness file missing");
            const auto text = read_text_file(path);
            const auto emb = parse_emap(text);
            const auto spec = matching_spec(r, emb);
            if (!spec) throw CatalogError("violates its spec (" + fail_text(r, emb) + ")");
            if (write_emap(emb) != text) throw CatalogError("file is not in canonical form");
            const auto it = listed.find(r.name);
            if (it == listed.end()) throw CatalogError("not listed in the manifest");
            if (it->second.spec_hash != spec_hash(*spec)) throw CatalogError("manifest spec hash mismatch");
            if (it->second.file_hash != hex64(fnv1a64(text))) throw CatalogError("manifest file hash mismatch");
            if (it->second.provenance != r.provenance_text()) throw CatalogError("manifest provenance mismatch");
            if (r.provenance == CatalogRecord::Provenance::Derived && write_emap(disk.derive(r)) != text)
                throw CatalogError("does not regenerate identically from " + r.parents[0]);
            entry.ok = true;
            entry.message = "ok (" + r.provenance_text() + ")";
        } catch (const Error& ex) {
            entry.message = ex.what();
        }
        report.push_back(std::move(entry));
    }
    return report;
}

Embedding canonical_bipartite_labels(const Embedding& emb, int m) {
    const auto& g = emb.graph();
    std::map<int, int> side;
    std::vector<int> todo{g.vertices().front()};
    side[todo.front()] = 0;
    while (!todo.empty()) {
        const int v = todo.back();
        todo.pop_back();
        for (int u : g.neighbors(v)) {
            if (!side.count(u)) {
                side[u] = 1 - side[v];
                todo.push_back(u);
            } else if (side[u] == side[v]) {
                throw StructureError("graph is not bipartite");
            }
        }
    }
    std::vector<int> cls[2];
    for (int v : g.vertices()) cls[side.at(v)].push_back(v);
    int a = static_cast<int>(cls[0].size()) == m ? 0 : 1;
    if (static_cast<int>(cls[a].size()) != m) throw StructureError("no side of size " + std::to_string(m));
    std::map<int, int> map;
    int next = 0;
    for (int v : cls[a]) map[v] = next++;
    for (int v : cls[1 - a]) map[v] = next++;
    return relabel(emb, map);
}

Embedding Catalog::build_kmn(int m, int n) {
    if (m < 2 || m % 4 != 2) throw DomainError("K_{m,n} builder needs m = 2 (mod 4), got m = " + std::to_string(m));
    if (n < 2) throw DomainError("K_{m,n} builder needs n >= 2, got n = " + std::to_string(n));
    std::lock_guard lock(mu_);
    if (auto it = kmn_.find({m, n}); it != kmn_.end()) return it->second;
    Embedding out;
    if (n == 2 || m == 2) {
        // planar: the 2-side sits at the poles
        const int k = m == 2 ? n : m;
        const int pole0 = m == 2 ? 0 : m, pole1 = pole0 + 1;
        const int base = m == 2 ? 2 : 0;
        std::vector<std::vector<int>> faces;
        for (int i = 0; i < k; ++i) faces.push_back({pole0, base + i, pole1, base + (i + 1) % k});
        out = Embedding::from_faces(faces);
    } else if (n == 3 && m == 6) {
        out = get_witness("K_6_3");
    } else if (n == 3) {
        out = canonical_bipartite_labels(diamond_sum(build_kmn(m - 4, 3), 0, get_witness("K_6_3"), 0), m);
    } else {
        out = canonical_bipartite_labels(diamond_sum(build_kmn(m, n - 1), m, build_kmn(m, 3), m), m);
    }
    kmn_.emplace(std::pair{m, n}, out);
    return out;
}

}  // namespace quadforge
