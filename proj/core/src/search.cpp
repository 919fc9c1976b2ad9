#include "quadforge/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "quadforge/error.hpp"
#include "quadforge/graph_expr.hpp"
#include "quadforge/surgery.hpp"

namespace quadforge {

namespace {

std::string vertex_name(int v) { return std::to_string(v); }

bool orientation_ok(Orientability want, bool orientable) {
    if (want == Orientability::Either) return true;
    return (want == Orientability::Orientable) == orientable;
}

// Depth-first application of a chain of handle cycles.
bool handle_chain(const Embedding& emb, const std::vector<int>& args, std::size_t at) {
    if (at >= args.size()) return true;
    const std::array<int, 4> cycle{args[at], args[at + 1], args[at + 2], args[at + 3]};
    for (const auto& site : find_handle_sites(emb, cycle))
        if (handle_chain(handle_augment(emb, site), args, at + 4)) return true;
    return false;
}

}  // namespace

// ---------------------------------------------------------------- specs

void validate(const WitnessSpec& spec) {
    const auto& g = spec.graph;
    if (g.vertex_count() == 0) throw SpecError("target graph is empty");
    if (!g.is_connected()) throw SpecError("target graph is disconnected");
    const auto v = static_cast<long long>(g.vertex_count());
    const auto e = static_cast<long long>(g.edge_count());
    if (spec.quadrangular) {
        if (e % 2 != 0)
            throw SpecError("a quadrangulation needs an even edge count; the target has " + std::to_string(e) + " edges");
        if (spec.chi != v - e / 2)
            throw SpecError("chi = " + std::to_string(spec.chi) + " is inconsistent with a quadrangulation on " +
                            std::to_string(v) + " vertices and " + std::to_string(e) + " edges (requires chi = " +
                            std::to_string(v - e / 2) + ")");
    }
    for (const auto& p : spec.predicates) {
        switch (p.kind) {
        case Predicate::Kind::FaceSimple:
        case Predicate::Kind::UniversalVertex:
            if (!p.args.empty()) throw SpecError("predicate takes no arguments");
            break;
        case Predicate::Kind::NearlyFaceSimpleExcept:
        case Predicate::Kind::DeleteDegree2FaceSimple:
            if (p.args.size() != 1) throw SpecError("predicate takes exactly one vertex");
            if (!g.has_vertex(p.args[0])) throw SpecError("predicate names unknown vertex " + vertex_name(p.args[0]));
            break;
        case Predicate::Kind::HandleSites:
            if (p.args.empty() || p.args.size() % 4 != 0)
                throw SpecError("handle_sites needs one or more 4-cycles");
            for (int x : p.args)
                if (!g.has_vertex(x)) throw SpecError("handle_sites names unknown vertex " + vertex_name(x));
            for (std::size_t i = 0; i < p.args.size(); i += 4) {
                std::set<int> d(p.args.begin() + static_cast<long>(i), p.args.begin() + static_cast<long>(i) + 4);
                if (d.size() != 4) throw SpecError("handle_sites cycle repeats a vertex");
            }
            break;
        }
    }
}

bool trivially_unsatisfiable(const WitnessSpec& spec) {
    if (spec.chi > 2) return true;
    if (spec.orientability == Orientability::Orientable && spec.chi % 2 != 0) return true;
    if (spec.orientability == Orientability::Nonorientable && spec.chi > 1) return true;
    return false;
}

bool satisfies(const Embedding& emb, const Predicate& pred, std::string* why) {
    auto fail = [&](std::string msg) {
        if (why) *why = std::move(msg);
        return false;
    };
    switch (pred.kind) {
    case Predicate::Kind::FaceSimple:
        return is_face_simple(emb) || fail("not face-simple");
    case Predicate::Kind::NearlyFaceSimpleExcept:
        return is_nearly_face_simple_except(emb, pred.args.at(0)) ||
               fail("not nearly face-simple except " + vertex_name(pred.args.at(0)));
    case Predicate::Kind::UniversalVertex:
        return !universal_vertices(emb.graph()).empty() || fail("no universal vertex");
    case Predicate::Kind::DeleteDegree2FaceSimple: {
        const int z = pred.args.at(0);
        if (!emb.graph().has_vertex(z) || emb.graph().degree(z) != 2) return fail("vertex " + vertex_name(z) + " is not of degree 2");
        try {
            return is_face_simple(delete_degree2(emb, z)) || fail("deleting " + vertex_name(z) + " is not face-simple");
        } catch (const SurgeryError& ex) {
            return fail(ex.what());
        }
    }
    case Predicate::Kind::HandleSites:
        return handle_chain(emb, pred.args, 0) || fail("no handle-site chain for the given cycles");
    }
    return fail("unknown predicate");
}

bool satisfies(const Embedding& emb, const WitnessSpec& spec, std::string* why) {
    auto fail = [&](std::string msg) {
        if (why) *why = std::move(msg);
        return false;
    };
    if (!(emb.graph() == spec.graph)) return fail("graph differs from the target");
    const auto sc = surface_class(emb);
    if (sc.euler_characteristic != spec.chi)
        return fail("chi = " + std::to_string(sc.euler_characteristic) + ", expected " + std::to_string(spec.chi));
    if (!orientation_ok(spec.orientability, sc.orientable))
        return fail(sc.orientable ? "orientable, expected nonorientable" : "nonorientable, expected orientable");
    if (spec.quadrangular && !is_quadrangular(emb)) return fail("not quadrangular");
    for (const auto& p : spec.predicates)
        if (!satisfies(emb, p, why)) return false;
    return true;
}

namespace {

std::vector<std::string> words_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

int to_int(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return value;
    } catch (const std::exception&) {
        throw FormatError("expected an integer, got '" + s + "'", line);
    }
}

VertexPair to_pair(const std::string& s, int line) {
    const auto dash = s.find('-', 1);
    if (dash == std::string::npos) throw FormatError("expected an edge u-v, got '" + s + "'", line);
    return {to_int(s.substr(0, dash), line), to_int(s.substr(dash + 1), line)};
}

}  // namespace

WitnessSpec parse_witness_spec(std::string_view text) {
    WitnessSpec spec;
    std::optional<Graph> graph;
    std::vector<VertexPair> edges;
    std::optional<int> chi;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto w = words_of(raw);
        if (w.empty()) continue;
        const auto& key = w[0];
        if (key == "record") {
            if (w.size() != 2) throw FormatError("record takes one name", line_no);
            try {
                graph = phi_target(w[1]);
            } catch (const Error& ex) {
                throw FormatError(ex.what(), line_no);
            }
        } else if (key == "graph") {
            const auto expr_text = raw.substr(raw.find("graph") + 5);
            try {
                graph = eval(parse_graph_expr(expr_text));
            } catch (const FormatError& ex) {
                throw FormatError("graph expression: " + ex.detail(), line_no);
            } catch (const Error& ex) {
                throw FormatError(std::string("graph expression: ") + ex.what(), line_no);
            }
        } else if (key == "edges") {
            for (std::size_t i = 1; i < w.size(); ++i) edges.push_back(to_pair(w[i], line_no));
        } else if (key == "chi") {
            if (w.size() != 2) throw FormatError("chi takes one integer", line_no);
            chi = to_int(w[1], line_no);
        } else if (key == "orientable") {
            if (w.size() != 2) throw FormatError("orientable takes yes|no|either", line_no);
            if (w[1] == "yes" || w[1] == "true")
                spec.orientability = Orientability::Orientable;
            else if (w[1] == "no" || w[1] == "false")
                spec.orientability = Orientability::Nonorientable;
            else if (w[1] == "either")
                spec.orientability = Orientability::Either;
            else
                throw FormatError("orientable takes yes|no|either", line_no);
        } else if (key == "quadrangular") {
            if (w.size() != 2 || (w[1] != "yes" && w[1] != "true"))
                throw FormatError("only 'quadrangular yes' is supported", line_no);
        } else if (key == "predicate") {
            if (w.size() < 2) throw FormatError("predicate needs a name", line_no);
            Predicate p;
            const auto& name = w[1];
            if (name == "face_simple") {
                p.kind = Predicate::Kind::FaceSimple;
            } else if (name == "universal_vertex") {
                p.kind = Predicate::Kind::UniversalVertex;
            } else if (name == "nearly_face_simple_except") {
                p.kind = Predicate::Kind::NearlyFaceSimpleExcept;
            } else if (name == "delete_degree2_face_simple") {
                p.kind = Predicate::Kind::DeleteDegree2FaceSimple;
            } else if (name == "handle_sites") {
                p.kind = Predicate::Kind::HandleSites;
            } else {
                throw FormatError("unknown predicate '" + name + "'", line_no);
            }
            for (std::size_t i = 2; i < w.size(); ++i)
                if (w[i] != ";") p.args.push_back(to_int(w[i], line_no));
            spec.predicates.push_back(std::move(p));
        } else {
            throw FormatError("unknown directive '" + key + "'", line_no);
        }
    }
    if (!edges.empty()) {
        if (graph) throw FormatError("give either a graph/record line or edges, not both", line_no);
        try {
            graph = Graph::from_edges(edges);
        } catch (const StructureError& ex) {
            throw FormatError(ex.what(), line_no);
        }
    }
    if (!graph) throw FormatError("spec has no target graph", line_no);
    spec.graph = *graph;
    spec.chi = chi.value_or(static_cast<int>(spec.graph.vertex_count()) - static_cast<int>(spec.graph.edge_count()) / 2);
    return spec;
}

std::string to_text(const WitnessSpec& spec) {
    std::ostringstream out;
    out << "edges";
    for (const auto& e : spec.graph.edges()) out << ' ' << e.u << '-' << e.v;
    out << "\nchi " << spec.chi << "\norientable "
        << (spec.orientability == Orientability::Orientable      ? "yes"
            : spec.orientability == Orientability::Nonorientable ? "no"
                                                                 : "either")
        << "\nquadrangular yes\n";
    for (const auto& p : spec.predicates) {
        out << "predicate ";
        switch (p.kind) {
        case Predicate::Kind::FaceSimple: out << "face_simple"; break;
        case Predicate::Kind::UniversalVertex: out << "universal_vertex"; break;
        case Predicate::Kind::NearlyFaceSimpleExcept: out << "nearly_face_simple_except"; break;
        case Predicate::Kind::DeleteDegree2FaceSimple: out << "delete_degree2_face_simple"; break;
        case Predicate::Kind::HandleSites: out << "handle_sites"; break;
        }
        for (std::size_t i = 0; i < p.args.size(); ++i) {
            if (p.kind == Predicate::Kind::HandleSites && i > 0 && i % 4 == 0) out << " ;";
            out << ' ' << p.args[i];
        }
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------- local graph

namespace {

// Graph on indices 0..n-1 with dense edge lookup.
struct Local {
    int n = 0;
    std::vector<int> label;
    std::vector<std::vector<int>> adj;
    std::vector<int> eid;  // n*n, -1 if absent
    std::vector<std::pair<int, int>> ends;

    explicit Local(const Graph& g) : n(static_cast<int>(g.vertex_count())), label(g.vertices()), adj(n), eid(n * n, -1) {
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            const int a = static_cast<int>(*g.index_of(g.edges()[e].u));
            const int b = static_cast<int>(*g.index_of(g.edges()[e].v));
            adj[a].push_back(b);
            adj[b].push_back(a);
            eid[a * n + b] = eid[b * n + a] = static_cast<int>(e);
            ends.emplace_back(a, b);
        }
        for (auto& row : adj) std::sort(row.begin(), row.end());
    }
    int edge(int a, int b) const { return eid[a * n + b]; }
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

// Face-simplicity requirement usable for pruning: -2 none, -1 strict, else the exempt vertex index.
int pruning_mode(const WitnessSpec& spec, const Local& lg) {
    int mode = -2;
    for (const auto& p : spec.predicates) {
        if (p.kind == Predicate::Kind::FaceSimple) return -1;
        if (p.kind == Predicate::Kind::NearlyFaceSimpleExcept) {
            const int v = static_cast<int>(std::find(lg.label.begin(), lg.label.end(), p.args[0]) - lg.label.begin());
            mode = (mode == -2 || mode == v) ? v : -1;
        }
    }
    return mode;
}

// ---------------------------------------------------------------- face search

enum class RunOutcome { Found, Complete, Limit, Cancelled };

class FaceSearch {
public:
    FaceSearch(const WitnessSpec& spec, bool oriented)
        : spec_(spec), lg_(spec.graph), oriented_(oriented), n_(lg_.n), mode_(pruning_mode(spec, lg_)) {}

    RunOutcome run(std::uint64_t limit, std::mt19937_64* rng, const std::atomic<bool>* cancel) {
        rng_ = rng;
        cancel_ = cancel;
        limit_ = limit;
        run_nodes_ = 0;
        a_.assign(n_ * n_, -1);
        b_.assign(n_ * n_, -1);
        cnt_.assign(n_ * n_, 0);
        edge_faces_.assign(lg_.ends.size(), {-1, -1});
        faces_.clear();
        found_.reset();
        stop_ = RunOutcome::Complete;
        dfs();
        nodes_ += run_nodes_;
        if (found_) return RunOutcome::Found;
        return stop_;
    }

    std::uint64_t nodes() const { return nodes_; }
    const std::optional<Embedding>& found() const { return found_; }

private:
    using Face = std::array<int, 4>;

    // --- corner feasibility -------------------------------------------------
    // Oriented: a_[v*n+u] = successor of u at v, b_[v*n+w] = predecessor of w.
    bool oriented_corner_ok(int v, int u, int w) const {
        const int base = v * n_;
        if (a_[base + u] != -1 || b_[base + w] != -1) return false;
        int x = w, len = 1;
        while (a_[base + x] != -1) {
            x = a_[base + x];
            ++len;
        }
        return x != u || len == lg_.degree(v);
    }

    // Unoriented: a_/b_ hold the two link partners, cnt_ the link degree.
    bool link_ok(int v, int x, int y) const {
        const int base = v * n_;
        if (cnt_[base + x] >= 2 || cnt_[base + y] >= 2) return false;
        if (a_[base + x] == y || b_[base + x] == y) return lg_.degree(v) == 2;
        if (cnt_[base + x] == 0) return true;
        int prev = x, cur = a_[base + x], len = 2;
        while (cnt_[base + cur] == 2) {
            const int next = a_[base + cur] == prev ? b_[base + cur] : a_[base + cur];
            prev = cur;
            cur = next;
            ++len;
        }
        return cur != y || len == lg_.degree(v);
    }

    bool face_simple_ok(const Face& f) const {
        if (mode_ == -2) return true;
        int seen[4];
        int k = 0;
        for (int i = 0; i < 4; ++i) {
            const int x = f[i], y = f[(i + 1) % 4];
            if (x == mode_ || y == mode_) continue;
            const auto& ef = edge_faces_[lg_.edge(x, y)];
            const int other = ef[0];
            if (other < 0) continue;
            for (int j = 0; j < k; ++j)
                if (seen[j] == other) return false;
            seen[k++] = other;
        }
        return true;
    }

    bool face_ok(const Face& f) const {
        const auto [p, q, r, s] = f;
        if (oriented_) {
            if (!oriented_corner_ok(q, p, r) || !oriented_corner_ok(r, q, s) || !oriented_corner_ok(s, r, p) ||
                !oriented_corner_ok(p, s, q))
                return false;
        } else {
            if (!link_ok(p, s, q) || !link_ok(q, p, r) || !link_ok(r, q, s) || !link_ok(s, r, p)) return false;
        }
        return face_simple_ok(f);
    }

    // --- state updates ------------------------------------------------------
    void link_add(int v, int x, int y) {
        const int base = v * n_;
        (cnt_[base + x] == 0 ? a_[base + x] : b_[base + x]) = y;
        ++cnt_[base + x];
        (cnt_[base + y] == 0 ? a_[base + y] : b_[base + y]) = x;
        ++cnt_[base + y];
    }
    void link_remove(int v, int x, int y) {
        const int base = v * n_;
        auto drop = [&](int from, int to) {
            if (b_[base + from] == to)
                b_[base + from] = -1;
            else {
                a_[base + from] = b_[base + from];
                b_[base + from] = -1;
            }
            --cnt_[base + from];
        };
        drop(x, y);
        drop(y, x);
    }

    void place(const Face& f, bool add) {
        const int id = static_cast<int>(faces_.size()) - (add ? 0 : 1);
        for (int i = 0; i < 4; ++i) {
            const int prev = f[(i + 3) % 4], v = f[i], next = f[(i + 1) % 4];
            if (oriented_) {
                a_[v * n_ + prev] = add ? next : -1;
                b_[v * n_ + next] = add ? prev : -1;
                cnt_[v * n_ + prev] += add ? 1 : -1;
                cnt_[v * n_ + next] += add ? 1 : -1;
            } else if (add) {
                link_add(v, prev, next);
            } else {
                link_remove(v, prev, next);
            }
            auto& ef = edge_faces_[lg_.edge(v, next)];
            if (add)
                (ef[0] < 0 ? ef[0] : ef[1]) = id;
            else
                (ef[1] == id ? ef[1] : ef[0]) = -1;
        }
        if (add)
            faces_.push_back(f);
        else
            faces_.pop_back();
    }

    // --- branching ----------------------------------------------------------
    // Candidate faces through the open item (u, v): oriented, the arc u->v not yet
    // used; unoriented, the edge uv lying on fewer than two faces.
    template <class Visit>
    int candidates(int u, int v, int cap, Visit&& visit) const {
        int count = 0;
        for (int w : lg_.adj[v]) {
            if (w == u) continue;
            if (oriented_ ? !oriented_corner_ok(v, u, w) : !link_ok(v, u, w)) continue;
            for (int x : lg_.adj[w]) {
                if (x == v || x == u || lg_.edge(x, u) < 0) continue;
                const Face f{u, v, w, x};
                if (!face_ok(f)) continue;
                ++count;
                if (!visit(f) || count >= cap) return count;
            }
        }
        return count;
    }

    void dfs() {
        if (found_ || stop_ != RunOutcome::Complete) return;
        if (++run_nodes_ > limit_ && limit_ != 0) {
            stop_ = RunOutcome::Limit;
            return;
        }
        if (cancel_ && (run_nodes_ & 1023) == 0 && cancel_->load(std::memory_order_relaxed)) {
            stop_ = RunOutcome::Cancelled;
            return;
        }

        int best = std::numeric_limits<int>::max();
        int best_u = -1, best_v = -1;
        auto no_op = [](const Face&) { return true; };
        for (int v = 0; v < n_ && best > 0; ++v) {
            for (int u : lg_.adj[v]) {
                // oriented: arc u->v is open when v has no successor for u;
                // unoriented: edge uv is open when it lies on fewer than two faces (u < v).
                if (oriented_) {
                    if (a_[v * n_ + u] != -1) continue;
                } else {
                    if (u > v || cnt_[v * n_ + u] >= 2) continue;
                }
                const int c = candidates(u, v, best, no_op);
                if (c < best) {
                    best = c;
                    best_u = u;
                    best_v = v;
                    if (best <= 1) break;
                }
            }
            if (best <= 1 && best_u >= 0) break;
        }
        if (best_u < 0) {
            leaf();
            return;
        }
        if (best == 0) return;

        std::vector<Face> options;
        candidates(best_u, best_v, std::numeric_limits<int>::max(), [&](const Face& f) {
            options.push_back(f);
            return true;
        });
        if (rng_) std::shuffle(options.begin(), options.end(), *rng_);
        for (const auto& f : options) {
            place(f, true);
            dfs();
            place(f, false);
            if (found_ || stop_ != RunOutcome::Complete) return;
        }
    }

    void leaf() {
        std::vector<std::vector<int>> faces;
        faces.reserve(faces_.size());
        for (const auto& f : faces_) faces.push_back({lg_.label[f[0]], lg_.label[f[1]], lg_.label[f[2]], lg_.label[f[3]]});
        Embedding emb;
        try {
            emb = Embedding::from_faces(faces);
        } catch (const StructureError&) {
            return;
        }
        if (satisfies(emb, spec_)) found_ = std::move(emb);
    }

    const WitnessSpec& spec_;
    Local lg_;
    bool oriented_;
    int n_;
    int mode_;
    std::vector<int> a_, b_, cnt_;
    std::vector<std::array<int, 2>> edge_faces_;
    std::vector<Face> faces_;
    std::optional<Embedding> found_;
    std::mt19937_64* rng_ = nullptr;
    const std::atomic<bool>* cancel_ = nullptr;
    std::uint64_t limit_ = 0, run_nodes_ = 0, nodes_ = 0;
    RunOutcome stop_ = RunOutcome::Complete;
};

std::uint64_t luby(std::uint64_t i) {
    // 1 1 2 1 1 2 4 1 1 2 ...
    for (std::uint64_t k = 1;; ++k) {
        const std::uint64_t full = (std::uint64_t{1} << k) - 1;
        if (i == full) return std::uint64_t{1} << (k - 1);
        if (i < full) return luby(i - (full >> 1));
    }
}

SearchResult face_search_worker(const WitnessSpec& spec, const ExactOptions& options, std::uint64_t seed,
                                const std::atomic<bool>* cancel) {
    const bool oriented = spec.orientability == Orientability::Orientable;
    FaceSearch search(spec, oriented);
    SearchResult result;
    result.seed = seed;
    if (seed == 0) {
        const auto outcome = search.run(options.node_budget, nullptr, cancel);
        result.nodes = search.nodes();
        if (outcome == RunOutcome::Found) {
            result.status = SearchStatus::Found;
            result.embedding = search.found();
        } else {
            result.status = outcome == RunOutcome::Complete ? SearchStatus::None : SearchStatus::Exhausted;
        }
        return result;
    }
    std::mt19937_64 rng(seed);
    for (std::uint64_t round = 1;; ++round) {
        std::uint64_t limit = luby(round) * std::max<std::uint64_t>(options.restart_unit, 1);
        if (options.node_budget != 0) {
            if (search.nodes() >= options.node_budget) break;
            limit = std::min(limit, options.node_budget - search.nodes());
        }
        const auto outcome = search.run(limit, &rng, cancel);
        result.nodes = search.nodes();
        if (outcome == RunOutcome::Found) {
            result.status = SearchStatus::Found;
            result.embedding = search.found();
            return result;
        }
        if (outcome == RunOutcome::Complete) {
            result.status = SearchStatus::None;
            return result;
        }
        if (outcome == RunOutcome::Cancelled) break;
    }
    result.status = SearchStatus::Exhausted;
    return result;
}

// ---------------------------------------------------------------- rotation systems

// Signed rotation system on local indices with a fast face tracer.
struct RotationSystem {
    const Local* lg = nullptr;
    std::vector<std::vector<int>> rot;  // neighbor indices in cyclic order
    std::vector<int> pos;               // n*n: position of u in rot[v]
    std::vector<int> sign;              // per edge id
    std::vector<char> seen;

    explicit RotationSystem(const Local& g) : lg(&g), rot(g.adj), pos(g.n * g.n, -1), sign(g.ends.size(), 1) {
        for (int v = 0; v < g.n; ++v) reindex(v);
    }

    void reindex(int v) {
        for (int i = 0; i < static_cast<int>(rot[v].size()); ++i) pos[v * lg->n + rot[v][i]] = i;
    }

    // Calls out(length) once per face. States: (arc from->to, flag).
    template <class Out>
    void trace(Out&& out) {
        const int n = lg->n;
        const std::size_t states = lg->ends.size() * 4;
        seen.assign(states, 0);
        auto state_of = [&](int from, int to, int flag) {
            const int e = lg->edge(from, to);
            const int dir = lg->ends[e].first == from ? 0 : 1;
            return static_cast<std::size_t>((e * 2 + dir) * 2 + (flag < 0 ? 1 : 0));
        };
        for (std::size_t e = 0; e < lg->ends.size(); ++e)
            for (int dir = 0; dir < 2; ++dir)
                for (int fl = 0; fl < 2; ++fl) {
                    const std::size_t s0 = (e * 2 + dir) * 2 + fl;
                    if (seen[s0]) continue;
                    int from = dir == 0 ? lg->ends[e].first : lg->ends[e].second;
                    int to = dir == 0 ? lg->ends[e].second : lg->ends[e].first;
                    int flag = fl == 0 ? 1 : -1;
                    int length = 0;
                    for (;;) {
                        const std::size_t s = state_of(from, to, flag);
                        if (seen[s]) break;
                        seen[s] = 1;
                        // the reverse walk traverses the same face
                        ++length;
                        flag *= sign[lg->edge(from, to)];
                        const int d = static_cast<int>(rot[to].size());
                        const int p = pos[to * n + from];
                        const int next = rot[to][((p + (flag > 0 ? 1 : -1)) % d + d) % d];
                        from = to;
                        to = next;
                    }
                    out(length);
                }
        (void)states;
    }

    bool orientable() const {
        const int n = lg->n;
        std::vector<int> s(n, 0);
        s[0] = 1;
        std::vector<int> stack{0};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int u : lg->adj[v]) {
                const int want = s[v] * sign[lg->edge(u, v)];
                if (s[u] == 0) {
                    s[u] = want;
                    stack.push_back(u);
                } else if (s[u] != want) {
                    return false;
                }
            }
        }
        return true;
    }

    Embedding embedding(const Graph& g) const {
        std::vector<std::vector<std::size_t>> r(rot.size());
        for (std::size_t v = 0; v < rot.size(); ++v)
            for (int u : rot[v]) r[v].push_back(static_cast<std::size_t>(lg->edge(static_cast<int>(v), u)));
        return Embedding(g, std::move(r), sign);
    }
};

// Each face is traced twice (once per direction), so halve the totals.
struct FaceStats {
    int faces = 0;
    long long energy = 0;
    bool all_four = true;
};

FaceStats face_stats(RotationSystem& rs) {
    FaceStats st;
    int orbits = 0;
    rs.trace([&](int len) {
        ++orbits;
        st.energy += std::abs(len - 4);
        if (len != 4) st.all_four = false;
    });
    st.faces = orbits / 2;
    st.energy /= 2;
    return st;
}

std::vector<std::vector<int>> cyclic_orders(const std::vector<int>& nbrs, bool half) {
    std::vector<std::vector<int>> out;
    if (nbrs.size() <= 2) {
        out.push_back(nbrs);
        return out;
    }
    std::vector<int> rest(nbrs.begin() + 1, nbrs.end());
    do {
        if (half && rest.front() > rest.back()) continue;
        std::vector<int> order{nbrs.front()};
        order.insert(order.end(), rest.begin(), rest.end());
        out.push_back(std::move(order));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

std::vector<int> bfs_tree_edges(const Local& lg) {
    std::vector<int> tree;
    std::vector<char> seen(lg.n, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const int v = queue[h];
        for (int u : lg.adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                queue.push_back(u);
                tree.push_back(lg.edge(u, v));
            }
    }
    return tree;
}

std::string key_of(const Local& lg, const std::vector<std::vector<int>>& rot, const std::vector<int>& sign, bool mirror) {
    std::string key;
    for (int v = 0; v < lg.n; ++v) {
        auto r = rot[v];
        if (mirror) std::reverse(r.begin(), r.end());
        std::rotate(r.begin(), std::min_element(r.begin(), r.end()), r.end());
        for (int u : r) key.push_back(static_cast<char>('0' + u));
        key.push_back('|');
    }
    for (int s : sign) key.push_back(s > 0 ? '+' : '-');
    return key;
}

std::string canonical_key(const Local& lg, const std::vector<std::vector<int>>& rot0, const std::vector<int>& sign0) {
    // switch so that every BFS tree edge is positive; this leaves only the global switch
    std::vector<int> s(lg.n, 0);
    s[0] = 1;
    std::vector<int> queue{0};
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const int v = queue[h];
        for (int u : lg.adj[v])
            if (s[u] == 0) {
                s[u] = s[v] * sign0[lg.edge(u, v)];
                queue.push_back(u);
            }
    }
    auto rot = rot0;
    auto sign = sign0;
    for (int v = 0; v < lg.n; ++v)
        if (s[v] < 0) std::reverse(rot[v].begin(), rot[v].end());
    for (std::size_t e = 0; e < sign.size(); ++e) sign[e] *= s[lg.ends[e].first] * s[lg.ends[e].second];
    return std::min(key_of(lg, rot, sign, false), key_of(lg, rot, sign, true));
}

bool filter_ok(RotationSystem& rs, const Graph& g, const EmbeddingFilter& f, std::optional<Embedding>& built) {
    built.reset();
    if (f.orientability != Orientability::Either && !orientation_ok(f.orientability, rs.orientable())) return false;
    if (f.quadrangular || f.chi) {
        const auto st = face_stats(rs);
        if (f.quadrangular && !st.all_four) return false;
        const int chi = static_cast<int>(g.vertex_count()) - static_cast<int>(g.edge_count()) + st.faces;
        if (f.chi && chi != *f.chi) return false;
    }
    built = rs.embedding(g);
    if (f.face_simple && !is_face_simple(*built)) return false;
    return true;
}

}  // namespace

std::string canonical_embedding_key(const Embedding& emb) {
    const Local lg(emb.graph());
    std::vector<std::vector<int>> rot(lg.n);
    for (int v = 0; v < lg.n; ++v)
        for (std::size_t e : emb.rotation_at(static_cast<std::size_t>(v))) {
            const auto [a, b] = lg.ends[e];
            rot[v].push_back(a == v ? b : a);
        }
    return canonical_key(lg, rot, emb.signs());
}

std::size_t enumerate_embeddings(const Graph& g, const EmbeddingFilter& filter,
                                 const std::function<bool(const Embedding&)>& visit, bool prune) {
    if (g.vertex_count() > 8) throw DomainError("enumerate_embeddings is capped at 8 vertices");
    if (g.vertex_count() == 0 || !g.is_connected()) throw DomainError("enumerate_embeddings needs a connected graph");
    const Local lg(g);
    RotationSystem rs(lg);

    int half_vertex = -1;
    if (prune)
        for (int v = 0; v < lg.n && half_vertex < 0; ++v)
            if (lg.degree(v) >= 3) half_vertex = v;
    std::vector<std::vector<std::vector<int>>> orders(lg.n);
    for (int v = 0; v < lg.n; ++v) orders[v] = cyclic_orders(lg.adj[v], v == half_vertex);

    std::vector<int> free_edges;
    if (prune) {
        const auto tree = bfs_tree_edges(lg);
        for (int e = 0; e < static_cast<int>(lg.ends.size()); ++e)
            if (std::find(tree.begin(), tree.end(), e) == tree.end()) free_edges.push_back(e);
    } else {
        free_edges.resize(lg.ends.size());
        std::iota(free_edges.begin(), free_edges.end(), 0);
    }
    if (filter.orientability == Orientability::Orientable && prune) free_edges.clear();
    if (free_edges.size() > 40) throw DomainError("too many free edge signs to enumerate");
    const std::uint64_t sign_count = std::uint64_t{1} << free_edges.size();

    std::set<std::string> keys;
    std::size_t visited = 0;
    std::vector<std::size_t> digit(lg.n, 0);
    std::optional<Embedding> built;
    for (;;) {
        for (int v = 0; v < lg.n; ++v) {
            rs.rot[v] = orders[v][digit[v]];
            rs.reindex(v);
        }
        for (std::uint64_t mask = 0; mask < sign_count; ++mask) {
            for (std::size_t i = 0; i < free_edges.size(); ++i) rs.sign[free_edges[i]] = (mask >> i) & 1 ? -1 : 1;
            if (!filter_ok(rs, g, filter, built)) continue;
            if (!prune && !keys.insert(canonical_key(lg, rs.rot, rs.sign)).second) continue;
            ++visited;
            if (!visit(*built)) return visited;
        }
        int v = 0;
        while (v < lg.n && ++digit[v] == orders[v].size()) digit[v++] = 0;
        if (v == lg.n) break;
    }
    return visited;
}

// ---------------------------------------------------------------- exact search

SearchResult search_exact(const WitnessSpec& spec, const ExactOptions& options) {
    validate(spec);
    if (trivially_unsatisfiable(spec)) return {SearchStatus::None, std::nullopt, 0, options.seed};

    if (min_degree(spec.graph) < 2 || !spec.quadrangular) {
        SearchResult result;
        result.seed = options.seed;
        EmbeddingFilter f;
        f.chi = spec.chi;
        f.orientability = spec.orientability;
        f.quadrangular = spec.quadrangular;
        enumerate_embeddings(spec.graph, f, [&](const Embedding& e) {
            ++result.nodes;
            if (!satisfies(e, spec)) return true;
            result.embedding = e;
            return false;
        });
        result.status = result.embedding ? SearchStatus::Found : SearchStatus::None;
        return result;
    }

    const int workers = std::max(1, options.workers);
    if (workers == 1 || options.seed == 0) return face_search_worker(spec, options, options.seed, options.cancel);

    std::atomic<bool> stop{false};
    std::mutex mu;
    std::optional<SearchResult> winner;
    std::uint64_t total_nodes = 0;
    bool proven_none = false;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            auto r = face_search_worker(spec, options, options.seed + static_cast<std::uint64_t>(w), &stop);
            std::lock_guard lock(mu);
            total_nodes += r.nodes;
            if (r.status == SearchStatus::Found && !winner) {
                winner = std::move(r);
                stop = true;
            } else if (r.status == SearchStatus::None) {
                proven_none = true;
                stop = true;
            }
        });
    for (auto& t : pool) t.join();
    if (options.cancel && options.cancel->load()) stop = true;
    if (winner) {
        winner->nodes = total_nodes;
        return *winner;
    }
    return {proven_none ? SearchStatus::None : SearchStatus::Exhausted, std::nullopt, total_nodes, options.seed};
}

// ---------------------------------------------------------------- annealing

SearchResult search_anneal(const WitnessSpec& spec, const AnnealOptions& options) {
    validate(spec);
    SearchResult result;
    result.seed = options.seed;
    if (trivially_unsatisfiable(spec)) {
        result.status = SearchStatus::None;
        return result;
    }
    const Local lg(spec.graph);
    std::vector<int> movable;
    for (int v = 0; v < lg.n; ++v)
        if (lg.degree(v) >= 3) movable.push_back(v);
    const bool flip_signs = spec.orientability != Orientability::Orientable;
    const double t0 = options.initial_temperature;
    const double t1 = std::min(options.final_temperature, t0);
    const auto steps = std::max<std::uint64_t>(options.steps_per_restart, 1);

    auto energy_of = [&](RotationSystem& rs) {
        const auto st = face_stats(rs);
        double e = static_cast<double>(st.energy);
        if (spec.orientability != Orientability::Either && !orientation_ok(spec.orientability, rs.orientable()))
            e += options.orientation_penalty;
        return e;
    };

    for (int restart = 0; restart < options.restarts; ++restart) {
        std::mt19937_64 rng(options.seed * 1000003ULL + static_cast<std::uint64_t>(restart));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        RotationSystem rs(lg);
        for (int v = 0; v < lg.n; ++v) {
            std::shuffle(rs.rot[v].begin(), rs.rot[v].end(), rng);
            rs.reindex(v);
        }
        if (flip_signs)
            for (auto& s : rs.sign) s = unit(rng) < 0.5 ? -1 : 1;
        double energy = energy_of(rs);
        if (energy == 0.0) {
            auto emb = rs.embedding(spec.graph);
            if (satisfies(emb, spec)) {
                result.status = SearchStatus::Found;
                result.embedding = std::move(emb);
                return result;
            }
            energy = 1.0;
        }
        for (std::uint64_t step = 0; step < steps; ++step) {
            if (options.cancel && (step & 4095) == 0 && options.cancel->load(std::memory_order_relaxed)) {
                result.status = SearchStatus::Exhausted;
                return result;
            }
            ++result.nodes;
            const double temp = t0 * std::pow(t1 / t0, static_cast<double>(step) / static_cast<double>(steps));
            const bool flip = flip_signs && (movable.empty() || unit(rng) < 0.2);
            int v = -1, i = -1, j = -1, e = -1;
            if (flip) {
                e = static_cast<int>(rng() % lg.ends.size());
                rs.sign[e] = -rs.sign[e];
            } else {
                if (movable.empty()) break;
                v = movable[rng() % movable.size()];
                const int d = lg.degree(v);
                i = static_cast<int>(rng() % static_cast<std::uint64_t>(d));
                j = (i + 1) % d;
                std::swap(rs.rot[v][i], rs.rot[v][j]);
                rs.reindex(v);
            }
            double proposed = energy_of(rs);
            // a zero-energy state failing the predicates is not a target
            if (proposed == 0.0 && !satisfies(rs.embedding(spec.graph), spec)) proposed = 1.0;
            if (proposed <= energy || unit(rng) < std::exp((energy - proposed) / temp)) {
                energy = proposed;
                if (proposed == 0.0) {
                    result.status = SearchStatus::Found;
                    result.embedding = rs.embedding(spec.graph);
                    return result;
                }
            } else if (flip) {
                rs.sign[e] = -rs.sign[e];
            } else {
                std::swap(rs.rot[v][i], rs.rot[v][j]);
                rs.reindex(v);
            }
        }
    }
    result.status = SearchStatus::Exhausted;
    return result;
}

// ---------------------------------------------------------------- graph iterator

namespace {

std::vector<long long> graph_invariant(const Graph& g) {
    std::vector<long long> inv;
    std::vector<std::vector<int>> profile;
    for (int v : g.vertices()) {
        std::vector<int> p{static_cast<int>(g.degree(v))};
        std::vector<int> nd;
        for (int u : g.neighbors(v)) nd.push_back(static_cast<int>(g.degree(u)));
        std::sort(nd.begin(), nd.end());
        p.insert(p.end(), nd.begin(), nd.end());
        profile.push_back(std::move(p));
    }
    std::sort(profile.begin(), profile.end());
    for (const auto& p : profile) {
        inv.insert(inv.end(), p.begin(), p.end());
        inv.push_back(-1);
    }
    return inv;
}

}  // namespace

std::size_t for_each_graph(int n, int m, int min_deg, const std::function<bool(const Graph&)>& visit) {
    if (n < 1 || n > 10) throw DomainError("for_each_graph supports 1..10 vertices");
    std::vector<std::pair<int, int>> slots;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) slots.emplace_back(a, b);
    if (m < 0 || m > static_cast<int>(slots.size())) return 0;
    // remaining[k][v]: slots at index >= k touching v
    std::vector<std::vector<int>> remaining(slots.size() + 1, std::vector<int>(n, 0));
    for (int k = static_cast<int>(slots.size()) - 1; k >= 0; --k) {
        remaining[k] = remaining[k + 1];
        ++remaining[k][slots[k].first];
        ++remaining[k][slots[k].second];
    }
    std::map<std::vector<long long>, std::vector<Graph>> classes;
    std::vector<int> deg(n, 0);
    std::vector<VertexPair> chosen;
    std::vector<int> vertices(n);
    std::iota(vertices.begin(), vertices.end(), 0);
    std::size_t emitted = 0;
    bool stopped = false;

    // Every isomorphism class has a labeling with non-increasing degrees, so only
    // such labelings are generated.
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (stopped) return;
        const int need = m - static_cast<int>(chosen.size());
        if (need == 0) {
            for (int v = 0; v < n; ++v)
                if (deg[v] < min_deg || (v > 0 && deg[v] > deg[v - 1])) return;
            Graph g(vertices, chosen);
            if (!g.is_connected()) return;
            auto& bucket = classes[graph_invariant(g)];
            for (const auto& h : bucket)
                if (are_isomorphic(g, h)) return;
            bucket.push_back(g);
            ++emitted;
            if (!visit(g)) stopped = true;
            return;
        }
        if (static_cast<int>(slots.size() - k) < need) return;
        for (int v = 0; v < n; ++v)
            if (deg[v] + remaining[k][v] < min_deg) return;
        const auto [a, b] = slots[k];
        // when the block of slots (a, *) starts, deg[a-1] is final
        if (b == a + 1 && a >= 1 && deg[a] > deg[a - 1]) return;
        if (deg[a] + 1 <= (a >= 1 ? deg[a - 1] : n)) {
            ++deg[a];
            ++deg[b];
            chosen.emplace_back(a, b);
            rec(k + 1);
            chosen.pop_back();
            --deg[a];
            --deg[b];
        }
        rec(k + 1);
    };
    rec(0);
    return emitted;
}

SweepReport sweep_face_simple(int n, int chi, Orientability orientability, int min_deg) {
    SweepReport report;
    report.n = n;
    const int m = 2 * (n - chi);
    if (n < 1 || m < n - 1 || m > n * (n - 1) / 2) return report;
    for_each_graph(n, m, min_deg, [&](const Graph& g) {
        ++report.graphs;
        WitnessSpec spec;
        spec.graph = g;
        spec.chi = chi;
        spec.orientability = orientability;
        spec.predicates = {{Predicate::Kind::FaceSimple, {}}};
        auto r = search_exact(spec);
        if (r.status == SearchStatus::Found) report.witness = std::move(r.embedding);
        return !report.witness;
    });
    return report;
}

}  // namespace quadforge
