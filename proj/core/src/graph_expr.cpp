#include "quadforge/graph_expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <set>

#include "quadforge/error.hpp"

namespace quadforge {

GraphExpr GraphExpr::complete(int k) { return {Op::Complete, {k}, {}, {}}; }
GraphExpr GraphExpr::empty(int k) { return {Op::Empty, {k}, {}, {}}; }
GraphExpr GraphExpr::cycle(int k) { return {Op::Cycle, {k}, {}, {}}; }
GraphExpr GraphExpr::complete_bipartite(int m, int n) { return {Op::CompleteBipartite, {m, n}, {}, {}}; }
GraphExpr GraphExpr::h(int i) { return {Op::H, {i}, {}, {}}; }
GraphExpr GraphExpr::j(int i) { return {Op::J, {i}, {}, {}}; }
GraphExpr GraphExpr::join(GraphExpr a, GraphExpr b) { return {Op::Join, {}, {std::move(a), std::move(b)}, {}}; }
GraphExpr GraphExpr::disjoint_union(GraphExpr a, GraphExpr b) {
    return {Op::Union, {}, {std::move(a), std::move(b)}, {}};
}
GraphExpr GraphExpr::complement(GraphExpr a) { return {Op::Complement, {}, {std::move(a)}, {}}; }
GraphExpr GraphExpr::delete_edges(GraphExpr a, std::vector<VertexPair> edges) {
    return {Op::DeleteEdges, {}, {std::move(a)}, std::move(edges)};
}
GraphExpr GraphExpr::subdivide(GraphExpr a, VertexPair edge) { return {Op::Subdivide, {}, {std::move(a)}, {edge}}; }

namespace {

Graph complete_on(const std::vector<int>& labels) {
    std::vector<VertexPair> es;
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j) es.emplace_back(labels[i], labels[j]);
    return Graph(labels, es);
}

std::vector<int> range(int from, int count) {
    std::vector<int> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = from + i;
    return out;
}

void need_nonneg(int k, const char* what) {
    if (k < 0) throw DomainError(std::string(what) + " needs a nonnegative size");
}

// Right operand relabeled out of the way of the left one.
Graph shifted_right(const Graph& left, const Graph& right) {
    bool clash = false;
    for (int v : right.vertices())
        if (left.has_vertex(v)) clash = true;
    if (!clash || right.vertex_count() == 0) return right;
    const int shift = left.max_label() + 1 - right.vertices().front();
    std::vector<std::pair<int, int>> map;
    for (int v : right.vertices()) map.emplace_back(v, v + shift);
    return right.relabeled(map);
}

Graph combine(const Graph& a, const Graph& b0, bool join) {
    Graph b = shifted_right(a, b0);
    std::vector<int> vs = a.vertices();
    vs.insert(vs.end(), b.vertices().begin(), b.vertices().end());
    std::vector<VertexPair> es = a.edges();
    es.insert(es.end(), b.edges().begin(), b.edges().end());
    if (join)
        for (int u : a.vertices())
            for (int v : b.vertices()) es.emplace_back(u, v);
    return Graph(vs, es);
}

}  // namespace

Graph h_graph(int i) {
    Graph k4 = complete_on({1, 2, 3, 4});
    switch (i) {
        case 0: return k4;
        case 2: {
            std::vector<VertexPair> del{{1, 3}, {2, 3}};
            return k4.with_edges_removed(del);
        }
        case 4: {
            std::vector<VertexPair> del{{1, 2}, {1, 3}, {2, 3}, {3, 4}};
            return k4.with_edges_removed(del);
        }
        default: throw DomainError("H(i) needs i in {0,2,4}, got " + std::to_string(i));
    }
}

Graph j_graph(int i) {
    Graph k8 = complete_on(range(1, 8));
    std::vector<VertexPair> del;
    switch (i) {
        case 0: break;
        case 4: del = {{5, 6}, {6, 7}, {7, 8}, {5, 8}}; break;
        case 8: del = {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {5, 6}, {6, 7}, {7, 8}, {5, 8}}; break;
        default: throw DomainError("J(i) needs i in {0,4,8}, got " + std::to_string(i));
    }
    return k8.with_edges_removed(del);
}

Graph eval(const GraphExpr& expr) {
    using Op = GraphExpr::Op;
    auto arity = [&](std::size_t ints, std::size_t args) {
        if (expr.ints.size() != ints || expr.args.size() != args) throw DomainError("malformed graph expression");
    };
    switch (expr.op) {
        case Op::Complete:
            arity(1, 0);
            need_nonneg(expr.ints[0], "K");
            return complete_on(range(0, expr.ints[0]));
        case Op::Empty:
            arity(1, 0);
            need_nonneg(expr.ints[0], "empty");
            return Graph(range(0, expr.ints[0]), {});
        case Op::Cycle: {
            arity(1, 0);
            const int k = expr.ints[0];
            if (k < 3) throw DomainError("C(k) needs k >= 3");
            std::vector<VertexPair> es;
            for (int i = 0; i < k; ++i) es.emplace_back(i, (i + 1) % k);
            return Graph(range(0, k), es);
        }
        case Op::CompleteBipartite: {
            arity(2, 0);
            const int m = expr.ints[0], n = expr.ints[1];
            need_nonneg(m, "K(m,n)");
            need_nonneg(n, "K(m,n)");
            std::vector<VertexPair> es;
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < n; ++b) es.emplace_back(a, m + b);
            return Graph(range(0, m + n), es);
        }
        case Op::H: arity(1, 0); return h_graph(expr.ints[0]);
        case Op::J: arity(1, 0); return j_graph(expr.ints[0]);
        case Op::Join:
        case Op::Union:
            arity(0, 2);
            return combine(eval(expr.args[0]), eval(expr.args[1]), expr.op == Op::Join);
        case Op::Complement: {
            arity(0, 1);
            Graph g = eval(expr.args[0]);
            std::vector<VertexPair> es;
            const auto& vs = g.vertices();
            for (std::size_t i = 0; i < vs.size(); ++i)
                for (std::size_t j = i + 1; j < vs.size(); ++j)
                    if (!g.has_edge(vs[i], vs[j])) es.emplace_back(vs[i], vs[j]);
            return Graph(vs, es);
        }
        case Op::DeleteEdges: {
            arity(0, 1);
            Graph g = eval(expr.args[0]);
            for (const auto& p : expr.pairs)
                if (!g.has_edge(p.u, p.v))
                    throw DomainError("delete: {" + std::to_string(p.u) + "," + std::to_string(p.v) + "} is not an edge");
            return g.with_edges_removed(expr.pairs);
        }
        case Op::Subdivide: {
            arity(0, 1);
            if (expr.pairs.size() != 1) throw DomainError("subdivide takes one edge");
            Graph g = eval(expr.args[0]);
            const auto p = expr.pairs[0];
            if (!g.has_edge(p.u, p.v))
                throw DomainError("subdivide: {" + std::to_string(p.u) + "," + std::to_string(p.v) + "} is not an edge");
            const int z = g.max_label() + 1;
            std::vector<VertexPair> removed{p};
            Graph h = g.with_edges_removed(removed);
            std::vector<int> vs = h.vertices();
            vs.push_back(z);
            std::vector<VertexPair> es = h.edges();
            es.emplace_back(p.u, z);
            es.emplace_back(p.v, z);
            return Graph(vs, es);
        }
    }
    throw DomainError("malformed graph expression");
}

namespace {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    GraphExpr parse() {
        GraphExpr e = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("graph expression: " + what + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string ident() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected operator name");
        return std::string(text_.substr(start, pos_ - start));
    }
    int integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }
    VertexPair pair() {
        int a = integer();
        expect('-');
        int b = integer();
        if (a == b) fail("edge endpoints must differ");
        return {a, b};
    }

    GraphExpr expr() {
        const std::string name = ident();
        expect('(');
        GraphExpr out;
        if (name == "K" || name == "complete") {
            int a = integer();
            if (accept(',')) {
                int b = integer();
                out = GraphExpr::complete_bipartite(a, b);
            } else {
                out = GraphExpr::complete(a);
            }
        } else if (name == "empty") {
            out = GraphExpr::empty(integer());
        } else if (name == "C") {
            out = GraphExpr::cycle(integer());
        } else if (name == "H") {
            out = GraphExpr::h(integer());
        } else if (name == "J") {
            out = GraphExpr::j(integer());
        } else if (name == "join" || name == "union" || name == "disjoint_union") {
            GraphExpr a = expr();
            expect(',');
            GraphExpr b = expr();
            out = name == "join" ? GraphExpr::join(std::move(a), std::move(b))
                                 : GraphExpr::disjoint_union(std::move(a), std::move(b));
        } else if (name == "complement") {
            out = GraphExpr::complement(expr());
        } else if (name == "delete") {
            GraphExpr a = expr();
            std::vector<VertexPair> ps;
            while (accept(',')) ps.push_back(pair());
            out = GraphExpr::delete_edges(std::move(a), std::move(ps));
        } else if (name == "subdivide") {
            GraphExpr a = expr();
            expect(',');
            out = GraphExpr::subdivide(std::move(a), pair());
        } else {
            fail("unknown operator '" + name + "'");
        }
        expect(')');
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

GraphExpr parse_graph_expr(std::string_view text) { return ExprParser(text).parse(); }

std::string to_string(const GraphExpr& e) {
    using Op = GraphExpr::Op;
    auto pairs = [&] {
        std::string s;
        for (const auto& p : e.pairs) s += "," + std::to_string(p.u) + "-" + std::to_string(p.v);
        return s;
    };
    auto i0 = [&] { return e.ints.empty() ? std::string("?") : std::to_string(e.ints[0]); };
    switch (e.op) {
        case Op::Complete: return "K(" + i0() + ")";
        case Op::Empty: return "empty(" + i0() + ")";
        case Op::Cycle: return "C(" + i0() + ")";
        case Op::CompleteBipartite: return "K(" + i0() + "," + std::to_string(e.ints.at(1)) + ")";
        case Op::H: return "H(" + i0() + ")";
        case Op::J: return "J(" + i0() + ")";
        case Op::Join: return "join(" + to_string(e.args.at(0)) + "," + to_string(e.args.at(1)) + ")";
        case Op::Union: return "union(" + to_string(e.args.at(0)) + "," + to_string(e.args.at(1)) + ")";
        case Op::Complement: return "complement(" + to_string(e.args.at(0)) + ")";
        case Op::DeleteEdges: return "delete(" + to_string(e.args.at(0)) + pairs() + ")";
        case Op::Subdivide: return "subdivide(" + to_string(e.args.at(0)) + pairs() + ")";
    }
    return "?";
}

namespace {

// K1 + block on 0..k, then x, y joined to all of it and to the subdivision vertex z.
Graph plus_record(const Graph& block) {
    const int k = block.max_label();
    const int x = k + 1, y = k + 2, z = k + 3;
    std::vector<VertexPair> es = block.edges();
    for (int v = 1; v <= k; ++v) es.emplace_back(0, v);
    for (int v = 0; v <= k; ++v) {
        es.emplace_back(x, v);
        es.emplace_back(y, v);
    }
    es.emplace_back(x, z);
    es.emplace_back(y, z);
    return Graph(range(0, k + 4), es);
}

Graph complete_minus(int n, std::vector<VertexPair> missing) {
    return complete_on(range(0, n)).with_edges_removed(missing);
}

}  // namespace

Graph phi_7_2_plus_star_variant(int variant) {
    Graph k4 = complete_on({1, 2, 3, 4});
    std::vector<VertexPair> del;
    if (variant == 0)
        del = {{1, 3}, {2, 3}};
    else if (variant == 1)
        del = {{1, 2}, {3, 4}};
    else
        throw DomainError("variant must be 0 or 1");
    return plus_record(k4.with_edges_removed(del));
}

std::vector<std::string> phi_names() {
    return {"phi_4_0",          "phi_5_0_star",         "phi_6_1",
            "phi_7_0_plus",     "phi_7_2_plus",         "phi_7_4_plus",
            "phi_7_2_plus_star", "phi_8_4_star",        "phi_10_1_star",
            "phi_11_8_plus_star", "phi_11_4_plus_star", "phi_11_0_plus_star"};
}

Graph phi_target(const std::string& name) {
    if (name == "phi_4_0") return complete_on(range(0, 4));
    if (name == "phi_5_0_star") return complete_on(range(0, 5));
    if (name == "phi_6_1") return complete_minus(6, {{4, 5}});
    if (name == "phi_7_0_plus") return plus_record(h_graph(0));
    if (name == "phi_7_2_plus") return plus_record(h_graph(2));
    if (name == "phi_7_4_plus") return plus_record(h_graph(4));
    if (name == "phi_7_2_plus_star") return phi_7_2_plus_star_variant(0);
    if (name == "phi_8_4_star") return complete_minus(8, {{4, 5}, {5, 6}, {6, 7}, {4, 7}});
    if (name == "phi_10_1_star") return complete_minus(10, {{8, 9}});
    if (name == "phi_11_8_plus_star") return plus_record(j_graph(8));
    if (name == "phi_11_4_plus_star") return plus_record(j_graph(4));
    if (name == "phi_11_0_plus_star") return plus_record(j_graph(0));
    throw DomainError("unknown record '" + name + "'");
}

JoinLabels join_labels(const std::string& name) {
    if (name.rfind("phi_7_", 0) == 0 && name.find("plus") != std::string::npos) return {5, 6, 7};
    if (name.rfind("phi_11_", 0) == 0 && name.find("plus") != std::string::npos) return {9, 10, 11};
    return {};
}

bool are_isomorphic(const Graph& g, const Graph& h) {
    constexpr std::size_t kMax = 16;
    if (g.vertex_count() > kMax || h.vertex_count() > kMax)
        throw DomainError("isomorphism test limited to 16 vertices");
    if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count()) return false;
    const auto n = g.vertex_count();
    auto masks = [](const Graph& x) {
        std::vector<std::uint32_t> m(x.vertex_count(), 0);
        for (const auto& e : x.edges()) {
            auto a = *x.index_of(e.u), b = *x.index_of(e.v);
            m[a] |= 1U << b;
            m[b] |= 1U << a;
        }
        return m;
    };
    const auto gm = masks(g), hm = masks(h);
    auto deg = [](std::uint32_t m) { return __builtin_popcount(m); };
    // invariant per vertex: degree and sorted neighbor degrees
    auto signature = [&](const std::vector<std::uint32_t>& m, std::size_t v) {
        std::vector<int> s{deg(m[v])};
        std::vector<int> nd;
        for (std::size_t w = 0; w < m.size(); ++w)
            if (m[v] >> w & 1U) nd.push_back(deg(m[w]));
        std::sort(nd.begin(), nd.end());
        s.insert(s.end(), nd.begin(), nd.end());
        return s;
    };
    std::vector<std::vector<int>> gs(n), hs(n);
    for (std::size_t v = 0; v < n; ++v) {
        gs[v] = signature(gm, v);
        hs[v] = signature(hm, v);
    }
    {
        auto a = gs, b = hs;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return false;
    }
    // greedy order: most already-placed neighbors first, then highest degree
    std::vector<std::size_t> order;
    std::uint32_t placed = 0;
    while (order.size() < n) {
        std::size_t best = n;
        int best_links = -1, best_deg = -1;
        for (std::size_t v = 0; v < n; ++v) {
            if (placed >> v & 1U) continue;
            const int links = deg(gm[v] & placed);
            if (links > best_links || (links == best_links && deg(gm[v]) > best_deg)) {
                best = v;
                best_links = links;
                best_deg = deg(gm[v]);
            }
        }
        placed |= 1U << best;
        order.push_back(best);
    }
    std::vector<int> image(n, -1);
    std::uint32_t used = 0;
    std::function<bool(std::size_t)> extend = [&](std::size_t k) {
        if (k == n) return true;
        const auto v = order[k];
        for (std::size_t w = 0; w < n; ++w) {
            if (used >> w & 1U) continue;
            if (gs[v] != hs[w]) continue;
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) {
                const auto u = order[j];
                const bool ge = gm[v] >> u & 1U;
                const bool he = hm[w] >> static_cast<std::size_t>(image[u]) & 1U;
                ok = ge == he;
            }
            if (!ok) continue;
            image[v] = static_cast<int>(w);
            used |= 1U << w;
            if (extend(k + 1)) return true;
            used &= ~(1U << w);
            image[v] = -1;
        }
        return false;
    };
    return extend(0);
}

}  // namespace quadforge
