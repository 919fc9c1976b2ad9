#include "quadforge/embedding.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "quadforge/error.hpp"

namespace quadforge {

namespace {

std::string pair_name(int a, int b) { return "{" + std::to_string(a) + "," + std::to_string(b) + "}"; }

}  // namespace

std::vector<int> FaceWalk::vertices() const {
    std::vector<int> out;
    out.reserve(corners.size());
    for (const auto& c : corners) out.push_back(c.vertex);
    return out;
}

std::string SurfaceClass::name() const {
    if (orientable) {
        if (euler_characteristic == 2) return "sphere";
        if (euler_characteristic == 0) return "torus";
        return "orientable genus " + std::to_string(genus());
    }
    if (euler_characteristic == 1) return "projective plane";
    if (euler_characteristic == 0) return "Klein bottle";
    return "nonorientable genus " + std::to_string(genus());
}

Embedding::Embedding(Graph graph, std::vector<std::vector<std::size_t>> rotation, std::vector<int> signs)
    : graph_(std::move(graph)), rotation_(std::move(rotation)), signs_(std::move(signs)) {
    const auto n = graph_.vertex_count();
    const auto m = graph_.edge_count();
    if (rotation_.size() != n) throw StructureError("rotation system does not cover every vertex");
    if (signs_.size() != m) throw StructureError("signature does not cover every edge");
    if (!graph_.is_connected()) throw StructureError("embedded graph is disconnected");
    for (std::size_t e = 0; e < m; ++e)
        if (signs_[e] != 1 && signs_[e] != -1) throw StructureError("edge sign must be +1 or -1");

    for (std::size_t i = 0; i < n; ++i) {
        const int v = graph_.vertices()[i];
        auto& rot = rotation_[i];
        std::vector<std::size_t> expected;
        for (int w : graph_.neighbors(v)) expected.push_back(*graph_.edge_id(v, w));
        std::vector<std::size_t> got = rot;
        std::sort(expected.begin(), expected.end());
        std::sort(got.begin(), got.end());
        if (got != expected) {
            for (std::size_t k = 1; k < got.size(); ++k)
                if (got[k] == got[k - 1])
                    throw StructureError("rotation at vertex " + std::to_string(v) + " repeats edge " +
                                         std::to_string(got[k]));
            throw StructureError("rotation at vertex " + std::to_string(v) +
                                 " does not list exactly its incident edges");
        }
        if (!rot.empty()) std::rotate(rot.begin(), std::min_element(rot.begin(), rot.end()), rot.end());
    }
    trace();
}

Embedding Embedding::from_neighbor_rotation(Graph graph, const std::map<int, std::vector<int>>& rotation,
                                            std::span<const VertexPair> negative) {
    std::vector<std::vector<std::size_t>> rot(graph.vertex_count());
    for (std::size_t i = 0; i < graph.vertex_count(); ++i) {
        const int v = graph.vertices()[i];
        auto it = rotation.find(v);
        if (it == rotation.end()) throw StructureError("no rotation for vertex " + std::to_string(v));
        for (int w : it->second) {
            auto e = graph.edge_id(v, w);
            if (!e) throw StructureError("rotation at " + std::to_string(v) + " names non-edge " + pair_name(v, w));
            rot[i].push_back(*e);
        }
    }
    std::vector<int> signs(graph.edge_count(), 1);
    for (const auto& p : negative) {
        auto e = graph.edge_id(p.u, p.v);
        if (!e) throw StructureError("negative sign on non-edge " + pair_name(p.u, p.v));
        signs[*e] = -1;
    }
    return Embedding(std::move(graph), std::move(rot), std::move(signs));
}

void Embedding::trace() {
    const auto m = graph_.edge_count();
    const auto& edges = graph_.edges();
    // dart d = 2*edge + end; state s = 2*d + (flag < 0)
    std::vector<std::size_t> dart_vertex(2 * m);
    std::vector<std::size_t> dart_pos(2 * m);
    for (std::size_t i = 0; i < rotation_.size(); ++i) {
        const int v = graph_.vertices()[i];
        for (std::size_t p = 0; p < rotation_[i].size(); ++p) {
            const auto e = rotation_[i][p];
            const std::size_t d = 2 * e + (edges[e].u == v ? 0 : 1);
            dart_vertex[d] = i;
            dart_pos[d] = p;
        }
    }
    auto dart_at = [&](std::size_t vi, std::size_t e) {
        return 2 * e + (edges[e].u == graph_.vertices()[vi] ? 0 : 1);
    };
    auto step_rot = [&](std::size_t d, int dir) {
        const auto vi = dart_vertex[d];
        const auto& rot = rotation_[vi];
        const auto k = rot.size();
        const auto p = (dart_pos[d] + (dir > 0 ? 1 : k - 1)) % k;
        return dart_at(vi, rot[p]);
    };
    auto next = [&](std::size_t s) {
        const std::size_t d = s / 2;
        int flag = (s % 2) ? -1 : 1;
        const std::size_t e = d / 2;
        flag *= signs_[e];
        const std::size_t arrive = d ^ 1U;
        const std::size_t leave = step_rot(arrive, flag);
        return 2 * leave + (flag < 0 ? 1 : 0);
    };
    auto reverse = [&](std::size_t s) {
        const std::size_t d = s / 2;
        const int flag = (s % 2) ? -1 : 1;
        return 2 * step_rot(d, -flag) + (flag < 0 ? 0 : 1);
    };

    faces_.clear();
    std::vector<char> seen(4 * m, 0);
    for (std::size_t s0 = 0; s0 < 4 * m; ++s0) {
        if (seen[s0]) continue;
        std::vector<std::size_t> orbit;
        std::size_t s = s0;
        do {
            seen[s] = 1;
            orbit.push_back(s);
            s = next(s);
            if (orbit.size() > 4 * m) throw StructureError("face tracing did not close");
        } while (s != s0);
        const std::size_t r0 = reverse(s0);
        if (seen[r0]) throw StructureError("face walk is its own reverse");
        s = r0;
        do {
            if (seen[s]) throw StructureError("reverse face walk overlaps a traced walk");
            seen[s] = 1;
            s = next(s);
        } while (s != r0);

        FaceWalk walk;
        for (std::size_t k = 0; k < orbit.size(); ++k) {
            const std::size_t prev = orbit[(k + orbit.size() - 1) % orbit.size()];
            const std::size_t d = orbit[k] / 2;
            walk.corners.push_back(
                Corner{graph_.vertices()[dart_vertex[d]], prev / 4, d / 2});
        }
        faces_.push_back(std::move(walk));
    }

    edge_faces_.assign(m, {0, 0});
    std::vector<int> used(m, 0);
    for (std::size_t f = 0; f < faces_.size(); ++f)
        for (const auto& c : faces_[f].corners) {
            if (used[c.out_edge] >= 2) throw StructureError("edge used more than twice by faces");
            edge_faces_[c.out_edge][used[c.out_edge]++] = f;
        }
    for (std::size_t e = 0; e < m; ++e)
        if (used[e] != 2) throw StructureError("edge not used exactly twice by faces");
}

std::vector<int> Embedding::neighbor_rotation(int label) const {
    auto i = graph_.index_of(label);
    if (!i) throw StructureError("unknown vertex " + std::to_string(label));
    std::vector<int> out;
    for (auto e : rotation_[*i]) {
        const auto& p = graph_.edges()[e];
        out.push_back(p.u == label ? p.v : p.u);
    }
    return out;
}

std::vector<std::vector<int>> Embedding::face_vertex_lists() const {
    std::vector<std::vector<int>> out;
    out.reserve(faces_.size());
    for (const auto& f : faces_) out.push_back(f.vertices());
    return out;
}

std::vector<int> canonical_cycle(std::span<const int> cycle) {
    std::vector<int> best;
    const auto k = cycle.size();
    for (int dir : {1, -1})
        for (std::size_t start = 0; start < k; ++start) {
            std::vector<int> cand;
            cand.reserve(k);
            for (std::size_t j = 0; j < k; ++j) {
                const auto idx = dir > 0 ? (start + j) % k : (start + k - j) % k;
                cand.push_back(cycle[idx]);
            }
            if (best.empty() || cand < best) best = std::move(cand);
        }
    return best;
}

Embedding Embedding::from_faces(const std::vector<std::vector<int>>& faces) {
    std::vector<VertexPair> pairs;
    for (const auto& f : faces) {
        if (f.size() < 2) throw StructureError("face with fewer than two corners");
        for (std::size_t i = 0; i < f.size(); ++i) {
            const int a = f[i];
            const int b = f[(i + 1) % f.size()];
            if (a == b) throw StructureError("face contains a loop at " + std::to_string(a));
            pairs.emplace_back(a, b);
        }
    }
    Graph g = Graph::from_edges(pairs);
    const auto m = g.edge_count();
    const auto n = g.vertex_count();

    std::vector<int> sides(m, 0);
    for (const auto& p : pairs) ++sides[*g.edge_id(p.u, p.v)];
    for (std::size_t e = 0; e < m; ++e)
        if (sides[e] != 2)
            throw StructureError("edge " + pair_name(g.edges()[e].u, g.edges()[e].v) + " lies on " +
                                 std::to_string(sides[e]) + " face sides");

    struct FaceCorner {
        std::size_t in_edge, out_edge, face, pos;
    };
    std::vector<std::vector<FaceCorner>> corners(n);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& fc = faces[f];
        const auto k = fc.size();
        for (std::size_t i = 0; i < k; ++i) {
            const int prev = fc[(i + k - 1) % k];
            const int cur = fc[i];
            const int nxt = fc[(i + 1) % k];
            corners[*g.index_of(cur)].push_back({*g.edge_id(prev, cur), *g.edge_id(cur, nxt), f, i});
        }
    }

    // +1 when the link walk at the corner's vertex runs from in_edge to out_edge
    std::vector<std::vector<int>> local(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) local[f].assign(faces[f].size(), 0);

    std::vector<std::vector<std::size_t>> rotation(n);
    for (std::size_t vi = 0; vi < n; ++vi) {
        const int v = g.vertices()[vi];
        const auto& cs = corners[vi];
        const auto deg = g.degree(v);
        if (cs.size() != deg)
            throw StructureError("vertex " + std::to_string(v) + " has " + std::to_string(cs.size()) +
                                 " corners but degree " + std::to_string(deg));
        std::map<std::size_t, std::vector<std::size_t>> at_dart;
        for (std::size_t c = 0; c < cs.size(); ++c) {
            at_dart[cs[c].in_edge].push_back(c);
            at_dart[cs[c].out_edge].push_back(c);
        }
        const std::size_t start = at_dart.begin()->first;
        std::size_t cur_dart = start;
        std::size_t cur_corner = at_dart.begin()->second.front();
        std::vector<char> used(cs.size(), 0);
        std::vector<std::size_t> rot{start};
        std::size_t visited = 0;
        while (true) {
            if (used[cur_corner])
                throw StructureError("link of vertex " + std::to_string(v) + " is not a single cycle");
            used[cur_corner] = 1;
            ++visited;
            const auto& c = cs[cur_corner];
            const bool forward = c.in_edge == cur_dart;
            local[c.face][c.pos] = forward ? 1 : -1;
            const std::size_t other = forward ? c.out_edge : c.in_edge;
            if (other == start && visited == cs.size()) break;
            if (other == start)
                throw StructureError("link of vertex " + std::to_string(v) + " is not a single cycle (pinched)");
            rot.push_back(other);
            const auto& inc = at_dart[other];
            std::size_t nxt = inc[0] == cur_corner ? inc[1] : inc[0];
            if (inc[0] == cur_corner && inc[1] == cur_corner) nxt = cur_corner;
            cur_dart = other;
            cur_corner = nxt;
        }
        if (rot.size() != deg)
            throw StructureError("link of vertex " + std::to_string(v) + " is not a single cycle");
        rotation[vi] = std::move(rot);
    }

    std::vector<int> signs(m, 0);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& fc = faces[f];
        const auto k = fc.size();
        for (std::size_t i = 0; i < k; ++i) {
            const auto e = *g.edge_id(fc[i], fc[(i + 1) % k]);
            const int s = local[f][i] * local[f][(i + 1) % k];
            if (signs[e] == 0)
                signs[e] = s;
            else if (signs[e] != s)
                throw StructureError("inconsistent edge sign on " + pair_name(g.edges()[e].u, g.edges()[e].v));
        }
    }

    // switch so that BFS tree edges are positive (all edges, when orientable)
    {
        std::vector<int> s(n, 0);
        std::queue<std::size_t> todo;
        s[0] = 1;
        todo.push(0);
        while (!todo.empty()) {
            const auto a = todo.front();
            todo.pop();
            for (int u : g.neighbors(g.vertices()[a])) {
                const auto b = *g.index_of(u);
                if (s[b] != 0) continue;
                s[b] = s[a] * signs[*g.edge_id(g.vertices()[a], u)];
                todo.push(b);
            }
        }
        for (std::size_t vi = 0; vi < n; ++vi)
            if (s[vi] < 0) std::reverse(rotation[vi].begin() + 1, rotation[vi].end());
        for (std::size_t e = 0; e < m; ++e)
            signs[e] *= s[*g.index_of(g.edges()[e].u)] * s[*g.index_of(g.edges()[e].v)];
    }

    Embedding emb(std::move(g), std::move(rotation), std::move(signs));

    std::multiset<std::vector<int>> want, got;
    for (const auto& f : faces) want.insert(canonical_cycle(f));
    for (const auto& f : emb.faces()) got.insert(canonical_cycle(f.vertices()));
    if (want != got) throw StructureError("rebuilt embedding does not reproduce the requested faces");
    return emb;
}

const std::vector<FaceWalk>& trace_faces(const Embedding& emb) { return emb.faces(); }

int euler_characteristic(const Embedding& emb) {
    return static_cast<int>(emb.graph().vertex_count()) - static_cast<int>(emb.graph().edge_count()) +
           static_cast<int>(emb.faces().size());
}

bool is_orientable(const Embedding& emb) {
    const auto& g = emb.graph();
    if (!g.is_connected()) throw StructureError("orientability requires a connected graph");
    const auto n = g.vertex_count();
    if (n == 0) return true;
    std::vector<int> side(n, 0);
    std::vector<std::vector<std::pair<std::size_t, int>>> adj(n);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto a = *g.index_of(g.edges()[e].u);
        auto b = *g.index_of(g.edges()[e].v);
        adj[a].emplace_back(b, emb.sign(e));
        adj[b].emplace_back(a, emb.sign(e));
    }
    std::queue<std::size_t> todo;
    side[0] = 1;
    todo.push(0);
    while (!todo.empty()) {
        auto a = todo.front();
        todo.pop();
        for (auto [b, s] : adj[a]) {
            const int want = side[a] * s;
            if (side[b] == 0) {
                side[b] = want;
                todo.push(b);
            } else if (side[b] != want) {
                return false;
            }
        }
    }
    return true;
}

SurfaceClass surface_class(const Embedding& emb) {
    SurfaceClass out{is_orientable(emb), euler_characteristic(emb)};
    if (out.orientable && (out.euler_characteristic % 2 != 0))
        throw StructureError("orientable embedding with odd Euler characteristic");
    return out;
}

bool is_quadrangular(const Embedding& emb) {
    return std::all_of(emb.faces().begin(), emb.faces().end(), [](const FaceWalk& f) { return f.length() == 4; });
}

namespace {

bool shares_at_most_one(const Embedding& emb, const std::vector<char>& counted) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    const auto& ef = emb.edge_faces();
    for (std::size_t e = 0; e < ef.size(); ++e) {
        if (!counted[e]) continue;
        auto [a, b] = ef[e];
        if (a == b) return false;
        if (!seen.emplace(std::min(a, b), std::max(a, b)).second) return false;
    }
    return true;
}

}  // namespace

bool is_face_simple(const Embedding& emb) {
    return shares_at_most_one(emb, std::vector<char>(emb.graph().edge_count(), 1));
}

bool is_nearly_face_simple_except(const Embedding& emb, int v) {
    const auto& g = emb.graph();
    if (!g.has_vertex(v)) throw StructureError("unknown vertex " + std::to_string(v));
    std::vector<char> counted(g.edge_count(), 1);
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        if (g.edges()[e].u == v || g.edges()[e].v == v) counted[e] = 0;
    return shares_at_most_one(emb, counted);
}

bool DualMultigraph::has_loop() const {
    return std::any_of(edges.begin(), edges.end(), [](const auto& e) { return e.first == e.second; });
}

bool DualMultigraph::has_parallel_edges() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [a, b] : edges)
        if (!seen.emplace(std::min(a, b), std::max(a, b)).second) return true;
    return false;
}

Graph DualMultigraph::simple_graph() const {
    std::vector<int> vs(node_count);
    for (std::size_t i = 0; i < node_count; ++i) vs[i] = static_cast<int>(i);
    std::vector<VertexPair> es;
    for (const auto& [a, b] : edges)
        if (a != b) es.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return Graph(vs, es);
}

DualMultigraph dual_multigraph(const Embedding& emb) {
    DualMultigraph d;
    d.node_count = emb.faces().size();
    for (const auto& [a, b] : emb.edge_faces()) d.edges.emplace_back(a, b);
    return d;
}

Embedding relabel(const Embedding& emb, const std::map<int, int>& map) {
    auto image = [&](int x) {
        auto it = map.find(x);
        if (it == map.end()) throw StructureError("relabel map misses vertex " + std::to_string(x));
        return it->second;
    };
    std::vector<std::pair<int, int>> pairs(map.begin(), map.end());
    Graph g = emb.graph().relabeled(pairs);
    std::map<int, std::vector<int>> rot;
    for (int v : emb.graph().vertices()) {
        auto& r = rot[image(v)];
        for (int w : emb.neighbor_rotation(v)) r.push_back(image(w));
    }
    std::vector<VertexPair> negative;
    for (std::size_t e = 0; e < emb.graph().edge_count(); ++e)
        if (emb.sign(e) < 0) negative.emplace_back(image(emb.graph().edges()[e].u), image(emb.graph().edges()[e].v));
    return Embedding::from_neighbor_rotation(std::move(g), rot, negative);
}

Embedding compact_labels(const Embedding& emb) {
    std::map<int, int> map;
    int next = 0;
    for (int v : emb.graph().vertices()) map[v] = next++;
    return relabel(emb, map);
}

}  // namespace quadforge
