#include "quadforge/surgery.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "quadforge/error.hpp"

namespace quadforge {

namespace {

std::string pair_name(int a, int b) { return "{" + std::to_string(a) + "," + std::to_string(b) + "}"; }

// `face` rotated so that `v` comes first; empty when v is absent.
std::vector<int> starting_at(const std::vector<int>& face, int v) {
    auto it = std::find(face.begin(), face.end(), v);
    if (it == face.end()) return {};
    std::vector<int> out(it, face.end());
    out.insert(out.end(), face.begin(), it);
    return out;
}

Embedding rebuild(const std::vector<std::vector<int>>& faces, const char* op) {
    try {
        return Embedding::from_faces(faces);
    } catch (const StructureError& ex) {
        throw SurgeryError(std::string(op) + " produced an invalid face set: " + ex.what());
    }
}

void require_quadrangular(const Embedding& emb, const char* op) {
    if (!is_quadrangular(emb)) throw SurgeryError(std::string(op) + " needs a quadrangular embedding");
}

std::size_t face_index(const Embedding& emb, const std::vector<int>& face) {
    const auto key = canonical_cycle(face);
    const auto& faces = emb.faces();
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (canonical_cycle(faces[f].vertices()) == key) return f;
    return faces.size();
}

}  // namespace

DiamondSite diamond_site(const Embedding& emb, int v) {
    const auto& g = emb.graph();
    if (!g.has_vertex(v)) throw SurgeryError("diamond site: unknown vertex " + std::to_string(v));
    require_quadrangular(emb, "diamond sum");
    const auto deg = g.degree(v);
    if (deg < 3) throw SurgeryError("diamond site " + std::to_string(v) + " has degree " + std::to_string(deg) + " < 3");
    std::map<VertexPair, int> far_of;
    std::size_t faces_at_v = 0;
    for (const auto& f : emb.face_vertex_lists()) {
        const auto hits = std::count(f.begin(), f.end(), v);
        if (hits == 0) continue;
        if (hits > 1)
            throw SurgeryError("diamond site " + std::to_string(v) + " has a face with two corners at it");
        ++faces_at_v;
        auto r = starting_at(f, v);
        far_of[VertexPair(r[1], r[3])] = r[2];
    }
    if (faces_at_v != deg || far_of.size() != deg)
        throw SurgeryError("diamond site " + std::to_string(v) + " is not surrounded by distinct faces");
    DiamondSite site;
    site.vertex = v;
    site.around = emb.neighbor_rotation(v);
    for (std::size_t i = 0; i < deg; ++i) {
        auto it = far_of.find(VertexPair(site.around[i], site.around[(i + 1) % deg]));
        if (it == far_of.end()) throw SurgeryError("diamond site " + std::to_string(v) + ": rotation and faces disagree");
        site.far.push_back(it->second);
    }
    return site;
}

DiamondSumResult diamond_sum_labeled(const Embedding& a, int v, const Embedding& b, int w, int offset, bool reflect) {
    const auto da = a.graph().has_vertex(v) ? a.graph().degree(v) : 0;
    const auto db = b.graph().has_vertex(w) ? b.graph().degree(w) : 0;
    if (da != db)
        throw SurgeryError("diamond sum degree mismatch: deg(" + std::to_string(v) + ")=" + std::to_string(da) +
                           " vs deg(" + std::to_string(w) + ")=" + std::to_string(db));
    const DiamondSite sa = diamond_site(a, v);
    const DiamondSite sb = diamond_site(b, w);
    const auto d = static_cast<long long>(da);
    auto sigma = [&](long long i) {
        long long k = reflect ? offset + i : offset - i;
        return static_cast<std::size_t>(((k % d) + d) % d);
    };

    std::map<int, int> label;
    for (long long i = 0; i < d; ++i) label[sb.around[sigma(i)]] = sa.around[static_cast<std::size_t>(i)];
    std::set<int> taken(a.graph().vertices().begin(), a.graph().vertices().end());
    int next_fresh = std::max(a.graph().max_label(), b.graph().max_label()) + 1;
    for (int x : b.graph().vertices()) {
        if (x == w || label.count(x)) continue;
        if (taken.count(x))
            label[x] = next_fresh++;
        else
            label[x] = x;
        taken.insert(label[x]);
    }

    std::set<VertexPair> a_edges;
    for (const auto& e : a.graph().edges())
        if (e.u != v && e.v != v) a_edges.insert(e);
    for (const auto& e : b.graph().edges()) {
        if (e.u == w || e.v == w) continue;
        VertexPair img(label[e.u], label[e.v]);
        if (a_edges.count(img))
            throw SurgeryError("diamond sum identification creates a parallel edge " + pair_name(img.u, img.v) +
                               " (from " + pair_name(e.u, e.v) + " of the second operand)");
    }

    std::vector<std::vector<int>> faces;
    for (const auto& f : a.face_vertex_lists())
        if (std::find(f.begin(), f.end(), v) == f.end()) faces.push_back(f);
    for (const auto& f : b.face_vertex_lists()) {
        if (std::find(f.begin(), f.end(), w) != f.end()) continue;
        std::vector<int> g;
        for (int x : f) g.push_back(label[x]);
        faces.push_back(std::move(g));
    }
    for (long long i = 0; i < d; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const auto si = sigma(i), sn = sigma(i + 1);
        const int far_b = (sn == (si + 1) % static_cast<std::size_t>(d)) ? sb.far[si] : sb.far[sn];
        faces.push_back({sa.around[ui], sa.far[ui], sa.around[(ui + 1) % static_cast<std::size_t>(d)], label[far_b]});
    }

    DiamondSumResult out{rebuild(faces, "diamond sum"), {}};
    for (const auto& [from, to] : label) out.second_labels[from] = to;
    return out;
}

Embedding diamond_sum(const Embedding& a, int v, const Embedding& b, int w, int offset, bool reflect) {
    return diamond_sum_labeled(a, v, b, w, offset, reflect).embedding;
}

namespace {

bool strong_side(const Embedding& emb, int v) {
    const auto& g = emb.graph();
    if (!is_quadrangular(emb) || !is_face_simple(emb) || min_degree(g) < 3) return false;
    const auto nbrs = g.neighbors(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i)
        for (std::size_t j = i + 1; j < nbrs.size(); ++j)
            if (g.has_edge(nbrs[i], nbrs[j])) return false;
    return true;
}

bool weak_side(const Embedding& emb, int v) { return is_quadrangular(emb) && is_nearly_face_simple_except(emb, v); }

}  // namespace

bool face_simple_sum_hypotheses(const Embedding& a, int v, const Embedding& b, int w) {
    if (!a.graph().has_vertex(v) || !b.graph().has_vertex(w)) return false;
    if (a.graph().degree(v) != b.graph().degree(w)) return false;
    return (strong_side(a, v) && weak_side(b, w)) || (strong_side(b, w) && weak_side(a, v));
}

Embedding handle_augment(const Embedding& emb, const HandleSite& site) {
    require_quadrangular(emb, "handle augmentation");
    const auto [a, p, c, q] = site.alpha;
    const auto [b, r, d, s] = site.beta;
    {
        std::set<int> corners{a, b, c, d};
        if (corners.size() != 4) throw SurgeryError("handle site corners a, b, c, d must be distinct");
    }
    const auto& g = emb.graph();
    for (auto [x, y] : {std::pair{a, b}, {b, c}, {c, d}, {d, a}})
        if (g.has_edge(x, y)) throw SurgeryError("handle site: edge " + pair_name(x, y) + " already present");
    const std::vector<int> alpha(site.alpha.begin(), site.alpha.end());
    const std::vector<int> beta(site.beta.begin(), site.beta.end());
    const auto fa = face_index(emb, alpha);
    const auto fb = face_index(emb, beta);
    if (fa == emb.faces().size()) throw SurgeryError("handle site: alpha is not a face (corners not opposite?)");
    if (fb == emb.faces().size()) throw SurgeryError("handle site: beta is not a face (corners not opposite?)");
    if (fa == fb) throw SurgeryError("handle site: alpha and beta are the same face");

    std::vector<std::vector<int>> faces;
    const auto lists = emb.face_vertex_lists();
    for (std::size_t f = 0; f < lists.size(); ++f)
        if (f != fa && f != fb) faces.push_back(lists[f]);
    faces.push_back({a, p, c, b});
    faces.push_back({c, q, a, d});
    faces.push_back({b, r, d, c});
    faces.push_back({d, s, b, a});
    return rebuild(faces, "handle augmentation");
}

std::vector<HandleSite> find_handle_sites(const Embedding& emb, std::array<int, 4> cycle) {
    {
        std::set<int> distinct(cycle.begin(), cycle.end());
        if (distinct.size() != 4) throw SurgeryError("handle cycle needs four distinct vertices");
    }
    if (!is_quadrangular(emb)) return {};
    const auto [a, b, c, d] = cycle;
    const auto& g = emb.graph();
    for (int x : cycle)
        if (!g.has_vertex(x)) return {};
    for (auto [x, y] : {std::pair{a, b}, {b, c}, {c, d}, {d, a}})
        if (g.has_edge(x, y)) return {};

    // faces with x and y at opposite corners, both readings
    auto opposite = [&](int x, int y) {
        std::vector<std::array<int, 4>> out;
        for (const auto& f : emb.face_vertex_lists()) {
            auto r = starting_at(f, x);
            if (r.size() != 4 || r[2] != y) continue;
            out.push_back({x, r[1], y, r[3]});
            out.push_back({x, r[3], y, r[1]});
        }
        return out;
    };
    const bool orientable = is_orientable(emb);
    std::vector<HandleSite> sites;
    for (const auto& alpha : opposite(a, c))
        for (const auto& beta : opposite(b, d)) {
            if (canonical_cycle(alpha) == canonical_cycle(beta)) continue;
            HandleSite site{alpha, beta};
            if (orientable && !is_orientable(handle_augment(emb, site))) continue;
            sites.push_back(site);
        }
    return sites;
}

Embedding delete_degree2(const Embedding& emb, int z) {
    const auto& g = emb.graph();
    if (!g.has_vertex(z)) throw SurgeryError("delete_degree2: unknown vertex " + std::to_string(z));
    if (g.degree(z) != 2)
        throw SurgeryError("delete_degree2: vertex " + std::to_string(z) + " has degree " + std::to_string(g.degree(z)));
    require_quadrangular(emb, "delete_degree2");
    std::vector<std::vector<int>> faces, at_z;
    for (const auto& f : emb.face_vertex_lists()) {
        if (std::find(f.begin(), f.end(), z) == f.end())
            faces.push_back(f);
        else
            at_z.push_back(starting_at(f, z));
    }
    if (at_z.size() != 2) throw SurgeryError("delete_degree2: the two faces at " + std::to_string(z) + " coincide");
    const auto& f1 = at_z[0];
    const auto& f2 = at_z[1];
    const int x = f1[1], p = f1[2], y = f1[3];
    const int q = f2[2];
    faces.push_back({x, p, y, q});
    return rebuild(faces, "delete_degree2");
}

int fresh_label(const Graph& g) {
    int label = 0;
    for (int v : g.vertices()) {
        if (v != label) break;
        ++label;
    }
    return label;
}

Embedding insert_degree2(const Embedding& emb, const std::vector<int>& face, int p) {
    require_quadrangular(emb, "insert_degree2");
    const auto fi = face_index(emb, face);
    if (fi == emb.faces().size()) throw SurgeryError("insert_degree2: the given cycle is not a face");
    const auto lists = emb.face_vertex_lists();
    auto r = starting_at(lists[fi], p);
    if (r.empty()) throw SurgeryError("insert_degree2: " + std::to_string(p) + " is not a corner of the face");
    if (r[0] == r[2]) throw SurgeryError("insert_degree2: opposite corners coincide");
    const int z = fresh_label(emb.graph());
    std::vector<std::vector<int>> faces;
    for (std::size_t f = 0; f < lists.size(); ++f)
        if (f != fi) faces.push_back(lists[f]);
    faces.push_back({r[0], r[1], r[2], z});
    faces.push_back({r[2], r[3], r[0], z});
    return rebuild(faces, "insert_degree2");
}

}  // namespace quadforge
