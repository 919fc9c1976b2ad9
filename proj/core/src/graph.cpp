#include "quadforge/graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <string>

#include "quadforge/error.hpp"

namespace quadforge {

Graph::Graph(std::vector<int> vertices, std::vector<VertexPair> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    if (!vertices_.empty() && vertices_.front() < 0)
        throw StructureError("negative vertex label " + std::to_string(vertices_.front()));
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    adjacency_.assign(vertices_.size(), {});
    for (const auto& e : edges_) {
        if (e.u == e.v) throw StructureError("loop at vertex " + std::to_string(e.u));
        auto iu = index_of(e.u);
        auto iv = index_of(e.v);
        if (!iu || !iv)
            throw StructureError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                 "} has an endpoint outside the vertex set");
        adjacency_[*iu].push_back(e.v);
        adjacency_[*iv].push_back(e.u);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

Graph Graph::from_edges(std::span<const VertexPair> edges) {
    std::vector<int> vs;
    for (const auto& e : edges) {
        vs.push_back(e.u);
        vs.push_back(e.v);
    }
    return Graph(std::move(vs), {edges.begin(), edges.end()});
}

bool Graph::has_vertex(int label) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), label);
}

std::optional<std::size_t> Graph::index_of(int label) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), label);
    if (it == vertices_.end() || *it != label) return std::nullopt;
    return static_cast<std::size_t>(it - vertices_.begin());
}

std::optional<std::size_t> Graph::edge_id(int a, int b) const {
    if (a == b) return std::nullopt;
    VertexPair key(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

bool Graph::has_edge(int a, int b) const { return edge_id(a, b).has_value(); }

std::vector<int> Graph::neighbors(int label) const {
    auto i = index_of(label);
    if (!i) throw StructureError("unknown vertex " + std::to_string(label));
    return adjacency_[*i];
}

std::size_t Graph::degree(int label) const {
    auto i = index_of(label);
    if (!i) throw StructureError("unknown vertex " + std::to_string(label));
    return adjacency_[*i].size();
}

bool Graph::is_connected() const {
    if (vertices_.empty()) return true;
    std::vector<char> seen(vertices_.size(), 0);
    std::queue<std::size_t> todo;
    todo.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!todo.empty()) {
        auto i = todo.front();
        todo.pop();
        for (int w : adjacency_[i]) {
            auto j = *index_of(w);
            if (!seen[j]) {
                seen[j] = 1;
                ++reached;
                todo.push(j);
            }
        }
    }
    return reached == vertices_.size();
}

int Graph::max_label() const { return vertices_.empty() ? -1 : vertices_.back(); }

Graph Graph::with_edges_removed(std::span<const VertexPair> removed) const {
    std::vector<VertexPair> kept;
    for (const auto& e : edges_)
        if (std::find(removed.begin(), removed.end(), e) == removed.end()) kept.push_back(e);
    return Graph(vertices_, std::move(kept));
}

Graph Graph::relabeled(const std::vector<std::pair<int, int>>& map) const {
    std::map<int, int> m(map.begin(), map.end());
    auto image = [&](int x) {
        auto it = m.find(x);
        if (it == m.end()) throw StructureError("relabel map misses vertex " + std::to_string(x));
        return it->second;
    };
    std::vector<int> vs;
    for (int x : vertices_) vs.push_back(image(x));
    std::vector<VertexPair> es;
    for (const auto& e : edges_) es.emplace_back(image(e.u), image(e.v));
    Graph out(vs, es);
    if (out.vertex_count() != vertex_count()) throw StructureError("relabel map is not injective");
    return out;
}

int min_degree(const Graph& g) {
    if (g.vertex_count() == 0) return 0;
    std::size_t best = g.vertex_count();
    for (int v : g.vertices()) best = std::min(best, g.degree(v));
    return static_cast<int>(best);
}

std::vector<int> universal_vertices(const Graph& g) {
    std::vector<int> out;
    for (int v : g.vertices())
        if (g.degree(v) + 1 == g.vertex_count()) out.push_back(v);
    return out;
}

long long missing_edge_count(const Graph& g) {
    auto n = static_cast<long long>(g.vertex_count());
    return n * (n - 1) / 2 - static_cast<long long>(g.edge_count());
}

}  // namespace quadforge
