#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace quadforge {

/// Unordered vertex pair stored with `u < v`.
struct VertexPair {
    int u = 0;
    int v = 0;

    VertexPair() = default;
    VertexPair(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

/// Labeled simple graph. Vertices are kept sorted and edges are kept sorted by
/// (u, v); an edge's position in `edges()` is its canonical id.
class Graph {
public:
    Graph() = default;

    /// Throws StructureError on loops, endpoints outside `vertices`, or negative labels.
    /// Duplicate vertices/edges collapse.
    Graph(std::vector<int> vertices, std::vector<VertexPair> edges);

    static Graph from_edges(std::span<const VertexPair> edges);

    const std::vector<int>& vertices() const noexcept { return vertices_; }
    const std::vector<VertexPair>& edges() const noexcept { return edges_; }
    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    bool has_vertex(int label) const;
    bool has_edge(int a, int b) const;
    /// Position of `label` in `vertices()`, or nullopt.
    std::optional<std::size_t> index_of(int label) const;
    /// Position of edge {a,b} in `edges()`, or nullopt.
    std::optional<std::size_t> edge_id(int a, int b) const;

    /// Sorted neighbor labels.
    std::vector<int> neighbors(int label) const;
    std::size_t degree(int label) const;
    bool is_connected() const;
    int max_label() const;

    Graph with_edges_removed(std::span<const VertexPair> removed) const;
    /// Relabels vertices through `map` (every vertex must be a key; images must be distinct).
    Graph relabeled(const std::vector<std::pair<int, int>>& map) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
    }

private:
    std::vector<int> vertices_;
    std::vector<VertexPair> edges_;
    std::vector<std::vector<int>> adjacency_;  // parallel to vertices_
};

int min_degree(const Graph& g);
std::vector<int> universal_vertices(const Graph& g);

/// Number of edges missing from the complete graph on the same vertex set.
long long missing_edge_count(const Graph& g);

}  // namespace quadforge
