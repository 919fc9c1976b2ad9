#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "quadforge/graph.hpp"

namespace quadforge {

/// One end of an edge: `end == 0` is the `u` endpoint of `graph.edges()[edge]`.
struct Dart {
    std::size_t edge = 0;
    int end = 0;

    friend auto operator<=>(const Dart&, const Dart&) = default;
};

/// A face corner: the walk enters `vertex` along `in_edge` and leaves along `out_edge`.
struct Corner {
    int vertex = 0;
    std::size_t in_edge = 0;
    std::size_t out_edge = 0;

    friend bool operator==(const Corner&, const Corner&) = default;
};

/// Closed boundary walk of one face.
struct FaceWalk {
    std::vector<Corner> corners;

    std::size_t length() const noexcept { return corners.size(); }
    /// Vertex labels in walk order.
    std::vector<int> vertices() const;

    friend bool operator==(const FaceWalk&, const FaceWalk&) = default;
};

struct SurfaceClass {
    bool orientable = true;
    int euler_characteristic = 2;

    /// Orientable genus (2 - chi) / 2, or crosscap number 2 - chi.
    int genus() const noexcept {
        return orientable ? (2 - euler_characteristic) / 2 : 2 - euler_characteristic;
    }
    std::string name() const;

    friend bool operator==(const SurfaceClass&, const SurfaceClass&) = default;
};

/// Cellular embedding of a connected simple graph, stored as a signed rotation
/// system: a cyclic order of incident edges at each vertex and a sign per edge.
///
/// Face tracing convention (used repo-wide): a walk carries a local orientation
/// flag, initially +1. Leaving vertex v along edge e, the flag is multiplied by
/// sign(e) on arrival at the other end w; the walk then leaves w along the
/// rotation successor of e at w when the flag is +1 and along the predecessor
/// when it is -1.
///
/// Rotations are normalized to start at their smallest edge id. Embeddings are
/// immutable; faces are traced once at construction.
class Embedding {
public:
    Embedding() = default;

    /// `rotation[i]` lists the edge ids incident to `graph.vertices()[i]` in cyclic
    /// order; `signs[e]` is +1 or -1. Throws StructureError on malformed input.
    Embedding(Graph graph, std::vector<std::vector<std::size_t>> rotation, std::vector<int> signs);

    /// Rotation given by neighbor labels; edges listed in `negative` get sign -1.
    static Embedding from_neighbor_rotation(Graph graph, const std::map<int, std::vector<int>>& rotation,
                                            std::span<const VertexPair> negative = {});

    /// Builds the embedding whose faces are exactly `faces` (cyclic vertex sequences).
    /// Every edge must occur on exactly two face sides and every vertex link must be
    /// a single cycle. The result is re-traced and compared against the input.
    static Embedding from_faces(const std::vector<std::vector<int>>& faces);

    const Graph& graph() const noexcept { return graph_; }
    std::span<const std::size_t> rotation_at(std::size_t vertex_index) const { return rotation_[vertex_index]; }
    /// Neighbor labels of `label` in rotation order.
    std::vector<int> neighbor_rotation(int label) const;
    int sign(std::size_t edge) const { return signs_[edge]; }
    const std::vector<int>& signs() const noexcept { return signs_; }
    const std::vector<FaceWalk>& faces() const noexcept { return faces_; }

    /// Faces as vertex label sequences.
    std::vector<std::vector<int>> face_vertex_lists() const;
    /// For each edge id, the indices of the faces using its two sides.
    const std::vector<std::array<std::size_t, 2>>& edge_faces() const noexcept { return edge_faces_; }

    friend bool operator==(const Embedding& a, const Embedding& b) {
        return a.graph_ == b.graph_ && a.rotation_ == b.rotation_ && a.signs_ == b.signs_;
    }

private:
    void trace();

    Graph graph_;
    std::vector<std::vector<std::size_t>> rotation_;
    std::vector<int> signs_;
    std::vector<FaceWalk> faces_;
    std::vector<std::array<std::size_t, 2>> edge_faces_;
};

/// Face boundary walks, sorted by their smallest (dart, flag) state.
const std::vector<FaceWalk>& trace_faces(const Embedding& emb);
int euler_characteristic(const Embedding& emb);
/// Throws StructureError for a disconnected graph.
bool is_orientable(const Embedding& emb);
SurfaceClass surface_class(const Embedding& emb);
bool is_quadrangular(const Embedding& emb);
bool is_face_simple(const Embedding& emb);
/// Every pair of distinct faces shares at most one edge not incident with `v`,
/// and no face uses an edge not incident with `v` twice.
bool is_nearly_face_simple_except(const Embedding& emb, int v);

/// Faces become nodes; primal edge `e` becomes dual edge `edges[e]`. Loops allowed.
struct DualMultigraph {
    std::size_t node_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    bool has_loop() const;
    bool has_parallel_edges() const;
    /// The simple graph on nodes 0..node_count-1 (only meaningful when loop-free).
    Graph simple_graph() const;
};

DualMultigraph dual_multigraph(const Embedding& emb);

/// Applies an injective label map to every vertex.
Embedding relabel(const Embedding& emb, const std::map<int, int>& map);
/// Relabels vertices to 0..n-1 preserving their order.
Embedding compact_labels(const Embedding& emb);

/// Canonical key of a cyclic sequence up to rotation and reversal.
std::vector<int> canonical_cycle(std::span<const int> cycle);

}  // namespace quadforge
