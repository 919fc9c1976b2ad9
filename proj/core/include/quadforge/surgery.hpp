#pragma once

#include <array>
#include <map>
#include <vector>

#include "quadforge/embedding.hpp"

namespace quadforge {

/// A vertex of a quadrangular embedding with its disk boundary: the neighbors
/// `around[i]` in rotation order and the far corner `far[i]` of the face between
/// `around[i]` and `around[i+1]`.
struct DiamondSite {
    int vertex = 0;
    std::vector<int> around;
    std::vector<int> far;
};

/// Throws SurgeryError unless `v` has degree >= 3, the embedding is quadrangular,
/// and every face at `v` has exactly one corner there.
DiamondSite diamond_site(const Embedding& emb, int v);

struct DiamondSumResult {
    Embedding embedding;
    /// Where each surviving vertex of the second operand ended up.
    std::map<int, int> second_labels;
};

/// Diamond sum of `a` at `v` and `b` at `w`: both vertices are removed and their
/// disk boundaries glued. Neighbor `around_a[i]` is identified with
/// `around_b[(offset - i) mod d]`, or `around_b[(offset + i) mod d]` when `reflect`.
///
/// Labels of `a` are kept; identified neighbors take `a`'s labels; other vertices
/// of `b` keep theirs unless they collide with a label of `a`, in which case they
/// receive M + 1, M + 2, ... in increasing order, M the largest label of
/// either operand.
DiamondSumResult diamond_sum_labeled(const Embedding& a, int v, const Embedding& b, int w, int offset = 0,
                                     bool reflect = false);
Embedding diamond_sum(const Embedding& a, int v, const Embedding& b, int w, int offset = 0, bool reflect = false);

/// Sufficient condition for a diamond sum at `v` and `w` to be face-simple: one
/// operand is face-simple and quadrangular with minimum degree >= 3 and an
/// independent neighborhood at its site, the other is nearly face-simple except at
/// its site, and the site degrees agree. Either operand may take either role.
bool face_simple_sum_hypotheses(const Embedding& a, int v, const Embedding& b, int w);

/// Handle through faces alpha = (a, p, c, q) and beta = (b, r, d, s) adding the
/// 4-cycle (a b c d).
struct HandleSite {
    std::array<int, 4> alpha{};  // a, p, c, q
    std::array<int, 4> beta{};   // b, r, d, s

    friend bool operator==(const HandleSite&, const HandleSite&) = default;
};

/// Removes alpha and beta, adds edges ab, bc, cd, da and the faces
/// (a,p,c,b), (c,q,a,d), (b,r,d,c), (d,s,b,a).
Embedding handle_augment(const Embedding& emb, const HandleSite& site);

/// All sites adding `cycle` = (a, b, c, d), in deterministic order. For an
/// orientable embedding only orientation-preserving sites are returned. Empty
/// when an edge of the cycle already exists. SurgeryError on repeated vertices.
std::vector<HandleSite> find_handle_sites(const Embedding& emb, std::array<int, 4> cycle);

/// Deletes the degree-2 vertex `z` with its two edges: faces (z,x,p,y) and (z,y,q,x) merge into (x,p,y,q).
Embedding delete_degree2(const Embedding& emb, int z);

/// Adds a fresh vertex (smallest unused label) inside `face`, joined to the corner
/// `p` and its opposite corner. `face` is given by its vertex cycle.
Embedding insert_degree2(const Embedding& emb, const std::vector<int>& face, int p);
/// Label insert_degree2 would assign.
int fresh_label(const Graph& g);

}  // namespace quadforge
