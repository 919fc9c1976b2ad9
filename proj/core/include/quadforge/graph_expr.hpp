#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "quadforge/graph.hpp"

namespace quadforge {

/// Expression tree over the graph operators used to describe target graphs.
///
/// Labeling: K(k), empty(k) and C(k) use 0..k-1; K(m,n) puts its m-side on
/// 0..m-1 and its n-side on m..m+n-1; H(i) uses 1..4 and J(i) uses 1..8.
/// join and union keep the left operand's labels; when the right operand's
/// labels collide with them, every right label is shifted by
/// max(left) + 1 - min(right). subdivide introduces max + 1.
///
/// Text syntax (prefix, whitespace-insensitive):
///   K(k) | complete(k) | empty(k) | C(k) | K(m,n) | H(i) | J(i)
///   join(e,e) | union(e,e) | disjoint_union(e,e) | complement(e)
///   delete(e, u-v, ...) | subdivide(e, u-v)
struct GraphExpr {
    enum class Op { Complete, Empty, Cycle, CompleteBipartite, H, J, Join, Union, Complement, DeleteEdges, Subdivide };

    Op op = Op::Empty;
    std::vector<int> ints;
    std::vector<GraphExpr> args;
    std::vector<VertexPair> pairs;

    static GraphExpr complete(int k);
    static GraphExpr empty(int k);
    static GraphExpr cycle(int k);
    static GraphExpr complete_bipartite(int m, int n);
    static GraphExpr h(int i);
    static GraphExpr j(int i);
    static GraphExpr join(GraphExpr a, GraphExpr b);
    static GraphExpr disjoint_union(GraphExpr a, GraphExpr b);
    static GraphExpr complement(GraphExpr a);
    static GraphExpr delete_edges(GraphExpr a, std::vector<VertexPair> edges);
    static GraphExpr subdivide(GraphExpr a, VertexPair edge);
};

/// Throws DomainError on malformed expressions (bad arity, missing edge, ...).
Graph eval(const GraphExpr& expr);
/// Throws FormatError.
GraphExpr parse_graph_expr(std::string_view text);
std::string to_string(const GraphExpr& expr);

/// K4 on {1,2,3,4} minus i edges, i in {0,2,4}.
Graph h_graph(int i);
/// K8 on {1..8} minus the 4-cycle (5 6 7 8) for i = 4, minus both (1 2 3 4) and (5 6 7 8) for i = 8.
Graph j_graph(int i);

/// Vertex names of the subdivided join records: x, y form the independent pair,
/// z is the subdivision vertex adjacent to exactly x and y.
struct JoinLabels {
    int x = -1;
    int y = -1;
    int z = -1;
};

/// Labeled embedded graph of a catalog record. Plain records use 0..n-1 with
/// the missing edges placed on the highest labels; "+" records use 0..k for
/// the K1 + H_i / K1 + J_i block followed by x, y, z.
Graph phi_target(const std::string& name);
/// x, y, z of a "+" record (all -1 for other records).
JoinLabels join_labels(const std::string& name);
/// Names accepted by phi_target.
std::vector<std::string> phi_names();
/// Both K4-minus-two-edges blocks admitted for the orientable 7-vertex "+" record:
/// index 0 removes an adjacent pair (as in H_2), index 1 a matching pair.
Graph phi_7_2_plus_star_variant(int variant);

/// Backtracking isomorphism test with degree-partition pruning (at most 16 vertices,
/// DomainError beyond).
bool are_isomorphic(const Graph& g, const Graph& h);

}  // namespace quadforge
