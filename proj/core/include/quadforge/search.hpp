#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quadforge/embedding.hpp"

namespace quadforge {

enum class Orientability { Orientable, Nonorientable, Either };

/// A named check an embedding must pass in addition to the surface requirements.
struct Predicate {
    enum class Kind {
        FaceSimple,
        NearlyFaceSimpleExcept,  // args: {v}
        HandleSites,             // args: consecutive 4-cycles, applicable one after another
        DeleteDegree2FaceSimple, // args: {z}
        UniversalVertex,
    };
    Kind kind = Kind::FaceSimple;
    std::vector<int> args;

    friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// What a witness embedding must satisfy.
struct WitnessSpec {
    Graph graph;
    int chi = 0;
    Orientability orientability = Orientability::Either;
    bool quadrangular = true;
    std::vector<Predicate> predicates;

    friend bool operator==(const WitnessSpec&, const WitnessSpec&) = default;
};

/// SpecError when chi is inconsistent with quadrangularity (|E| odd or
/// chi != |V| - |E|/2), the graph is disconnected, or a predicate names an
/// unknown vertex.
void validate(const WitnessSpec& spec);
/// True when an orientable/nonorientable requirement can never be met (odd chi
/// for orientable, chi > 1 for nonorientable, chi > 2).
bool trivially_unsatisfiable(const WitnessSpec& spec);

/// Full check of `emb` against `spec`; `why` receives the first failed requirement.
bool satisfies(const Embedding& emb, const WitnessSpec& spec, std::string* why = nullptr);
bool satisfies(const Embedding& emb, const Predicate& pred, std::string* why = nullptr);

/// Spec text format, one directive per line ('#' starts a comment):
///   record <catalog name>     target graph of a catalog record
///   graph <expression>        target graph from the expression syntax
///   edges <u>-<v> ...         explicit edge list (may repeat)
///   chi <int>
///   orientable yes|no|either
///   quadrangular yes
///   predicate face_simple | nearly_face_simple_except <v> | universal_vertex
///   predicate delete_degree2_face_simple <z>
///   predicate handle_sites a b c d [; e f g h ...]
/// `chi` defaults to |V| - |E|/2.
WitnessSpec parse_witness_spec(std::string_view text);
/// Canonical text (explicit edges), used for spec hashes.
std::string to_text(const WitnessSpec& spec);

enum class SearchStatus { Found, None, Exhausted };

struct SearchResult {
    SearchStatus status = SearchStatus::Exhausted;
    std::optional<Embedding> embedding;
    std::uint64_t nodes = 0;
    /// Seed of the run that produced the result.
    std::uint64_t seed = 0;
};

struct ExactOptions {
    /// Total search nodes; 0 = unlimited.
    std::uint64_t node_budget = 0;
    /// 0 = natural order without restarts (a complete search); otherwise candidate
    /// orders are shuffled with this seed and the search restarts on a Luby schedule.
    std::uint64_t seed = 0;
    std::uint64_t restart_unit = 20000;
    /// Parallel workers for seeded runs; each uses seed + worker index.
    int workers = 1;
    /// Cooperative cancellation.
    const std::atomic<bool>* cancel = nullptr;
};

/// Exact depth-first search. For graphs of minimum degree >= 2 every face of a
/// quadrangulation of a simple graph is a 4-cycle, so the search chooses faces:
/// oriented 4-cycles using every arc once for orientable targets, unoriented
/// 4-cycles covering every edge twice otherwise, with every vertex link kept a
/// path until it closes into a single cycle. Face-simplicity predicates prune
/// partial face sets. Other graphs fall back to rotation-system enumeration.
/// Status None proves that no embedding of the labeled graph meets the spec.
SearchResult search_exact(const WitnessSpec& spec, const ExactOptions& options = {});

struct AnnealOptions {
    std::uint64_t seed = 1;
    int restarts = 64;
    std::uint64_t steps_per_restart = 2'000'000;
    double initial_temperature = 2.0;
    double final_temperature = 0.05;
    /// Energy added when the orientability requirement is violated.
    double orientation_penalty = 4.0;
    const std::atomic<bool>* cancel = nullptr;
};

/// Simulated annealing over rotation systems with geometric cooling. Energy is
/// the sum over faces of |length - 4| plus a penalty for wrong orientability.
/// Moves swap two cyclically adjacent entries of one rotation, or flip one edge
/// sign (non-orientable targets only). Deterministic for fixed options. Status
/// None only for specs ruled out by parity; running out of restarts is Exhausted.
SearchResult search_anneal(const WitnessSpec& spec, const AnnealOptions& options = {});

/// Requirements applied during enumeration.
struct EmbeddingFilter {
    std::optional<int> chi;
    Orientability orientability = Orientability::Either;
    bool quadrangular = false;
    bool face_simple = false;
};

/// Exhaustive enumeration of the embeddings of `g` (at most 8 vertices, DomainError
/// otherwise) up to switching and global mirror. With `prune` the tree edges of a
/// fixed spanning tree are forced positive and the first vertex of degree >= 3 has
/// its rotation read in one direction; without it all sign vectors and cyclic
/// orders are visited and duplicates removed by canonical key. `visit` returns
/// false to stop. Returns the number of embeddings visited.
std::size_t enumerate_embeddings(const Graph& g, const EmbeddingFilter& filter,
                                 const std::function<bool(const Embedding&)>& visit, bool prune = true);

/// Key identifying the embedding up to vertex switching and global mirror.
std::string canonical_embedding_key(const Embedding& emb);

/// Connected simple graphs on `n` vertices with `m` edges and minimum degree at
/// least `min_deg`, one per isomorphism class (n <= 10).
std::size_t for_each_graph(int n, int m, int min_deg, const std::function<bool(const Graph&)>& visit);

struct SweepReport {
    int n = 0;
    /// Isomorphism classes examined.
    std::size_t graphs = 0;
    /// First face-simple quadrangulation found, if any.
    std::optional<Embedding> witness;
};

/// Exhaustive search for a face-simple quadrangulation of the surface (chi,
/// orientability) by a connected simple graph on `n` vertices, over all graphs
/// with 2(n - chi) edges and minimum degree >= `min_deg`. Face-simplicity forces
/// minimum degree 3, so `min_deg` = 3 loses nothing; 1 examines every connected graph.
SweepReport sweep_face_simple(int n, int chi, Orientability orientability, int min_deg = 1);

}  // namespace quadforge
