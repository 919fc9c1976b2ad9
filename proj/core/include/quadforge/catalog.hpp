#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "quadforge/embedding.hpp"
#include "quadforge/search.hpp"

namespace quadforge {

/// A named base embedding. Searched records are materialized by the exact
/// searcher; derived records by one surgery on their parent record.
struct CatalogRecord {
    enum class Provenance { Searched, Derived };

    std::string name;
    /// Human-readable description of the target graph.
    std::string expression;
    /// Accepted specifications, tried in order when searching; a witness must meet one.
    std::vector<WitnessSpec> specs;
    Provenance provenance = Provenance::Searched;
    /// "search", "handle", "delete_degree2" or "insert_degree2".
    std::string operation = "search";
    std::vector<std::string> parents;
    /// Handle cycle for "handle".
    std::array<int, 4> cycle{};
    /// Degree-2 vertex for "delete_degree2".
    int vertex = -1;

    std::string provenance_text() const;
};

/// The fixed table of records, in dependency order.
const std::vector<CatalogRecord>& record_table();
/// Throws DomainError for unknown names.
const CatalogRecord& find_record(const std::string& name);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);
/// Hash of the canonical spec text.
std::string spec_hash(const WitnessSpec& spec);

struct ManifestEntry {
    std::string name;
    std::string spec_hash;
    std::string file_hash;
    std::string provenance;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

std::vector<ManifestEntry> parse_manifest(std::string_view text);
std::string write_manifest(const std::vector<ManifestEntry>& entries);

struct VerifyEntry {
    std::string name;
    bool ok = false;
    std::string message;
};

/// Witness store rooted at a directory holding `<name>.emap` files and `manifest.txt`.
/// Thread-safe; witness generation is serialized.
class Catalog {
public:
    /// With `allow_search == false`, a missing searched record is a CatalogError.
    explicit Catalog(std::filesystem::path directory, bool allow_search = true);

    /// $QUADFORGE_CATALOG if set, else the catalog directory of the source tree.
    static std::filesystem::path default_directory();

    const std::filesystem::path& directory() const noexcept { return dir_; }

    /// Loads, verifies and caches a record's witness, materializing and persisting
    /// it when the file is absent. A present file that violates its spec is a
    /// CatalogError naming the record; it is never silently replaced.
    Embedding get_witness(const std::string& name);
    /// Materializes every record (existing files are verified, not rebuilt).
    void build();
    /// Re-certifies every record on disk, checks the manifest hashes, and
    /// regenerates derived records from their parents for a byte comparison.
    std::vector<VerifyEntry> verify_all();
    std::vector<ManifestEntry> manifest() const;

    /// Orientable quadrangular embedding of K_{m,n} (m = 2 mod 4, n >= 2) with the
    /// m-side on 0..m-1 and the n-side on m..m+n-1. Memoized.
    Embedding build_kmn(int m, int n);

    /// Spec the witness of `name` satisfies, or nullopt.
    static std::optional<WitnessSpec> matching_spec(const CatalogRecord& record, const Embedding& emb);

private:
    Embedding materialize(const CatalogRecord& record);
    Embedding derive(const CatalogRecord& record);
    void record_manifest(const CatalogRecord& record, const Embedding& emb, const std::string& file_text);

    std::filesystem::path dir_;
    bool allow_search_;
    std::recursive_mutex mu_;
    std::map<std::string, Embedding> cache_;
    std::map<std::pair<int, int>, Embedding> kmn_;
};

/// Relabels a bipartite embedding so that the side of size `m` becomes 0..m-1
/// (the side holding the smallest label when both sides have size m).
Embedding canonical_bipartite_labels(const Embedding& emb, int m);

}  // namespace quadforge
