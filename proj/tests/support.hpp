#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "quadforge/embedding.hpp"
#include "quadforge/graph.hpp"

namespace qf_test {

namespace fs = std::filesystem;
using quadforge::Embedding;
using quadforge::Graph;
using quadforge::VertexPair;

inline fs::path source_catalog() { return fs::path(QUADFORGE_TEST_CATALOG); }

/// Fresh empty directory under the system temp directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = fs::temp_directory_path() / ("quadforge-" + tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const noexcept { return path_; }

private:
    fs::path path_;
};

/// Copies the repository catalog into `dir`.
inline void copy_catalog(const fs::path& dir) {
    for (const auto& entry : fs::directory_iterator(source_catalog()))
        if (entry.is_regular_file()) fs::copy_file(entry.path(), dir / entry.path().filename());
}

inline Graph graph_of(std::vector<VertexPair> edges) { return Graph::from_edges(edges); }

/// Planar embedding of the 4-cycle 0-1-2-3.
inline Embedding c4_sphere() {
    const auto g = graph_of({{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    return Embedding::from_neighbor_rotation(g, {{0, {1, 3}}, {1, {0, 2}}, {2, {1, 3}}, {3, {0, 2}}});
}

inline Embedding k2_sphere() {
    const auto g = graph_of({{0, 1}});
    return Embedding::from_neighbor_rotation(g, {{0, {1}}, {1, {0}}});
}

/// The cube: bottom square 0..3, top square 4..7, vertical edges i -- i+4.
inline std::vector<std::vector<int>> cube_faces() {
    return {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
}

inline Graph cube_graph() {
    std::vector<VertexPair> e;
    for (int i = 0; i < 4; ++i) {
        e.push_back({i, (i + 1) % 4});
        e.push_back({4 + i, 4 + (i + 1) % 4});
        e.push_back({i, i + 4});
    }
    return Graph::from_edges(e);
}

/// Number of faces of the orientable embedding given by neighbor rotations,
/// counted as orbits of the dart permutation (u,v) -> (v, succ_v(u)).
inline int oracle_face_count(const std::map<int, std::vector<int>>& rot) {
    std::set<std::pair<int, int>> seen;
    int faces = 0;
    for (const auto& [u, nbrs] : rot)
        for (int v : nbrs) {
            if (seen.count({u, v})) continue;
            ++faces;
            std::pair<int, int> d{u, v};
            while (!seen.count(d)) {
                seen.insert(d);
                const auto& around = rot.at(d.second);
                const auto it = std::find(around.begin(), around.end(), d.first);
                const auto next = std::next(it) == around.end() ? around.front() : *std::next(it);
                d = {d.second, next};
            }
        }
    return faces;
}

/// Face-simplicity decided from the face vertex lists alone: no face uses an
/// edge twice and two faces share at most one edge.
inline bool oracle_face_simple(const std::vector<std::vector<int>>& faces) {
    std::vector<std::set<VertexPair>> sets;
    for (const auto& f : faces) {
        std::set<VertexPair> s;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!s.insert(VertexPair(f[i], f[(i + 1) % f.size()])).second) return false;
        sets.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            int shared = 0;
            for (const auto& e : sets[i]) shared += static_cast<int>(sets[j].count(e));
            if (shared > 1) return false;
        }
    return true;
}

/// Admissibility straight from Euler's formula: a simple graph on n vertices
/// missing t edges quadrangulates a surface only if E = C(n,2) - t is even, and
/// the surface has chi = n - E/2, which must be even for orientable surfaces.
/// Combined with the construction's ranges (t <= n - 4, n >= 5 or 6).
inline bool oracle_admissible(int n, int t, bool orientable) {
    if (n < (orientable ? 5 : 6) || t < 0 || t > n - 4) return false;
    const long long e = static_cast<long long>(n) * (n - 1) / 2 - t;
    if (e % 2 != 0) return false;
    const long long chi = n - e / 2;
    if (orientable) return chi % 2 == 0 && chi <= 2;
    return chi <= 1;
}

}  // namespace qf_test
