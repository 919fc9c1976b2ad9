#pragma once

#include <string>
#include <vector>

#include "quadforge/embedding.hpp"

namespace quadforge {

/// Everything the checker establishes about an embedding.
struct Certificate {
    long long n = 0;
    long long edges = 0;
    long long t = 0;  // edges missing from K_n
    int chi = 0;
    bool orientable = false;
    bool quadrangular = false;
    bool face_simple = false;
    std::vector<int> universal;
    int min_degree = 0;
    /// quadrangular and t <= n - 4; such quadrangulations of simple graphs use the
    /// fewest vertices possible for their surface.
    bool minimal = false;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

Certificate certify(const Embedding& emb);

/// `key=value` lines in the fixed order
/// n, edges, t, chi, orientable, quadrangular, face_simple, universal, min_degree, minimal.
std::string to_text(const Certificate& cert);

/// Internal contradictions among the certificate's fields (empty for a sound
/// checker): a quadrangulation has chi = n - edges/2, and an orientable one with
/// minimum degree >= 3 is face-simple.
std::vector<std::string> consistency_issues(const Certificate& cert);

/// Value of a certificate key rendered as in `to_text`; throws DomainError for unknown keys.
std::string certificate_value(const Certificate& cert, const std::string& key);

}  // namespace quadforge
