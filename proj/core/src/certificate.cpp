#include "quadforge/certificate.hpp"

#include <sstream>

#include "quadforge/error.hpp"

namespace quadforge {

Certificate certify(const Embedding& emb) {
    const auto& g = emb.graph();
    Certificate c;
    c.n = static_cast<long long>(g.vertex_count());
    c.edges = static_cast<long long>(g.edge_count());
    c.t = missing_edge_count(g);
    c.chi = euler_characteristic(emb);
    c.orientable = is_orientable(emb);
    c.quadrangular = is_quadrangular(emb);
    c.face_simple = is_face_simple(emb);
    c.universal = universal_vertices(g);
    c.min_degree = min_degree(g);
    c.minimal = c.quadrangular && c.t <= c.n - 4;
    return c;
}

std::vector<std::string> consistency_issues(const Certificate& c) {
    std::vector<std::string> issues;
    if (c.quadrangular && (c.edges % 2 != 0 || c.chi != c.n - c.edges / 2))
        issues.push_back("quadrangular embedding with chi != n - edges/2");
    if (c.quadrangular && c.orientable && c.min_degree >= 3 && !c.face_simple)
        issues.push_back("orientable quadrangulation of minimum degree >= 3 reported as not face-simple");
    if (c.minimal && !(c.quadrangular && c.t <= c.n - 4)) issues.push_back("minimal flag without its criterion");
    return issues;
}

namespace {

std::string join(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string certificate_value(const Certificate& c, const std::string& key) {
    if (key == "n") return std::to_string(c.n);
    if (key == "edges") return std::to_string(c.edges);
    if (key == "t") return std::to_string(c.t);
    if (key == "chi") return std::to_string(c.chi);
    if (key == "orientable") return flag(c.orientable);
    if (key == "quadrangular") return flag(c.quadrangular);
    if (key == "face_simple") return flag(c.face_simple);
    if (key == "universal") return join(c.universal);
    if (key == "min_degree") return std::to_string(c.min_degree);
    if (key == "minimal") return flag(c.minimal);
    throw DomainError("unknown certificate key '" + key + "'");
}

std::string to_text(const Certificate& c) {
    std::ostringstream out;
    for (const char* key :
         {"n", "edges", "t", "chi", "orientable", "quadrangular", "face_simple", "universal", "min_degree", "minimal"})
        out << key << '=' << certificate_value(c, key) << '\n';
    return out.str();
}

}  // namespace quadforge
