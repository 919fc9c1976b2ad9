#include "quadforge/emap_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "quadforge/error.hpp"

namespace quadforge {

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

long long to_int(const std::string& tok, int line) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) throw FormatError("expected integer, got '" + tok + "'", line);
    return value;
}

}  // namespace

Embedding parse_emap(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char ch : text) {
            if (ch == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        if (!cur.empty()) lines.push_back(cur);
    }
    std::size_t at = 0;
    auto next_line = [&](const char* what) {
        if (at >= lines.size()) throw FormatError(std::string("unexpected end of input, expected ") + what,
                                                  static_cast<int>(lines.size()));
        auto toks = tokens(lines[at]);
        ++at;
        return std::pair{std::move(toks), static_cast<int>(at)};
    };

    auto [head, l1] = next_line("header");
    if (head.size() != 2 || head[0] != "emap") throw FormatError("missing 'emap' header", l1);
    if (head[1] != "1") throw FormatError("unsupported emap version '" + head[1] + "'", l1);
    auto [vl, l2] = next_line("V line");
    if (vl.size() != 2 || vl[0] != "V") throw FormatError("expected 'V <count>'", l2);
    const auto vcount = to_int(vl[1], l2);
    auto [el, l3] = next_line("E line");
    if (el.size() != 2 || el[0] != "E") throw FormatError("expected 'E <count>'", l3);
    const auto ecount = to_int(el[1], l3);
    if (vcount < 0 || ecount < 0) throw FormatError("negative count", vcount < 0 ? l2 : l3);

    struct RawEdge {
        int u, v, sign, line;
    };
    std::map<long long, RawEdge> raw;
    std::set<VertexPair> pairs;
    for (long long k = 0; k < ecount; ++k) {
        auto [t, ln] = next_line("edge line");
        if (t.size() != 5 || t[0] != "e") throw FormatError("expected 'e <id> <u> <v> <sign>'", ln);
        const auto id = to_int(t[1], ln);
        const int u = static_cast<int>(to_int(t[2], ln));
        const int v = static_cast<int>(to_int(t[3], ln));
        if (t[4] != "+" && t[4] != "-") throw FormatError("sign must be '+' or '-', got '" + t[4] + "'", ln);
        if (u < 0 || v < 0) throw FormatError("negative vertex label", ln);
        if (u == v) throw FormatError("loop at vertex " + std::to_string(u), ln);
        if (raw.count(id)) throw FormatError("duplicate edge id " + std::to_string(id), ln);
        if (!pairs.insert(VertexPair(u, v)).second)
            throw FormatError("parallel edge {" + std::to_string(u) + "," + std::to_string(v) + "}", ln);
        raw[id] = RawEdge{u, v, t[4] == "+" ? 1 : -1, ln};
    }

    std::map<int, std::pair<std::vector<long long>, int>> rot;
    for (long long k = 0; k < vcount; ++k) {
        auto [t, ln] = next_line("rotation line");
        if (t.size() < 3 || t[0] != "r" || t[2] != ":") throw FormatError("expected 'r <vertex> : <edge ids>'", ln);
        const int v = static_cast<int>(to_int(t[1], ln));
        if (rot.count(v)) throw FormatError("duplicate rotation for vertex " + std::to_string(v), ln);
        std::vector<long long> ids;
        std::set<long long> seen;
        for (std::size_t i = 3; i < t.size(); ++i) {
            const auto id = to_int(t[i], ln);
            auto it = raw.find(id);
            if (it == raw.end()) throw FormatError("rotation of vertex " + std::to_string(v) + " names unknown edge " + t[i], ln);
            if (it->second.u != v && it->second.v != v)
                throw FormatError("rotation of vertex " + std::to_string(v) + " names edge " + t[i] + " not incident to it", ln);
            if (!seen.insert(id).second)
                throw FormatError("rotation of vertex " + std::to_string(v) + " repeats edge " + t[i], ln);
            ids.push_back(id);
        }
        rot[v] = {std::move(ids), ln};
    }
    for (std::size_t i = at; i < lines.size(); ++i)
        if (!tokens(lines[i]).empty()) throw FormatError("trailing content", static_cast<int>(i + 1));

    for (const auto& [id, e] : raw)
        for (int end : {e.u, e.v}) {
            auto it = rot.find(end);
            if (it == rot.end())
                throw FormatError("edge " + std::to_string(id) + " has endpoint " + std::to_string(end) +
                                      " without a rotation line", e.line);
            const auto& ids = it->second.first;
            if (std::find(ids.begin(), ids.end(), id) == ids.end())
                throw FormatError("rotation of vertex " + std::to_string(end) + " omits incident edge " +
                                      std::to_string(id), it->second.second);
        }

    std::vector<int> vertices;
    for (const auto& [v, _] : rot) vertices.push_back(v);
    Graph g(vertices, {pairs.begin(), pairs.end()});
    std::vector<int> signs(g.edge_count(), 1);
    std::map<long long, std::size_t> canon;
    for (const auto& [id, e] : raw) {
        canon[id] = *g.edge_id(e.u, e.v);
        signs[canon[id]] = e.sign;
    }
    std::vector<std::vector<std::size_t>> rotation(g.vertex_count());
    for (const auto& [v, entry] : rot)
        for (auto id : entry.first) rotation[*g.index_of(v)].push_back(canon[id]);
    try {
        return Embedding(std::move(g), std::move(rotation), std::move(signs));
    } catch (const StructureError& ex) {
        throw FormatError(ex.what());
    }
}

std::string write_emap(const Embedding& emb) {
    const auto& g = emb.graph();
    std::ostringstream out;
    out << "emap 1\n";
    out << "V " << g.vertex_count() << '\n';
    out << "E " << g.edge_count() << '\n';
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        out << "e " << e << ' ' << g.edges()[e].u << ' ' << g.edges()[e].v << ' ' << (emb.sign(e) > 0 ? '+' : '-')
            << '\n';
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        out << "r " << g.vertices()[i] << " :";
        for (auto e : emb.rotation_at(i)) out << ' ' << e;
        out << '\n';
    }
    return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp.string());
        out << text;
        if (!out) throw FormatError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw FormatError("cannot rename " + tmp.string() + ": " + ec.message());
}

Embedding read_emap_file(const std::filesystem::path& path) {
    try {
        return parse_emap(read_text_file(path));
    } catch (const FormatError& ex) {
        throw FormatError(ex.detail(), ex.line(), path.string());
    }
}

void write_emap_file(const std::filesystem::path& path, const Embedding& emb) {
    write_text_file_atomic(path, write_emap(emb));
}

}  // namespace quadforge
