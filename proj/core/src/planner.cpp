#include "quadforge/planner.hpp"

#include <sstream>

#include "quadforge/error.hpp"
#include "quadforge/surgery.hpp"

namespace quadforge {

namespace {

int mod(long long x, int k) { return static_cast<int>(((x % k) + k) % k); }

int residue(int n, int k) { return mod(static_cast<long long>(n) * (n - 5) / 2, k); }

std::string pair_text(int n, int t) { return "(" + std::to_string(n) + "," + std::to_string(t) + ")"; }

PlanNode base(const std::string& record, int n, int t, SurfaceKind kind, PlanNode::Type type = PlanNode::Type::Base) {
    PlanNode node;
    node.type = type;
    node.record = record;
    node.result = {n, t, kind};
    return node;
}

PlanNode step(PlanNode::Type type, int i, int n, int t, SurfaceKind kind, PlanNode child) {
    PlanNode node;
    node.type = type;
    node.i = i;
    node.result = {n, t, kind};
    node.children.push_back(std::move(child));
    return node;
}

PlanNode plan_nonorientable(int n, int t) {
    using K = SurfaceKind;
    if (n == 4 && t == 0) return base("phi_4_0", 4, 0, K::Nonorientable);
    if (n == 5 && t == 0) return base("phi_5_0_star", 5, 0, K::Orientable);
    if (n == 6 && t == 1) return base("phi_6_1", 6, 1, K::Nonorientable);
    if (n == 7 && t == 1) return base("q_7_1", 7, 1, K::Nonorientable);
    if (n == 7 && t == 3) return base("q_7_3", 7, 3, K::Nonorientable);
    if (n < 8) throw DomainError("no nonorientable base case for " + pair_text(n, t));
    const int i = t <= 1 ? 0 : t <= 3 ? 2 : 4;
    return step(PlanNode::Type::NonorientStep, i, n, t, K::Nonorientable, plan_nonorientable(n - 4, t - i));
}

PlanNode plan_orientable(int n, int t) {
    using K = SurfaceKind;
    using T = PlanNode::Type;
    const K o = K::Orientable;
    auto intermediate = [&](PlanNode child) { return step(T::IntermediateStep, 2, n, t, o, std::move(child)); };
    if (n >= 15) {
        const int i = t < 4 ? 0 : t < 8 ? 4 : 8;
        return step(T::OrientStep, i, n, t, o, plan_orientable(n - 8, t - i));
    }
    switch (n * 100 + t) {
    case 500: return base("phi_5_0_star", 5, 0, o);
    case 703: return base("q_7_3_star", 7, 3, o);
    case 804: return base("phi_8_4_star", 8, 4, o);
    case 800: return base("q_8_0_star", 8, 0, o);
    case 902: return intermediate(plan_orientable(5, 0));
    case 1001: return base("phi_10_1_star", 10, 1, o);
    case 1005: return intermediate(base("q_6_3_star", 6, 3, o));
    case 1101: return base("q_11_1_star", 11, 1, o);
    case 1105: return base("q_11_5_star", 11, 5, o);
    case 1202: return intermediate(plan_orientable(8, 0));
    case 1206: return intermediate(plan_orientable(8, 4));
    case 1300: return step(T::OrientStep, 0, n, t, o, plan_orientable(5, 0));
    case 1304: return step(T::OrientStep, 4, n, t, o, plan_orientable(5, 0));
    case 1308: return step(T::OrientStep, 8, n, t, o, plan_orientable(5, 0));
    case 1403: return intermediate(plan_orientable(10, 1));
    case 1407: return intermediate(plan_orientable(10, 5));
    default: break;
    }
    throw DomainError("no orientable base case for " + pair_text(n, t));
}

const char* type_name(PlanNode::Type type) {
    switch (type) {
    case PlanNode::Type::Base: return "Base";
    case PlanNode::Type::Special: return "Special";
    case PlanNode::Type::NonorientStep: return "NonorientStep";
    case PlanNode::Type::OrientStep: return "OrientStep";
    case PlanNode::Type::IntermediateStep: return "IntermediateStep";
    }
    return "?";
}

void render(const PlanNode& node, int depth, std::ostringstream& out) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << type_name(node.type);
    if (node.type == PlanNode::Type::Base || node.type == PlanNode::Type::Special)
        out << '(' << node.record << ')';
    else if (node.type != PlanNode::Type::IntermediateStep)
        out << "(i=" << node.i << ')';
    out << ' ' << pair_text(node.result.n, node.result.t) << ' ' << to_string(node.result.kind) << '\n';
    for (const auto& c : node.children) render(c, depth + 1, out);
}

}  // namespace

std::string to_string(SurfaceKind kind) { return kind == SurfaceKind::Orientable ? "orientable" : "nonorientable"; }

SurfaceKind parse_surface_kind(const std::string& text) {
    if (text == "orientable") return SurfaceKind::Orientable;
    if (text == "nonorientable") return SurfaceKind::Nonorientable;
    throw DomainError("kind must be 'orientable' or 'nonorientable', got '" + text + "'");
}

bool admissible(const ParamRequest& req) { return inadmissibility_reason(req).empty() && !is_special(req); }

bool is_special(const ParamRequest& req) {
    return (req.kind == SurfaceKind::Orientable && req.n == 4 && req.t == 2) ||
           (req.kind == SurfaceKind::Nonorientable && req.n == 6 && req.t == 3);
}

std::string inadmissibility_reason(const ParamRequest& req) {
    if (is_special(req)) return {};
    const bool orient = req.kind == SurfaceKind::Orientable;
    const std::string what = "no " + to_string(req.kind) + " " + pair_text(req.n, req.t) + "-quadrangulation: ";
    const int min_n = orient ? 5 : 6;
    if (req.n < min_n) return what + "the construction covers n >= " + std::to_string(min_n);
    if (req.t < 0 || req.t > req.n - 4) return what + "t must satisfy 0 <= t <= n - 4 = " + std::to_string(req.n - 4);
    const int k = orient ? 4 : 2;
    if (mod(req.t, k) != residue(req.n, k))
        return what + "t must be congruent to n(n-5)/2 = " + std::to_string(static_cast<long long>(req.n) * (req.n - 5) / 2) +
               " modulo " + std::to_string(k) + " (required residue " + std::to_string(residue(req.n, k)) + ", got " +
               std::to_string(mod(req.t, k)) + ")";
    return {};
}

PlanNode plan(const ParamRequest& req) {
    if (is_special(req))
        return base(req.kind == SurfaceKind::Orientable ? "special_4_2_sphere" : "special_6_3_klein", req.n, req.t, req.kind,
                    PlanNode::Type::Special);
    if (const auto why = inadmissibility_reason(req); !why.empty()) throw DomainError(why);
    return req.kind == SurfaceKind::Orientable ? plan_orientable(req.n, req.t) : plan_nonorientable(req.n, req.t);
}

std::string to_text(const PlanNode& node) {
    std::ostringstream out;
    render(node, 0, out);
    return out.str();
}

int pivot_vertex(const Embedding& emb) {
    const auto u = universal_vertices(emb.graph());
    if (u.empty()) throw DomainError("embedding has no universal vertex");
    for (int v : u)
        if (is_nearly_face_simple_except(emb, v)) return v;
    return u.front();
}

Embedding Planner::sum(const Embedding& a, int v, const Embedding& b, int w, const std::string& context) {
    const bool hyp = face_simple_sum_hypotheses(a, v, b, w);
    auto out = diamond_sum(a, v, b, w);
    events_.push_back({context, hyp, is_face_simple(out)});
    return out;
}

Embedding Planner::step(const std::string& join_record, int x, int z, int kmn_m, const Embedding& child,
                        const std::string& label) {
    const auto join = catalog_.get_witness(join_record);
    const int nc = static_cast<int>(child.graph().vertex_count());
    const auto kmn = catalog_.build_kmn(kmn_m, nc - 1);
    const std::string kname = "K_{" + std::to_string(kmn_m) + "," + std::to_string(nc - 1) + "}";
    const auto first = sum(join, x, kmn, kmn_m, label + ": " + join_record + "@" + std::to_string(x) + " + " + kname + "@" +
                                                     std::to_string(kmn_m));
    const int v = pivot_vertex(child);
    const auto second = sum(first, z, child, v, label + ": intermediate@" + std::to_string(z) + " + child@" + std::to_string(v));
    return compact_labels(second);
}

Embedding Planner::execute(const PlanNode& node) {
    if (auto it = memo_.find(node.result); it != memo_.end()) return it->second;
    Embedding out;
    const std::string label = type_name(node.type) + std::string(" ") + pair_text(node.result.n, node.result.t);
    switch (node.type) {
    case PlanNode::Type::Base:
    case PlanNode::Type::Special:
        out = catalog_.get_witness(node.record);
        break;
    case PlanNode::Type::NonorientStep:
        out = step("phi_7_" + std::to_string(node.i) + "_plus", 5, 7, 6, execute(node.children.at(0)), label);
        break;
    case PlanNode::Type::OrientStep:
        out = step("phi_11_" + std::to_string(node.i) + "_plus_star", 9, 11, 10, execute(node.children.at(0)), label);
        break;
    case PlanNode::Type::IntermediateStep:
        out = step("phi_7_2_plus_star", 5, 7, 6, execute(node.children.at(0)), label);
        break;
    }
    memo_.emplace(node.result, out);
    return out;
}

Generated Planner::generate(const ParamRequest& req) {
    auto p = plan(req);
    auto emb = execute(p);
    auto cert = certify(emb);
    std::string drift;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) drift += (drift.empty() ? "" : ", ") + what;
    };
    expect(cert.n == req.n, "n = " + std::to_string(cert.n));
    expect(cert.t == req.t, "t = " + std::to_string(cert.t));
    expect(cert.orientable == (req.kind == SurfaceKind::Orientable), "orientable = " + std::string(cert.orientable ? "true" : "false"));
    expect(cert.quadrangular, "not quadrangular");
    // The planar 4-cycle is the one output without a universal vertex (and it is not face-simple).
    const bool c4 = req.kind == SurfaceKind::Orientable && req.n == 4 && req.t == 2;
    expect(c4 || !cert.universal.empty(), "no universal vertex");
    const bool fs_expected = !c4;
    expect(cert.face_simple == fs_expected, "face_simple = " + std::string(cert.face_simple ? "true" : "false"));
    expect(cert.minimal == (req.t <= req.n - 4), "minimal flag");
    if (!drift.empty())
        throw Error("internal failure: certificate for " + to_string(req.kind) + " " + pair_text(req.n, req.t) +
                    " disagrees with the request (" + drift + ")");
    return {std::move(emb), std::move(cert), std::move(p)};
}

}  // namespace quadforge
