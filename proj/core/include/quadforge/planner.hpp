#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "quadforge/catalog.hpp"
#include "quadforge/certificate.hpp"

namespace quadforge {

enum class SurfaceKind { Orientable, Nonorientable };

std::string to_string(SurfaceKind kind);
/// Accepts "orientable" / "nonorientable"; throws DomainError otherwise.
SurfaceKind parse_surface_kind(const std::string& text);

struct ParamRequest {
    int n = 0;
    int t = 0;
    SurfaceKind kind = SurfaceKind::Nonorientable;

    friend auto operator<=>(const ParamRequest&, const ParamRequest&) = default;
};

/// 0 <= t <= n - 4 and t = n(n-5)/2 modulo 2 (nonorientable, n >= 6) or modulo 4
/// (orientable, n >= 5).
bool admissible(const ParamRequest& req);
/// The two extra pairs outside the general construction ranges: orientable (4,2), nonorientable (6,3).
bool is_special(const ParamRequest& req);
/// Why `req` is rejected (empty when admissible or special).
std::string inadmissibility_reason(const ParamRequest& req);

struct PlanNode {
    enum class Type { Base, Special, NonorientStep, OrientStep, IntermediateStep };

    Type type = Type::Base;
    /// Catalog record for Base and Special nodes.
    std::string record;
    /// Missing edges contributed by the join record of a step.
    int i = 0;
    ParamRequest result;
    std::vector<PlanNode> children;

    friend bool operator==(const PlanNode&, const PlanNode&) = default;
};

/// DomainError (with the reason) unless admissible or special.
PlanNode plan(const ParamRequest& req);
/// Indented tree, one node per line with its (n,t) annotation.
std::string to_text(const PlanNode& node);

/// One diamond sum performed during execution.
struct SumEvent {
    std::string context;
    bool hypotheses = false;
    bool face_simple = false;
};

struct Generated {
    Embedding embedding;
    Certificate certificate;
    PlanNode plan;
};

/// Executes plans against a catalog. Results are memoized per request.
class Planner {
public:
    explicit Planner(Catalog& catalog) : catalog_(catalog) {}

    Embedding execute(const PlanNode& node);
    /// Plans, executes and certifies; throws Error when the certificate disagrees
    /// with the request.
    Generated generate(const ParamRequest& req);

    const std::vector<SumEvent>& sum_events() const noexcept { return events_; }

private:
    Embedding step(const std::string& join_record, int x, int z, int kmn_m, const Embedding& child,
                   const std::string& label);
    Embedding sum(const Embedding& a, int v, const Embedding& b, int w, const std::string& context);

    Catalog& catalog_;
    std::map<ParamRequest, Embedding> memo_;
    std::vector<SumEvent> events_;
};

/// Vertex used for the second diamond sum: the smallest universal vertex at which
/// `emb` is nearly face-simple, else the smallest universal vertex.
int pivot_vertex(const Embedding& emb);

}  // namespace quadforge
