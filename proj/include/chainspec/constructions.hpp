// constructions.hpp — graph surgeries and decompositions: the three-part
// splitting Delta = Delta_1 + Delta_2 + Delta_boundary, boundary-degree
// checks, pendant-vertex completion, the stability-breaking example, and star
// assembly.
#pragma once
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chainspec/criteria.hpp"
#include "chainspec/graph.hpp"

namespace chainspec {

struct Decomposition {
    std::set<Vertex> x1;
    std::set<Vertex> x2; // complement within the window
    std::set<Vertex> x3; // boundary of x1 union boundary of x2
    // classified undirected edges (each once): weight and the part it belongs to
    enum class Part { Inner1, Inner2, Boundary };
    std::vector<std::tuple<Vertex, Vertex, double, Part>> edges;
    std::map<Vertex, double> deg_boundary; // Deg_boundary on x3
};

// Decompose the window by the vertex set x1 (boundaries computed against the
// full graph's neighbor structure).
Decomposition decompose(const GraphSpec& g, const Window& w, const std::set<Vertex>& x1);

// max over check vertices of |Delta f - (Delta_1 f_1 + Delta_2 f_2 +
// Delta_b f_3)| (restrictions extended by zero), computed in double-double.
double verify_decomposition(const GraphSpec& g, const std::set<Vertex>& x1,
                            const VertexFunction& f, const std::vector<Vertex>& check);

enum class Boundedness { Bounded, Unbounded, Inconclusive };
std::string to_string(Boundedness b);

struct BoundVerdict {
    Boundedness kind = Boundedness::Inconclusive;
    double sup_estimate = 0.0;        // for Bounded
    std::int64_t witness_index = -1;  // for Unbounded
};

// Boundedness of Deg_boundary over an index family given as a ratio of
// analytic sequences num(i)/den(i) (symbolic when tails allow, sampled trend
// otherwise).
BoundVerdict ratio_bounded(const SequenceSpec& num, const SequenceSpec& den,
                           std::int64_t probe_depth = 10000);

// Deg_boundary boundedness for the canonical splits: star-like hub vs rays,
// pendant row vs spine.
BoundVerdict boundary_degree_bound(const StarLike& g, std::int64_t probe_depth = 10000);
struct PendantBoundary {
    BoundVerdict on_pendants; // Deg_b(x_r) = b(r,x_r)/m~(x_r)
    BoundVerdict on_spine;    // Deg_b(r)   = b(r,x_r)/m(r)
    bool both_bounded() const {
        return on_pendants.kind == Boundedness::Bounded && on_spine.kind == Boundedness::Bounded;
    }
};
PendantBoundary boundary_degree_bound(const PendantChain& g, std::int64_t probe_depth = 10000);

struct PendantResult {
    PendantChain graph;
    SeriesVerdict certificate; // sum_k (Deg~(x~_k)/(Deg~(x~_k)+1))^2 m~(x~_k), lambda = -1
    bool esa_certified = false;
};

// Attach one pendant vertex to every chain vertex; the supergraph is
// certified essentially self-adjoint when the certificate series diverges.
PendantResult attach_pendants(const BirthDeath& base, const SequenceSpec& pendant_edge,
                              const SequenceSpec& pendant_measure, SeriesBudget budget = {});

// Pendant completion of a finite graph (always essentially self-adjoint).
FiniteGraph attach_pendants(const FiniteGraph& base, const std::vector<double>& pendant_edge,
                            const std::vector<double>& pendant_measure);

struct StabilityBreak {
    PendantChain graph;
    SeriesVerdict pendant_certificate; // must diverge
    SeriesVerdict base_hamburger;      // must converge
};

// The counterexample family: supergraph certified while the base chain fails
// the series test. BaseChainIsEsa when the base chain passes it.
StabilityBreak stability_break_example(const BirthDeath& chain, const SequenceSpec& pendant_edge,
                                       const SequenceSpec& pendant_measure,
                                       SeriesBudget budget = {});

// One attachment for a candidate ray: hub vertex, index on the chain, weight.
struct RayAttachment {
    std::size_t hub_vertex = 0;
    std::int64_t chain_index = 0;
    double weight = 0.0;
};
struct RayInput {
    BirthDeath chain;
    std::vector<RayAttachment> attachments;
};

// Validated star-like assembly: each ray attached by exactly one edge at its
// vertex 0 (RayConditionViolated otherwise); hub summability checks for a ray
// family (ConditionAFailure).
StarLike assemble_star(const FiniteGraph& hub, const std::vector<RayInput>& rays,
                       const std::optional<RayFamily>& family = {}, SeriesBudget budget = {});

} // namespace chainspec
