// graph.hpp — the core data model: birth-death chains, stars with two rays,
// star-like graphs, finite graphs, and the constructed kinds (doubled chains,
// pendant supergraphs), together with the elementary quantities built on them:
// condition (A), weighted degrees, the formal Laplacian on finite windows and
// the energy form.
//
// All types are immutable after construction and safe to share across
// threads; the operations are pure functions.
#pragma once
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chainspec/sequence.hpp"
#include "chainspec/series.hpp"

namespace chainspec {

// Vertex address: comp 0 is the main component (chain indices, star-like hub
// vertices, finite-graph vertices, two-ray integers); comp i >= 1 addresses
// ray i-1 of a star-like graph or the pendant row of a pendant supergraph;
// comp -1 is the doubled chain's mirror copy and comp -2 its extra vertex.
struct Vertex {
    int comp = 0;
    std::int64_t idx = 0;
    auto operator<=>(const Vertex&) const = default;
    std::string str() const;
};

struct VertexFunction {
    std::map<Vertex, double> values;
    std::optional<double> fallback; // rule for vertices outside the map

    double at(const Vertex& v) const;
    bool defined(const Vertex& v) const { return fallback || values.count(v); }
    void set(const Vertex& v, double x) { values[v] = x; }
};

struct BirthDeath {
    SequenceSpec edge;    // b(k,k+1), k >= 0
    SequenceSpec measure; // m(r), r >= 0
};

struct TwoRayStar {
    SequenceSpec edge_pos;    // b(k,k+1), k >= 0
    SequenceSpec edge_neg;    // b(-k,-k-1), k >= 0
    SequenceSpec measure_pos; // m(r), r >= 0
    SequenceSpec measure_neg; // m(-r-1) at index r >= 0
};

struct FiniteGraph {
    std::size_t n = 0;
    std::vector<std::vector<double>> weights; // symmetric, zero diagonal
    std::vector<double> measure;

    void validate() const;
    static FiniteGraph path(std::size_t n, double w = 1.0, double m = 1.0);
    static FiniteGraph single(double m = 1.0);
};

struct Ray {
    BirthDeath chain;
    std::size_t attach_vertex = 0; // hub vertex holding the single connecting edge
    double attach_weight = 0.0;    // b(x0, 0^(i)) > 0
};

// Parametric family of identical rays indexed by i >= 0: ray i attaches at
// attach_vertex with weight attach_weight(i); every family ray carries the
// same chain data.
struct RayFamily {
    SequenceSpec attach_weight; // over the ray index i
    BirthDeath chain;
    std::size_t attach_vertex = 0;
};

struct StarLike {
    FiniteGraph hub;
    std::vector<Ray> rays;
    std::optional<RayFamily> family;
    bool hub_infinite = false;     // hub table is a truncation of an infinite part
    bool hub_esa_asserted = false; // user assertion accompanying hub_infinite
};

// Doubling of a birth-death chain: mirror copy glued through one extra vertex.
struct DoubledChain {
    BirthDeath base;
    double bridge_weight = 1.0; // b~(0, 0~) > 0
};

// Supergraph attaching one pendant vertex to every chain vertex.
struct PendantChain {
    BirthDeath base;
    SequenceSpec pendant_edge;    // b~(k, x~_k)
    SequenceSpec pendant_measure; // m~(x~_k)
};

using GraphSpec = std::variant<BirthDeath, TwoRayStar, StarLike, FiniteGraph, DoubledChain, PendantChain>;

std::string kind_name(const GraphSpec& g);

// measure and incident edges (pure accessors over the infinite structure)
double vertex_measure(const GraphSpec& g, const Vertex& v);
// neighbors with edge weights; family rays of a star-like hub are not
// enumerated here (their contribution is handled analytically).
std::vector<std::pair<Vertex, double>> neighbors(const GraphSpec& g, const Vertex& v);

enum class CheckVerdict { Holds, Fails, Inconclusive };
std::string to_string(CheckVerdict v);

// The two ends of a star with two rays.
enum class StarEnd { Pos, Neg };

// Condition (A): sum_y b^2(x,y)/m(y) < infinity at every vertex. Chains, stars
// with two rays and locally finite kinds satisfy it outright; star-like hubs
// with a ray family reduce to the series sum_i b^2(x0,0^(i))/m(0^(i)).
CheckVerdict check_condition_A(const GraphSpec& g, SeriesBudget budget = {});

// (1/m(x)) sum_y b(x,y); DivergentDegree when the family series diverges.
double weighted_degree(const GraphSpec& g, const Vertex& v);

// Formal Laplacian on a window: (Delta f)(x) = (1/m(x)) sum_y b(x,y)(f(x)-f(y)).
// MissingValue if a required neighbor value is absent and no fallback applies.
VertexFunction apply_laplacian(const GraphSpec& g, const VertexFunction& f,
                               const std::vector<Vertex>& window);

// Energy over an explicit set of undirected edges, each counted once.
double energy(const GraphSpec& g, const VertexFunction& f,
              const std::vector<std::pair<Vertex, Vertex>>& edges);

// A finite window of a graph: explicit vertices, measures, edges, and the
// Dirichlet sphere (vertices at the cut radius).
struct Window {
    std::vector<Vertex> verts;
    std::map<Vertex, int> index;
    std::vector<double> measure;
    std::vector<std::vector<std::pair<int, double>>> adj; // neighbor lists within the window
    std::vector<char> on_sphere;                          // at distance == radius

    int at(const Vertex& v) const;
    std::size_t size() const { return verts.size(); }
};

// Ball of the given radius around `center` (graph metric). Star-like family
// rays are excluded; explicit rays are included.
Window build_ball(const GraphSpec& g, const Vertex& center, int radius);

} // namespace chainspec
