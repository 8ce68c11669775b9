// harmonic.hpp — construction of harmonic functions on chains, doubled chains
// and stars with two rays, with their flux constants and per-end square
// summability verdicts. The defining recursion is
//   v(r+1) = v(1) + C * sum_{k=1}^r 1/b(k,k+1),   C = b(0,1)(v(1)-v(0)),
// harmonic at every vertex except possibly 0.
#pragma once
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "chainspec/dd.hpp"

#include "chainspec/graph.hpp"
#include "chainspec/series.hpp"

namespace chainspec {

class HarmonicSolution {
public:
    enum class Domain { Chain, DoubledChain, TwoRayStar, StarLikeWitness };

    Domain domain() const { return domain_; }
    double v0() const { return v0_; }
    double v1() const { return v1_; }
    double flux() const { return C_; } // the constant C

    // Lazily evaluated values; thread-safe, idempotent fill.
    double value(const Vertex& v) const;
    dd value_dd(const Vertex& v) const;

    const SeriesVerdict& l2_pos() const { return l2_pos_; }
    const SeriesVerdict& l2_neg() const { return l2_neg_; }

    const GraphSpec& graph() const { return *graph_; }

private:
    friend HarmonicSolution chain_harmonic(const BirthDeath&, double, double, std::int64_t,
                                           SeriesBudget);
    friend HarmonicSolution doubled_harmonic(const DoubledChain&, double, std::int64_t,
                                             SeriesBudget);
    friend HarmonicSolution star_harmonic(const TwoRayStar&, double, double, std::int64_t,
                                          SeriesBudget);
    friend class StarWitnessBuilder;

    Domain domain_ = Domain::Chain;
    double v0_ = 0.0, v1_ = 0.0, C_ = 0.0;
    SeriesVerdict l2_pos_, l2_neg_;
    std::shared_ptr<const GraphSpec> graph_;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

// v harmonic at all r != 0 with the given v(0), v(1); the l2 verdict follows
// the series criterion (Hamburger-type when the end is recurrent, measure or
// Green-tail comparison otherwise).
HarmonicSolution chain_harmonic(const BirthDeath& chain, double v0, double v1,
                                std::int64_t upto = 200, SeriesBudget budget = {});

// The doubled graph: mirror copy of the chain glued through an extra vertex.
DoubledChain doubled_chain(const BirthDeath& chain, double bridge_weight = 1.0);

// Harmonic on the whole doubled graph: v(0)=0, C = b(0,1) v1,
// v(0~) = -C/bridge, mirror branch decreasing.
HarmonicSolution doubled_harmonic(const DoubledChain& doubled, double v1,
                                  std::int64_t upto = 200, SeriesBudget budget = {});

// Harmonic on the star with two rays from v(0), v(1) (conditions (1)-(3) of
// the two-ray characterization).
HarmonicSolution star_harmonic(const TwoRayStar& star, double v0, double v1,
                               std::int64_t upto = 200, SeriesBudget budget = {});

// Vanishing-end normalization: on a transient end the unique flux making the
// harmonic function tend to 0 there, with the tail form v(r) = -C T_r,
// T_r = sum_{k>=r} 1/b. EndNotTransient when sum 1/b diverges on that end.
struct VanishingEnd {
    double C;
    // v at end-distance r (tail representation; valid for every r >= 0)
    std::function<double(std::int64_t)> tail_value;
};
VanishingEnd vanishing_end_constant(const TwoRayStar& star, StarEnd end, double v_at_1);

// max |Delta v| over the window vertices (computed in double-double).
double max_harmonic_residual(const HarmonicSolution& v, const std::vector<Vertex>& window);

// max over the window of |Delta v(x)| relative to the row scale
// (1/m) sum |b(x,y)| (|v(x)| + |v(y)|); meaningful at any weight steepness.
double max_harmonic_residual_relative(const HarmonicSolution& v,
                                      const std::vector<Vertex>& window);

// Assembles the star-like witness: fixed values off the continued ray (the
// Green's function) plus the harmonic continuation with flux C from the ray
// head value.
class StarWitnessBuilder {
public:
    static HarmonicSolution build(const StarLike& g, int ray_comp, dd ray_head, double flux,
                                  std::map<Vertex, dd> fixed, SeriesVerdict l2_ray,
                                  SeriesVerdict l2_rest);
};

// Square-summability of the tail r >= 1 of values a + C * sum_{k=1}^r 1/edge(k)
// against measure(r + offset); the building block behind every l2 verdict here.
SeriesVerdict harmonic_l2_tail(const SequenceSpec& edge, const SequenceSpec& measure,
                               int measure_offset, double a, double C, SeriesBudget budget = {});

} // namespace chainspec
