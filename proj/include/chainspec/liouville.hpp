// liouville.hpp — the square-summable Liouville property on stars with two
// rays (full case split over end transience) and the constructive witness on
// transient star-like graphs (harmonic extension of the Green's function off
// a ray whose chain test fails).
#pragma once
#include <optional>
#include <string>
#include <vector>

#include "chainspec/criteria.hpp"
#include "chainspec/graph.hpp"
#include "chainspec/green.hpp"
#include "chainspec/harmonic.hpp"

namespace chainspec {

enum class Liouville { Holds, Fails, Inconclusive };
std::string to_string(Liouville v);

struct LiouvilleResult {
    Liouville verdict = Liouville::Inconclusive;
    std::vector<std::string> reasons; // every satisfied failure condition, or the holding rule
    std::optional<HarmonicSolution> witness;
    double witness_residual = 0.0; // max |Delta v| over the verification window
};

struct LiouvilleOptions {
    SeriesBudget budget;
    std::int64_t window = 200; // residual verification window per end
};

// Case split on (transient at +inf, transient at -inf):
//  - recurrent/recurrent: fails iff both end series tests fail (witness: the
//    unbounded two-sided harmonic function);
//  - transient/transient: fails iff [g in l2(+inf) and m(-inf) finite] or the
//    mirror condition or m(Z) finite (witness per end-limit case, vanishing
//    end preferred);
//  - mixed: fails iff the recurrent side test fails and [g in l2 or m finite
//    at the transient end].
LiouvilleResult liouville_two_ray(const TwoRayStar& star, const LiouvilleOptions& opt = {});

struct StarWitnessOptions {
    std::vector<int> radii = {40, 80, 160};
    SeriesBudget budget;
    std::int64_t window = 120;
};

// Non-constant harmonic l2 function on a transient star-like graph: equals the
// Green's function off the first non-ESA ray, continued harmonically onto it.
// NoNonEsaRay when every ray passes; GreenNotL2 when membership cannot be
// concluded.
HarmonicSolution starlike_liouville_witness(const StarLike& g,
                                            const StarWitnessOptions& opt = {});

// Green's function square-summability for a star-like graph: on transient rays
// the exhaustion limit has the tail form phi_i * T_r, on recurrent rays it is
// asymptotically constant. Conjunction over rays.
CheckVerdict starlike_green_l2(const StarLike& g, SeriesBudget budget = {});

} // namespace chainspec
