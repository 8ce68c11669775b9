// capacity.hpp — the (2,2)-capacity at infinity of a birth-death chain by
// exact finite quadratic minimization over truncated test-function windows:
//   C_n = { f in H^2 : f(r) = 1 for r >= n },   ||f||^2_{H^2} = ||f||^2 + ||Delta f||^2 + Q(f),
// with the comparison class C_{k,n} additionally forcing f(r) = 0 for r <= k.
#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chainspec/criteria.hpp"
#include "chainspec/graph.hpp"

namespace chainspec {

struct CapacityRecord {
    enum class Kind { Infinite, Sequence };
    enum class Dichotomy { Zero, PositiveFinite, Infinite, Inconclusive };

    Kind kind = Kind::Sequence;
    std::vector<std::pair<std::int64_t, double>> minima; // (n, min over C_n), nonincreasing
    std::optional<int> k;                                // set for the Cap^k variant
    std::optional<double> extrapolated;
    Dichotomy dichotomy = Dichotomy::Inconclusive;
    std::optional<double> lower_bound; // 1/(C(k) * C^2) duality bound, when not ESA
    std::vector<double> minimizer;     // f(0..n-1) at the largest scheduled n
    std::string note;
};

std::string to_string(CapacityRecord::Dichotomy d);

// ||f||^2_{H^2} for f given by free values f(0..n-1) and f = 1 from n on.
// MeasureTailInfinite when sum_{r>=n} m(r) has no finite certificate.
double h2_norm_sq(const BirthDeath& chain, std::span<const double> f, std::int64_t n);

// VertexFunction adapter (f must be constant 1 beyond n).
double h2_norm_sq(const BirthDeath& chain, const VertexFunction& f, std::int64_t n);

// Exact minimum of the H^2 norm over C_n (or C_{k,n} when k is given); the
// Hessian is a pentadiagonal SPD matrix solved by a banded direct method.
double capacity_minimum(const BirthDeath& chain, std::int64_t n, std::optional<int> k = {},
                        std::vector<double>* minimizer = nullptr);

struct CapacityOptions {
    std::vector<std::int64_t> schedule = {25, 50, 100, 200, 400};
    int k = 1;              // for the duality lower bound
    double zero_tol = 1e-6; // on the extrapolated limit
    SeriesBudget budget;
};

// Full record with the Zero/PositiveFinite/Infinite dichotomy: Infinite when
// the measure is infinite (empty test classes); Zero when the extrapolated
// limit is below zero_tol and the series test corroborates; PositiveFinite
// when the limit clears half the duality lower bound.
CapacityRecord capacity(const BirthDeath& chain, const CapacityOptions& opt = {});

// The explicit comparison constant C(k) = max{C1, C2} with
// C1 = max{1, b(k,k+1)/m(k+1)} and
// C2 = max{1, 2b(k+1,k+2)/m(k+1), b^2(k,k+1)/(m(k)m(k+1)) + 2b^2(k,k+1)/m^2(k+1)}.
double capacity_comparison_constant(const BirthDeath& chain, int k);

struct CapacityComparison {
    std::vector<std::int64_t> schedule;
    std::vector<double> cap_n;
    std::vector<double> capk_n;
    double C_of_k = 0.0;
};

// Both minima per scheduled n plus C(k); AssertionFailure if the sandwich
// cap_n <= capk_n <= C(k) cap_n fails beyond 1e-10 relative slack.
CapacityComparison capacity_comparison(const BirthDeath& chain, int k,
                                       const std::vector<std::int64_t>& schedule);

// C^2 = sum_r h(r)^2 m(r) (finite exactly when the chain fails the series
// test); the duality constant behind the capacity lower bound.
std::optional<double> capacity_duality_constant_sq(const BirthDeath& chain,
                                                   SeriesBudget budget = {});

} // namespace chainspec
