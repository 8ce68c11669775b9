// criteria.hpp — every classification criterion as a verdict-producing
// operation, composed into a PropertyReport: essential self-adjointness via
// Hamburger's series test, recurrence/transience, measure finiteness, the
// transient three-way equivalence, the Feller test for recurrent chains, and
// the conjunction rules for stars.
#pragma once
#include <optional>
#include <string>
#include <vector>

#include "chainspec/graph.hpp"
#include "chainspec/series.hpp"

namespace chainspec {

// Hamburger's criterion: sum_r (sum_{k<=r} 1/b)^2 m(r+1); Diverges <=> the
// restricted Laplacian is essentially self-adjoint.
SeriesVerdict hamburger_esa(const BirthDeath& chain, SeriesBudget budget = {});

enum class Recurrence { Recurrent, Transient, Inconclusive };
std::string to_string(Recurrence r);

// Transient iff sum_k 1/b(k,k+1) < infinity on the end.
Recurrence recurrence(const SequenceSpec& edge, SeriesBudget budget = {});
Recurrence recurrence(const BirthDeath& chain, SeriesBudget budget = {});

enum class MeasureVerdict { Finite, Infinite, Inconclusive };
std::string to_string(MeasureVerdict v);

MeasureVerdict measure_finite(const SequenceSpec& measure, SeriesBudget budget = {});

// For a transient chain the following are one verdict: essential
// self-adjointness, form uniqueness, and infinite total measure.
struct TransientEquivalences {
    CheckVerdict esa;
    CheckVerdict form_uniqueness;
    CheckVerdict measure_infinite;
    SeriesVerdict measure_series;
};
TransientEquivalences transient_chain_equivalences(const BirthDeath& chain,
                                                   SeriesBudget budget = {});

// Recurrent chains: divergence of sum_r (sum_{k<=r} 1/b) m(r+1) (the
// rearranged tail-measure test) means the Feller property holds, which in
// turn forces essential self-adjointness.
SeriesVerdict feller_recurrent(const BirthDeath& chain, SeriesBudget budget = {});

struct TwoRayEsa {
    SeriesVerdict pos;
    SeriesVerdict neg;
    CheckVerdict esa; // conjunction of the two end verdicts
};
TwoRayEsa two_ray_esa(const TwoRayStar& star, SeriesBudget budget = {});

struct StarLikeEsa {
    std::vector<SeriesVerdict> per_ray;
    std::optional<SeriesVerdict> family; // one uniform verdict for the family
    CheckVerdict esa;
};
StarLikeEsa star_like_esa(const StarLike& g, SeriesBudget budget = {});

// ---- report assembly ----

struct PropertyEntry {
    std::string verdict;
    std::optional<SeriesVerdict> series;
    std::vector<std::string> citations; // rule anchors (nonempty for decided properties)
    std::string detail;
};

struct PropertyReport {
    std::string kind;
    std::vector<std::pair<std::string, PropertyEntry>> properties; // ordered
    std::vector<std::string> consistency_violations;

    const PropertyEntry* find(const std::string& name) const;
    void add(std::string name, PropertyEntry e);
};

struct ClassifyOptions {
    SeriesBudget budget;
    std::vector<std::int64_t> capacity_schedule = {25, 50, 100, 200, 400};
    double capacity_zero_tol = 1e-6;
    int capacity_k = 1;
    bool with_capacity = true;
    bool with_liouville = true;
    int witness_window = 200;
};

// Runs every applicable criterion, cross-checks the implication lattice
// (Feller-diverges => Hamburger-diverges, ESA => Liouville holds, transient
// three-way equivalence) and records any violation.
PropertyReport classify(const GraphSpec& g, const ClassifyOptions& opt = {});

} // namespace chainspec
