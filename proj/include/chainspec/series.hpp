// series.hpp — decides convergence/divergence of the catalogued series tests:
// exactly (via the asymptotic term calculus) when both tails are analytic, and
// by bounded numeric evidence otherwise.
#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chainspec/asymptotics.hpp"
#include "chainspec/sequence.hpp"

namespace chainspec {

enum class Outcome { Diverges, Converges, Inconclusive };

std::string to_string(Outcome o);

struct SeriesEvidence {
    std::int64_t terms_used = 0;
    std::vector<std::pair<std::int64_t, double>> partial_sums; // sampled (index, sum)
    std::optional<AsymptoticTerm> dominant_term;
    std::string note;
};

struct SeriesVerdict {
    Outcome outcome = Outcome::Inconclusive;
    std::optional<double> estimate; // partial sum + certified tail bound when convergent
    SeriesEvidence evidence;

    bool diverges() const { return outcome == Outcome::Diverges; }
    bool converges() const { return outcome == Outcome::Converges; }
    bool inconclusive() const { return outcome == Outcome::Inconclusive; }
};

// The catalogued series forms over a chain (edge weights b, measure m):
//   Hamburger         sum_r (sum_{k<=r} 1/b)^2 m(r+1)
//   Recurrence        sum_r 1/b(r,r+1)
//   Feller            sum_r (sum_{k<=r} 1/b) m(r+1)
//   Measure           sum_r m(r)
//   GreenL2           sum_r (sum_{k>=r} 1/b)^2 m(r)
//   CapacityConstant  sum_r h(r)^2 m(r), h(r) = sum_{j<r} 1/b, h(0)=0
//   Pendant           sum_r (D_r/(D_r+1))^2 m~(r), D_r = b~(r)/m~(r)
//   Berezanskii       sum_r sqrt(m(r) m(r+1)) / b(r,r+1)
enum class SeriesShape {
    Hamburger,
    Recurrence,
    Feller,
    Measure,
    GreenL2,
    CapacityConstant,
    Pendant,
    Berezanskii,
};

struct SeriesBudget {
    std::int64_t budget = 100000;     // >= 64
    double blow_threshold = 1e12;
};

// Dominant asymptotic term of the general term of the series, when both tails
// are analytic; nullopt otherwise (Unknown).
std::optional<AsymptoticTerm> term_asymptotics(const SequenceSpec& edge,
                                               const SequenceSpec& measure, SeriesShape shape);

// Full verdict: symbolic decision when term_asymptotics is known, otherwise
// partial sums with a blow threshold and a geometric-decay ratio test.
SeriesVerdict decide_series(const SequenceSpec& edge, const SequenceSpec& measure,
                            SeriesShape shape, SeriesBudget budget = {});

// Numeric-only decision over an arbitrary nonnegative term stream.
SeriesVerdict decide_numeric(const std::function<double(std::int64_t)>& term,
                             SeriesBudget budget = {});

// Decision over an arbitrary nonnegative term stream with an optional known
// dominant term: symbolic outcome plus partial sums and a certified tail
// bound when available, numeric evidence otherwise.
SeriesVerdict decide_term_stream(const std::function<double(std::int64_t)>& term,
                                 std::optional<AsymptoticTerm> dominant,
                                 SeriesBudget budget = {});

// Numeric decision over log-domain terms (for streams whose terms overflow or
// underflow doubles). term_log(r) = log of the r-th term, -inf for a zero term.
SeriesVerdict decide_numeric_log(const std::function<double(std::int64_t)>& term_log,
                                 SeriesBudget budget = {});

// Exposes the numeric term stream of a catalogued shape (used by tests as the
// brute-force oracle input and by the evidence reports).
std::function<double(std::int64_t)> series_term_fn(const SequenceSpec& edge,
                                                   const SequenceSpec& measure, SeriesShape shape);

} // namespace chainspec
