// asymptotics.hpp — a small calculus of dominant terms coef * r^power *
// (log r)^logpower * base^r, closed under the operations needed to decide the
// catalogued series tests exactly: products, squares, reciprocals, dominant
// sums, prefix sums and suffix (tail) sums.
#pragma once
#include <optional>
#include <string>

#include "chainspec/sequence.hpp"

namespace chainspec {

struct AsymptoticTerm {
    double coef = 0.0;  // finite; 0 means the sequence vanishes identically beyond burn-in
    double power = 0.0; // exponent of r
    int logpower = 0;   // exponent of log r, >= 0
    double base = 1.0;  // geometric factor base^r, > 0

    bool is_zero() const { return coef == 0.0; }

    // limit behavior as r -> infinity
    bool grows_unbounded() const {
        return !is_zero() && (base > 1.0 || (base == 1.0 && (power > 0.0 || (power == 0.0 && logpower > 0))));
    }
    bool vanishes() const {
        return is_zero() || base < 1.0 || (base == 1.0 && (power < 0.0 || (power == 0.0 && logpower < 0)));
    }
    // bounded with a nonzero limit
    bool has_positive_limit() const {
        return !is_zero() && base == 1.0 && power == 0.0 && logpower == 0;
    }

    std::string str() const;
};

// Dominant tail term of a SequenceSpec; nullopt when the tail is None.
std::optional<AsymptoticTerm> tail_term(const SequenceSpec& s);

AsymptoticTerm mul(const AsymptoticTerm& a, const AsymptoticTerm& b);
AsymptoticTerm square(const AsymptoticTerm& a);
// Reciprocal requires logpower == 0 (log factors never appear in weights).
AsymptoticTerm reciprocal(const AsymptoticTerm& a);
// Dominant term of a sum of two nonnegative-coefficient terms.
AsymptoticTerm dominant_sum(const AsymptoticTerm& a, const AsymptoticTerm& b);
// Shift r -> r + d (d may be negative); asymptotic class is unchanged, the
// coefficient picks up base^(-d).
AsymptoticTerm shift(const AsymptoticTerm& a, long d);

// Dominant term of the partial sums S_r = sum_{k<=r} a_k. The exact_constant
// hook supplies the limit value when the sum converges (base < 1, or base = 1
// and power < -1); without it the coefficient is a placeholder 1.
AsymptoticTerm prefix_sum(const AsymptoticTerm& a, std::optional<double> exact_constant = {});

// Dominant term of the tails T_r = sum_{k>=r} a_k; nullopt when divergent.
std::optional<AsymptoticTerm> suffix_sum(const AsymptoticTerm& a);

// Convergence of sum_r of a term (integral test with the log-power refinement
// at power == -1: for nonnegative logpower the series always diverges there).
enum class TermSum { Diverges, Converges };
TermSum series_outcome(const AsymptoticTerm& a);

} // namespace chainspec
