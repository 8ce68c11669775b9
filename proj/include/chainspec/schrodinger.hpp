// schrodinger.hpp — Schroedinger operators Delta + W on birth-death chains:
// the eigenvalue recursion, preservation of essential self-adjointness under
// potentials bounded below, a potential forcing it, the generalized ground
// state transform, the bounded-solution criterion, the unitary equivalence
// with the counting-measure operator H_c, and the Berezanskii-type test.
#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "chainspec/criteria.hpp"
#include "chainspec/graph.hpp"

namespace chainspec {

struct Potential {
    std::optional<SequenceSpec> seq;            // analytic description when available
    std::function<double(std::size_t)> rule;    // evaluation rule (used when seq is absent)
    std::optional<double> lower_bound;          // K with W(x) >= K, spot-checked on access

    static Potential from_sequence(SequenceSpec s, std::optional<double> lower_bound = {});
    static Potential from_rule(std::function<double(std::size_t)> r,
                               std::optional<double> lower_bound = {});
    static Potential zero();

    double at(std::size_t k) const;
};

// Solutions of (Delta + W)v = lambda v built by the flux recursion
//   v(r+1) - v(r) = (1/b(r,r+1)) sum_{k<=r} (W(k)-lambda) v(k) m(k).
// Values are kept in a scaled mantissa/exponent form so that geometric growth
// past the double range keeps exact order information.
class EigenSolution {
public:
    double lambda() const { return lambda_; }
    bool positive() const { return positive_; } // v > 0 verified on the window
    std::size_t size() const { return mant_.size(); }

    double value(std::size_t r) const;     // +-inf once past the double range
    double log_abs(std::size_t r) const;   // log|v(r)|, -inf at zeros
    int sign(std::size_t r) const;
    // scaled representation: value = mant * 2^(128*scale)
    double mant(std::size_t r) const { return mant_.at(r); }
    int scale(std::size_t r) const { return scale_.at(r); }

    // residual |(Delta+W)v - lambda v| relative to the row scale, max over
    // indices 1..upto-2 (needs both neighbors)
    double max_residual(const BirthDeath& chain, const Potential& W) const;

private:
    friend EigenSolution eigen_recursion(const BirthDeath&, const Potential&, double, double,
                                         std::size_t);
    double lambda_ = 0.0;
    bool positive_ = false;
    std::vector<double> mant_;
    std::vector<int> scale_; // value = mant * 2^(128*scale)
};

EigenSolution eigen_recursion(const BirthDeath& chain, const Potential& W, double lambda,
                              double v0, std::size_t upto);

struct BoundedPotentialResult {
    bool esa_preserved = true;
    double lambda;  // the spectral parameter used (K-1)
    double lambda1; // sup(lambda - W) for the comparison solution
    // v(r) >= w(r) verified exactly on the window
    std::size_t comparison_window = 0;
};

// Chain test passes + W >= K => Delta + W still essentially self-adjoint;
// ChainNotEsa when no conclusion is offered, LowerBoundMissing without K.
BoundedPotentialResult bounded_potential_esa(const BirthDeath& chain, const Potential& W,
                                             std::size_t window = 200, SeriesBudget budget = {});

struct EsaPotential {
    Potential W; // W(x) = Deg(x) * (inf_{y~x} m(y))^(-1/2)
    SeriesVerdict divergence_certificate; // sum_k ((Deg+W-lambda)/Deg)^2 m(x_{k+1}), lambda=-1
};

// A potential making Delta + W essentially self-adjoint (chains; the
// certificate is evaluated along the chain path).
EsaPotential make_esa_potential(const BirthDeath& chain, SeriesBudget budget = {});

// Finite graphs: the same formula gives a finite table (the operator is
// already self-adjoint there; kept for completeness of the construction).
std::vector<double> make_esa_potential(const FiniteGraph& g);

// Ground-state transform by a positive generalized eigenfunction v:
// edge weights b v v, measure m v^2, plus the additive constant lambda.
class GroundStateTransform {
public:
    double shift() const { return lambda_; }

    double log_edge(std::size_t k) const;    // log(b(k,k+1) v(k) v(k+1))
    double log_measure(std::size_t r) const; // log(m(r) v(r)^2)

    // materialized table-only chain over 0..upto (Overflow past the double range)
    BirthDeath window_chain(std::size_t upto) const;

    const EigenSolution& eigenfunction() const { return *v_; }
    const BirthDeath& base() const { return base_; }

private:
    friend GroundStateTransform ground_state_transform(const BirthDeath&, const Potential&,
                                                       double, const EigenSolution&);
    BirthDeath base_;
    double lambda_ = 0.0;
    std::shared_ptr<const EigenSolution> v_;
};

// NonpositiveV when v is not positive on its window.
GroundStateTransform ground_state_transform(const BirthDeath& chain, const Potential& W,
                                            double lambda, const EigenSolution& v);

// The series test applied to the transformed chain (log-domain numeric path).
SeriesVerdict transformed_hamburger(const GroundStateTransform& t, SeriesBudget budget = {});

// The same series assembled directly from the display formula
// sum_r (sum_{k<=r} 1/(b v v))^2 v^2(r+1) m(r+1) — an independent code path.
SeriesVerdict potentials_series(const BirthDeath& chain, const EigenSolution& v,
                                SeriesBudget budget = {});

struct BoundedVResult {
    SeriesVerdict series; // sum_r (q(B_r) + m(B_r))/b(r,r+1), q = W m
    // when the series converges, v is bounded and the two operators share the verdict:
    std::optional<SeriesVerdict> combined_esa;
};
BoundedVResult bounded_v_criterion(const BirthDeath& chain, const Potential& W,
                                   SeriesBudget budget = {});

struct HcEquivalence {
    std::function<double(std::size_t)> w; // w(r,r+1) = b/sqrt(m(r)m(r+1))
    std::function<double(std::size_t)> W; // the induced potential
    SeriesVerdict esa;                    // equals the chain's series verdict
};
HcEquivalence hc_equivalence(const BirthDeath& chain, SeriesBudget budget = {});

// sum_r sqrt(m(r)m(r+1))/b(r,r+1) = infinity makes Delta + W essentially
// self-adjoint for every potential W.
SeriesVerdict berezanskii_esa(const BirthDeath& chain, SeriesBudget budget = {});

} // namespace chainspec
