#include "chainspec/schrodinger.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "chainspec/dd.hpp"

namespace chainspec {

namespace {
// scale granularity: mantissas stay within 2^+-128, leaving ~1e170 of product
// headroom against large raw weights before a rescale triggers
constexpr double kRescale = 0x1p128;
constexpr double kRescaleInv = 0x1p-128;
constexpr double kLogGran = 128.0 * 0.6931471805599453;
} // namespace

Potential Potential::from_sequence(SequenceSpec s, std::optional<double> lb) {
    Potential p;
    p.seq = std::move(s);
    p.lower_bound = lb;
    return p;
}

Potential Potential::from_rule(std::function<double(std::size_t)> r, std::optional<double> lb) {
    Potential p;
    p.rule = std::move(r);
    p.lower_bound = lb;
    return p;
}

Potential Potential::zero() {
    return from_rule([](std::size_t) { return 0.0; }, 0.0);
}

double Potential::at(std::size_t k) const {
    double w = rule ? rule(k) : seq ? seq->at(k) : throw InvalidSpec("empty potential");
    if (!std::isfinite(w)) throw InvalidSpec("potential value not finite");
    if (lower_bound && w < *lower_bound)
        throw InvalidSpec("potential breaches its declared lower bound at " + std::to_string(k));
    return w;
}

double EigenSolution::value(std::size_t r) const {
    double v = mant_.at(r);
    for (int s = 0; s < scale_.at(r); ++s) v *= kRescale;
    for (int s = 0; s > scale_.at(r); --s) v *= kRescaleInv;
    return v;
}

double EigenSolution::log_abs(std::size_t r) const {
    double m = std::abs(mant_.at(r));
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(m) + kLogGran * scale_.at(r);
}

int EigenSolution::sign(std::size_t r) const {
    double m = mant_.at(r);
    return m > 0.0 ? 1 : (m < 0.0 ? -1 : 0);
}

double EigenSolution::max_residual(const BirthDeath& chain, const Potential& W) const {
    // (Delta + W - lambda)v at r: b(r-1)(v(r)-v(r-1)) + b(r)(v(r)-v(r+1)) + (W-lambda)v m,
    // all divided by m(r); normalized by the row scale. Mantissas are aligned
    // to a common exponent before the cancellation-sensitive sums.
    double worst = 0.0;
    for (std::size_t r = 0; r + 1 < size(); ++r) {
        int e = scale_[r];
        if (r > 0) e = std::max(e, scale_[r - 1]);
        e = std::max(e, scale_[r + 1]);
        auto aligned = [&](std::size_t i) {
            double m = mant_[i];
            for (int s = scale_[i]; s < e; ++s) m *= kRescaleInv;
            return m;
        };
        double m_r = chain.measure.at(r);
        double br = chain.edge.at(r);
        double vr = aligned(r), vn = aligned(r + 1);
        dd acc = dd_mul(dd_sub(dd{vr}, dd{vn}), br);
        double scale = std::abs(br * vr) + std::abs(br * vn);
        if (r > 0) {
            double bl = chain.edge.at(r - 1);
            double vp = aligned(r - 1);
            acc = dd_add(acc, dd_mul(dd_sub(dd{vr}, dd{vp}), bl));
            scale += std::abs(bl * vr) + std::abs(bl * vp);
        }
        double wml = (W.at(r) - lambda_) * m_r;
        acc = dd_add(acc, dd_mul(dd{vr}, wml));
        scale += std::abs(wml * vr);
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(acc.value()) / scale);
    }
    return worst;
}

EigenSolution eigen_recursion(const BirthDeath& chain, const Potential& W, double lambda,
                              double v0, std::size_t upto) {
    if (upto < 1) throw InvalidSpec("upto must be at least 1");
    EigenSolution sol;
    sol.lambda_ = lambda;
    sol.mant_.reserve(upto + 1);
    sol.scale_.reserve(upto + 1);

    double v = v0, A = 0.0; // A = sum_{k<=r} (W(k)-lambda) v(k) m(k), current scale
    int e = 0;
    sol.mant_.push_back(v);
    sol.scale_.push_back(e);
    for (std::size_t r = 0; r < upto; ++r) {
        A += (W.at(r) - lambda) * v * chain.measure.at(r);
        v += A / chain.edge.at(r);
        if (!std::isfinite(v) || !std::isfinite(A))
            throw Overflow("recursion left the scaled range at index " + std::to_string(r));
        while (std::abs(v) > kRescale || std::abs(A) > kRescale) {
            v *= kRescaleInv;
            A *= kRescaleInv;
            ++e;
        }
        while (v != 0.0 && std::abs(v) < kRescaleInv && std::abs(A) < kRescaleInv) {
            v *= kRescale;
            A *= kRescale;
            --e;
        }
        sol.mant_.push_back(v);
        sol.scale_.push_back(e);
    }
    bool all_positive = true;
    for (double m : sol.mant_) all_positive = all_positive && m > 0.0;
    sol.positive_ = all_positive;
    return sol;
}

BoundedPotentialResult bounded_potential_esa(const BirthDeath& chain, const Potential& W,
                                             std::size_t window, SeriesBudget budget) {
    if (!W.lower_bound) throw LowerBoundMissing("the preservation result needs W >= K");
    SeriesVerdict ham = hamburger_esa(chain, budget);
    if (!ham.diverges())
        throw ChainNotEsa(ham.converges() ? "base chain fails the series test"
                                          : "base chain series test undecided");
    double K = *W.lower_bound;
    double lambda = K - 1.0;
    double lambda1 = lambda - K; // = -1; dominates sup(lambda - W)
    EigenSolution v = eigen_recursion(chain, W, lambda, 1.0, window);
    EigenSolution w = eigen_recursion(chain, Potential::zero(), lambda1, 1.0, window);
    for (std::size_t r = 0; r <= window; ++r) {
        // v >= w, compared in the scaled representation
        bool ge = v.scale(r) > w.scale(r) ||
                  (v.scale(r) == w.scale(r) && v.mant(r) >= w.mant(r));
        if (!ge) throw AssertionFailure("comparison solution overtook v at " + std::to_string(r));
    }
    BoundedPotentialResult out;
    out.esa_preserved = true;
    out.lambda = lambda;
    out.lambda1 = lambda1;
    out.comparison_window = window;
    return out;
}

namespace {

AsymptoticTerm rsqrt_term(const AsymptoticTerm& a) {
    if (a.logpower != 0) throw UnsupportedOperation("log factors in a measure");
    return AsymptoticTerm{1.0 / std::sqrt(a.coef), -a.power / 2.0, 0, 1.0 / std::sqrt(a.base)};
}

bool term_decreasing(const AsymptoticTerm& a) {
    return a.base < 1.0 || (a.base == 1.0 && a.power < 0.0);
}

} // namespace

EsaPotential make_esa_potential(const BirthDeath& chain, SeriesBudget budget) {
    SequenceSpec edge = chain.edge, measure = chain.measure;
    auto deg = [edge, measure](std::size_t r) {
        double b = edge.at(r) + (r > 0 ? edge.at(r - 1) : 0.0);
        return b / measure.at(r);
    };
    auto infm = [measure](std::size_t r) {
        double m = measure.at(r + 1);
        if (r > 0) m = std::min(m, measure.at(r - 1));
        if (!(m > 0.0)) throw ZeroInfMeasure("neighbor measures must have a positive infimum");
        return m;
    };
    EsaPotential out;
    out.W = Potential::from_rule(
        [deg, infm](std::size_t r) { return deg(r) / std::sqrt(infm(r)); }, 0.0);

    const double lambda = -1.0;
    auto term = [deg, infm, measure, lambda](std::int64_t k) {
        // raw formula: infinities flow to the series engine as divergence
        std::size_t r = static_cast<std::size_t>(k);
        double d = deg(r);
        double f = (d + d / std::sqrt(infm(r)) - lambda) / d;
        return f * f * measure.at(r + 1);
    };
    std::optional<AsymptoticTerm> dom;
    auto e = tail_term(edge);
    auto m = tail_term(measure);
    if (e && m) {
        AsymptoticTerm deg_t = mul(dominant_sum(shift(*e, -1), *e), reciprocal(*m));
        AsymptoticTerm infm_t = term_decreasing(*m) ? shift(*m, 1) : shift(*m, -1);
        AsymptoticTerm w_t = mul(deg_t, rsqrt_term(infm_t));
        AsymptoticTerm num = dominant_sum(dominant_sum(deg_t, w_t), AsymptoticTerm{1.0, 0.0, 0, 1.0});
        AsymptoticTerm ratio = mul(num, reciprocal(deg_t));
        dom = mul(square(ratio), shift(*m, 1));
    }
    out.divergence_certificate = decide_term_stream(term, dom, budget);
    return out;
}

std::vector<double> make_esa_potential(const FiniteGraph& g) {
    g.validate();
    std::vector<double> W(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        double deg = 0.0;
        double infm = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < g.n; ++j) {
            if (g.weights[i][j] <= 0.0) continue;
            deg += g.weights[i][j];
            infm = std::min(infm, g.measure[j]);
        }
        if (deg == 0.0) continue; // isolated vertex: no neighbors, W stays 0
        W[i] = (deg / g.measure[i]) / std::sqrt(infm);
    }
    return W;
}

GroundStateTransform ground_state_transform(const BirthDeath& chain, const Potential& W,
                                            double lambda, const EigenSolution& v) {
    if (!v.positive()) throw NonpositiveV("the transform needs a positive eigenfunction");
    double res = v.max_residual(chain, W);
    if (res > 1e-10)
        throw AssertionFailure("eigen recursion residual " + std::to_string(res) +
                               " exceeds tolerance");
    GroundStateTransform t;
    t.base_ = chain;
    t.lambda_ = lambda;
    t.v_ = std::make_shared<EigenSolution>(v);
    return t;
}

double GroundStateTransform::log_edge(std::size_t k) const {
    return std::log(base_.edge.at(k)) + v_->log_abs(k) + v_->log_abs(k + 1);
}

double GroundStateTransform::log_measure(std::size_t r) const {
    return std::log(base_.measure.at(r)) + 2.0 * v_->log_abs(r);
}

BirthDeath GroundStateTransform::window_chain(std::size_t upto) const {
    if (upto + 1 >= v_->size()) throw InvalidSpec("eigenfunction window too small");
    std::vector<double> b(upto), m(upto + 1);
    for (std::size_t k = 0; k < upto; ++k) {
        double le = log_edge(k);
        if (le > 700.0) throw Overflow("transformed weight exceeds the double range");
        b[k] = std::exp(le);
    }
    for (std::size_t r = 0; r <= upto; ++r) {
        double lm = log_measure(r);
        if (lm > 700.0) throw Overflow("transformed measure exceeds the double range");
        m[r] = std::exp(lm);
    }
    BirthDeath out;
    out.edge = SequenceSpec::table_only(std::move(b));
    out.measure = SequenceSpec::table_only(std::move(m));
    return out;
}

SeriesVerdict transformed_hamburger(const GroundStateTransform& t, SeriesBudget budget) {
    // series test on the transformed chain, assembled from its accessors
    std::size_t n = t.eigenfunction().size();
    budget.budget = std::min<std::int64_t>(budget.budget, static_cast<std::int64_t>(n) - 2);
    auto st = std::make_shared<std::pair<KahanSum, std::int64_t>>();
    GroundStateTransform tc = t; // the closure owns a copy
    auto term_log = [tc, st](std::int64_t r) {
        while (st->second <= r) {
            st->first.add(std::exp(-tc.log_edge(static_cast<std::size_t>(st->second))));
            ++st->second;
        }
        return 2.0 * std::log(st->first.value()) +
               tc.log_measure(static_cast<std::size_t>(r + 1));
    };
    return decide_numeric_log(term_log, budget);
}

SeriesVerdict potentials_series(const BirthDeath& chain, const EigenSolution& v,
                                SeriesBudget budget) {
    // the display formula, assembled directly: sum_r (sum_{k<=r} 1/(b v v))^2 v^2(r+1) m(r+1)
    std::size_t n = v.size();
    budget.budget = std::min<std::int64_t>(budget.budget, static_cast<std::int64_t>(n) - 2);
    auto vv = std::make_shared<EigenSolution>(v);
    auto st = std::make_shared<std::pair<KahanSum, std::int64_t>>();
    SequenceSpec edge = chain.edge, measure = chain.measure;
    auto term_log = [vv, st, edge, measure](std::int64_t r) {
        while (st->second <= r) {
            std::size_t k = static_cast<std::size_t>(st->second);
            double lg = std::log(edge.at(k)) + vv->log_abs(k) + vv->log_abs(k + 1);
            st->first.add(std::exp(-lg));
            ++st->second;
        }
        std::size_t rr = static_cast<std::size_t>(r + 1);
        return 2.0 * std::log(st->first.value()) + 2.0 * vv->log_abs(rr) +
               std::log(measure.at(rr));
    };
    return decide_numeric_log(term_log, budget);
}

BoundedVResult bounded_v_criterion(const BirthDeath& chain, const Potential& W,
                                   SeriesBudget budget) {
    for (std::size_t k = 0; k < 8; ++k)
        if (W.at(k) < 0.0) throw InvalidSpec("the bounded-v criterion needs W >= 0");
    SequenceSpec edge = chain.edge, measure = chain.measure;
    Potential Wc = W;
    auto st = std::make_shared<std::array<KahanSum, 2>>();
    auto cnt = std::make_shared<std::int64_t>(0);
    auto term = [edge, measure, Wc, st, cnt](std::int64_t r) {
        while (*cnt <= r) {
            std::size_t k = static_cast<std::size_t>(*cnt);
            double m = measure.at(k);
            (*st)[0].add(Wc.at(k) * m); // q(B_r)
            (*st)[1].add(m);            // m(B_r)
            ++*cnt;
        }
        return ((*st)[0].value() + (*st)[1].value()) / edge.at(static_cast<std::size_t>(r));
    };
    std::optional<AsymptoticTerm> dom;
    auto e = tail_term(edge);
    auto m = tail_term(measure);
    if (e && m && W.seq) {
        auto w = tail_term(*W.seq);
        if (w) {
            AsymptoticTerm num = dominant_sum(prefix_sum(mul(*w, *m)), prefix_sum(*m));
            dom = mul(num, reciprocal(*e));
        }
    }
    BoundedVResult out;
    out.series = decide_term_stream(term, dom, budget);
    if (out.series.converges()) out.combined_esa = hamburger_esa(chain, budget);
    return out;
}

HcEquivalence hc_equivalence(const BirthDeath& chain, SeriesBudget budget) {
    SequenceSpec edge = chain.edge, measure = chain.measure;
    HcEquivalence out;
    out.w = [edge, measure](std::size_t r) {
        return edge.at(r) / std::sqrt(measure.at(r) * measure.at(r + 1));
    };
    out.W = [edge, measure](std::size_t x) {
        double inv = 1.0 / std::sqrt(measure.at(x));
        double acc = edge.at(x) * (inv - 1.0 / std::sqrt(measure.at(x + 1)));
        if (x > 0) acc += edge.at(x - 1) * (inv - 1.0 / std::sqrt(measure.at(x - 1)));
        return inv * acc;
    };
    out.esa = hamburger_esa(chain, budget);
    return out;
}

SeriesVerdict berezanskii_esa(const BirthDeath& chain, SeriesBudget budget) {
    return decide_series(chain.edge, chain.measure, SeriesShape::Berezanskii, budget);
}

} // namespace chainspec
