#include "chainspec/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "chainspec/dd.hpp"

namespace chainspec {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Diverges: return "diverges";
        case Outcome::Converges: return "converges";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// Running state shared by the shapes: prefix sums of 1/b and suffix tails.
struct ShapeStream {
    SequenceSpec edge, measure;
    SeriesShape shape;
    // prefix accumulator of 1/b(k,k+1), k <= r
    mutable KahanSum s_prefix;
    mutable std::int64_t s_next = 0;
    mutable std::optional<CertifiedSum> recip_total; // sum_{k>=0} 1/b, for GreenL2

    double prefix_to(std::int64_t r) const {
        while (s_next <= r) {
            s_prefix.add(1.0 / edge.at(static_cast<std::size_t>(s_next)));
            ++s_next;
        }
        return s_prefix.value();
    }

    double term(std::int64_t r) const {
        switch (shape) {
            case SeriesShape::Hamburger: {
                double S = prefix_to(r);
                return S * S * measure.at(static_cast<std::size_t>(r + 1));
            }
            case SeriesShape::Recurrence:
                return 1.0 / edge.at(static_cast<std::size_t>(r));
            case SeriesShape::Feller:
                return prefix_to(r) * measure.at(static_cast<std::size_t>(r + 1));
            case SeriesShape::Measure:
                return measure.at(static_cast<std::size_t>(r));
            case SeriesShape::GreenL2: {
                if (!recip_total) {
                    recip_total = tail_sum_reciprocal(edge, 0);
                    if (!recip_total) throw NotTransient("GreenL2 series needs a transient end");
                }
                double T = recip_total->value - (r > 0 ? prefix_to(r - 1) : 0.0);
                return T * T * measure.at(static_cast<std::size_t>(r));
            }
            case SeriesShape::CapacityConstant: {
                double h = r > 0 ? prefix_to(r - 1) : 0.0;
                return h * h * measure.at(static_cast<std::size_t>(r));
            }
            case SeriesShape::Pendant: {
                // "edge" holds the pendant weights, "measure" the pendant measures
                double D = edge.at(static_cast<std::size_t>(r)) / measure.at(static_cast<std::size_t>(r));
                double f = D / (D + 1.0);
                return f * f * measure.at(static_cast<std::size_t>(r));
            }
            case SeriesShape::Berezanskii:
                return std::sqrt(measure.at(static_cast<std::size_t>(r)) *
                                 measure.at(static_cast<std::size_t>(r + 1))) /
                       edge.at(static_cast<std::size_t>(r));
        }
        throw InvalidSpec("unreachable shape");
    }
};

// Prefix-sum term of 1/b with the exact limit constant when it converges.
std::optional<AsymptoticTerm> prefix_recip_term(const SequenceSpec& edge) {
    auto e = tail_term(edge);
    if (!e) return std::nullopt;
    AsymptoticTerm r = reciprocal(*e);
    if (series_outcome(r) == TermSum::Converges) {
        auto total = tail_sum_reciprocal(edge, 0);
        if (!total) return std::nullopt; // cannot happen: outcome says convergent
        return prefix_sum(r, total->value);
    }
    return prefix_sum(r);
}

// Certified upper bound on sum_{r>n} of the dominant term's shape, anchored at
// the computed term value t_n at index n. Integral test for base == 1 with
// iterated integration by parts for the log factors; ratio bound for base < 1.
std::optional<double> tail_bound_from_term(const AsymptoticTerm& a, double t_n, std::int64_t n) {
    if (t_n == 0.0) return 0.0;
    double x = static_cast<double>(n);
    if (a.base < 1.0) {
        // term ratio -> base; bound by geometric series with an inflated ratio
        double rho = a.base;
        if (a.power > 0.0) rho *= std::pow(1.0 + 1.0 / x, a.power);
        if (a.logpower > 0) rho *= std::pow(std::log(x + 1.0) / std::log(x), a.logpower);
        if (rho >= 1.0) return std::nullopt;
        return 2.0 * t_n * rho / (1.0 - rho);
    }
    if (a.base == 1.0 && a.power < -1.0) {
        // integral of x^p log^j x from n: n^(p+1) sum_i (j!/(j-i)!) log^(j-i)n/(-p-1)^(i+1)
        double p = a.power;
        int j = a.logpower;
        double lg = std::log(x);
        double factor = 0.0, fall = 1.0;
        for (int i = 0; i <= j; ++i) {
            factor += fall * std::pow(lg, j - i) / std::pow(-p - 1.0, i + 1);
            fall *= (j - i);
        }
        double cx = t_n / (std::pow(x, p) * std::pow(lg, j)); // anchor coefficient
        if (!std::isfinite(cx)) cx = t_n;
        return 2.0 * cx * std::pow(x, p + 1.0) * factor;
    }
    return std::nullopt;
}

SeriesVerdict numeric_decide(const std::function<double(std::int64_t)>& term, SeriesBudget bud,
                             bool log_domain) {
    SeriesVerdict v;
    bud.budget = std::max<std::int64_t>(bud.budget, 64);
    KahanSum sum;
    double log_blow = std::log(bud.blow_threshold);
    std::int64_t sample_at = 1;
    std::vector<double> last_terms;
    const std::int64_t window = 48;
    last_terms.reserve(window);
    double prev_t = -1.0;
    std::int64_t r = 0;
    for (; r < bud.budget; ++r) {
        double t = term(r);
        double lin = log_domain ? std::exp(t) : t;
        if (log_domain && t > log_blow) {
            v.outcome = Outcome::Diverges;
            v.evidence.note = "log-term exceeded the blow threshold";
            v.evidence.terms_used = r + 1;
            return v;
        }
        if (!log_domain && !(t >= 0.0))
            throw InvalidSpec("series terms must be nonnegative");
        if (std::isfinite(lin)) sum.add(lin);
        else if (!log_domain && std::isinf(t)) {
            v.outcome = Outcome::Diverges;
            v.evidence.note = "term overflowed";
            v.evidence.terms_used = r + 1;
            return v;
        }
        if (sum.value() > bud.blow_threshold) {
            v.outcome = Outcome::Diverges;
            v.evidence.terms_used = r + 1;
            v.evidence.partial_sums.emplace_back(r + 1, sum.value());
            v.evidence.note = "partial sum exceeded the blow threshold";
            return v;
        }
        if (r + 1 == sample_at || r + 1 == bud.budget) {
            v.evidence.partial_sums.emplace_back(r + 1, sum.value());
            sample_at *= 4;
        }
        if (r >= bud.budget - window) last_terms.push_back(log_domain ? lin : t);
        prev_t = t;
    }
    (void)prev_t;
    v.evidence.terms_used = bud.budget;
    // divergence trend: nondecreasing positive terms cannot sum to anything
    // finite (the catalogued streams are eventually monotone)
    if (last_terms.size() >= 2) {
        bool nondecreasing = last_terms.front() > 0.0;
        for (std::size_t i = 1; i < last_terms.size() && nondecreasing; ++i)
            nondecreasing = last_terms[i] >= last_terms[i - 1];
        if (nondecreasing) {
            v.outcome = Outcome::Diverges;
            v.evidence.note = "nondecreasing positive tail terms";
            return v;
        }
    }
    // geometric-decay ratio test over the last window; the margin tightens
    // with the budget so polynomial decay (ratio -> 1) never sneaks through
    double max_ratio = 0.0;
    bool ok = last_terms.size() >= 2;
    for (std::size_t i = 1; i < last_terms.size(); ++i) {
        if (last_terms[i - 1] <= 0.0) { // zero terms: decayed out
            max_ratio = std::max(max_ratio, last_terms[i] > 0.0 ? 1.0 : 0.0);
            continue;
        }
        max_ratio = std::max(max_ratio, last_terms[i] / last_terms[i - 1]);
    }
    double margin = std::min(0.9995, 1.0 - 32.0 / static_cast<double>(bud.budget));
    if (ok && max_ratio < margin && !last_terms.empty()) {
        double last = last_terms.back();
        v.outcome = Outcome::Converges;
        v.estimate = sum.value() + last * max_ratio / (1.0 - max_ratio);
        v.evidence.note = "ratio test, max tail ratio " + std::to_string(max_ratio);
        return v;
    }
    v.outcome = Outcome::Inconclusive;
    v.evidence.note = "budget exhausted without a decision";
    return v;
}

} // namespace

std::optional<AsymptoticTerm> term_asymptotics(const SequenceSpec& edge,
                                               const SequenceSpec& measure, SeriesShape shape) {
    auto e = tail_term(edge);
    auto m = tail_term(measure);
    if (!e || !m) return std::nullopt;
    switch (shape) {
        case SeriesShape::Hamburger: {
            auto S = prefix_recip_term(edge);
            if (!S) return std::nullopt;
            return mul(square(*S), shift(*m, 1));
        }
        case SeriesShape::Recurrence:
            return reciprocal(*e);
        case SeriesShape::Feller: {
            auto S = prefix_recip_term(edge);
            if (!S) return std::nullopt;
            return mul(*S, shift(*m, 1));
        }
        case SeriesShape::Measure:
            return *m;
        case SeriesShape::GreenL2: {
            auto T = suffix_sum(reciprocal(*e));
            if (!T) return std::nullopt; // recurrent end: series undefined
            return mul(square(*T), *m);
        }
        case SeriesShape::CapacityConstant: {
            auto S = prefix_recip_term(edge);
            if (!S) return std::nullopt;
            return mul(square(*S), *m);
        }
        case SeriesShape::Pendant: {
            AsymptoticTerm D = mul(*e, reciprocal(*m)); // pendant degree ratio
            if (D.grows_unbounded()) return *m;         // (D/(D+1))^2 -> 1
            if (D.has_positive_limit()) {
                double f = D.coef / (D.coef + 1.0);
                return mul(AsymptoticTerm{f * f, 0.0, 0, 1.0}, *m);
            }
            return mul(square(D), *m); // D -> 0: (D/(D+1))^2 ~ D^2
        }
        case SeriesShape::Berezanskii: {
            AsymptoticTerm mm = mul(*m, shift(*m, 1));
            AsymptoticTerm root{std::sqrt(mm.coef), mm.power / 2.0, 0, std::sqrt(mm.base)};
            if (mm.logpower != 0) throw UnsupportedOperation("log factors in a measure");
            return mul(root, reciprocal(*e));
        }
    }
    return std::nullopt;
}

std::function<double(std::int64_t)> series_term_fn(const SequenceSpec& edge,
                                                   const SequenceSpec& measure,
                                                   SeriesShape shape) {
    auto stream = std::make_shared<ShapeStream>();
    stream->edge = edge;
    stream->measure = measure;
    stream->shape = shape;
    return [stream](std::int64_t r) { return stream->term(r); };
}

SeriesVerdict decide_term_stream(const std::function<double(std::int64_t)>& term,
                                 std::optional<AsymptoticTerm> dom, SeriesBudget bud) {
    bud.budget = std::max<std::int64_t>(bud.budget, 64);
    if (!dom) return decide_numeric(term, bud);

    SeriesVerdict v;
    v.evidence.dominant_term = *dom;
    if (series_outcome(*dom) == TermSum::Diverges) {
        v.outcome = Outcome::Diverges;
        // small sample of partial sums as evidence; stop once terms leave the
        // representable range (they only corroborate the symbolic verdict)
        KahanSum sum;
        std::int64_t upto = std::min<std::int64_t>(bud.budget, 4096);
        std::int64_t r = 0;
        for (; r < upto; ++r) {
            double t = term(r);
            if (!std::isfinite(t)) break;
            sum.add(t);
        }
        v.evidence.terms_used = r;
        v.evidence.partial_sums.emplace_back(r, sum.value());
        v.evidence.note = "symbolic: dominant term " + dom->str();
        return v;
    }
    // convergent: partial sum to budget plus a certified tail bound
    v.outcome = Outcome::Converges;
    KahanSum sum;
    std::int64_t n = bud.budget;
    double t_last = 0.0;
    std::int64_t sample_at = 64;
    for (std::int64_t r = 0; r < n; ++r) {
        t_last = term(r);
        sum.add(t_last);
        if (r + 1 == sample_at) {
            v.evidence.partial_sums.emplace_back(r + 1, sum.value());
            sample_at *= 8;
        }
    }
    v.evidence.terms_used = n;
    v.evidence.partial_sums.emplace_back(n, sum.value());
    auto bound = tail_bound_from_term(*dom, t_last, n - 1);
    v.estimate = sum.value() + bound.value_or(std::max(1.0, sum.value()));
    v.evidence.note = "symbolic: dominant term " + dom->str() +
                      (bound ? "" : " (no closed tail bound; unit slack added)");
    return v;
}

SeriesVerdict decide_series(const SequenceSpec& edge, const SequenceSpec& measure,
                            SeriesShape shape, SeriesBudget bud) {
    if (shape == SeriesShape::GreenL2) {
        // guard: the tail sums must exist
        auto e = tail_term(edge);
        if (e && !suffix_sum(reciprocal(*e)))
            throw NotTransient("GreenL2 series needs a transient end");
    }
    return decide_term_stream(series_term_fn(edge, measure, shape),
                              term_asymptotics(edge, measure, shape), bud);
}

SeriesVerdict decide_numeric(const std::function<double(std::int64_t)>& term, SeriesBudget bud) {
    return numeric_decide(term, bud, false);
}

SeriesVerdict decide_numeric_log(const std::function<double(std::int64_t)>& term_log,
                                 SeriesBudget bud) {
    return numeric_decide(term_log, bud, true);
}

} // namespace chainspec
