#include "chainspec/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "chainspec/banded.hpp"
#include "chainspec/dd.hpp"

namespace chainspec {

std::string to_string(CapacityRecord::Dichotomy d) {
    switch (d) {
        case CapacityRecord::Dichotomy::Zero: return "zero";
        case CapacityRecord::Dichotomy::PositiveFinite: return "positive-finite";
        case CapacityRecord::Dichotomy::Infinite: return "infinite";
        case CapacityRecord::Dichotomy::Inconclusive: return "inconclusive";
    }
    return "?";
}

double h2_norm_sq(const BirthDeath& chain, std::span<const double> f, std::int64_t n) {
    if (static_cast<std::int64_t>(f.size()) != n) throw InvalidSpec("f must list f(0..n-1)");
    auto tail = tail_sum(chain.measure, static_cast<std::size_t>(n));
    if (!tail) throw MeasureTailInfinite("sum of m(r) for r >= n has no finite certificate");
    auto fv = [&](std::int64_t r) { return r >= n ? 1.0 : f[static_cast<std::size_t>(r)]; };

    KahanSum mass;
    for (std::int64_t r = 0; r < n; ++r)
        mass.add(fv(r) * fv(r) * chain.measure.at(static_cast<std::size_t>(r)));
    mass.add(tail->value);

    // Delta f vanishes from n+1 on (f constant there); the window-edge row at
    // r = n carries the exact boundary term b(n-1,n)(1-f(n-1))/m(n)
    KahanSum lap;
    for (std::int64_t r = 0; r <= n; ++r) {
        double m = chain.measure.at(static_cast<std::size_t>(r));
        double acc = 0.0;
        if (r > 0) acc += chain.edge.at(static_cast<std::size_t>(r - 1)) * (fv(r) - fv(r - 1));
        acc += chain.edge.at(static_cast<std::size_t>(r)) * (fv(r) - fv(r + 1));
        lap.add(acc * acc / m);
    }

    KahanSum q;
    for (std::int64_t r = 0; r < n; ++r) {
        double d = fv(r) - fv(r + 1);
        q.add(chain.edge.at(static_cast<std::size_t>(r)) * d * d);
    }
    return mass.value() + lap.value() + q.value();
}

double h2_norm_sq(const BirthDeath& chain, const VertexFunction& f, std::int64_t n) {
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (std::int64_t r = 0; r < n; ++r) vals[static_cast<std::size_t>(r)] = f.at(Vertex{0, r});
    return h2_norm_sq(chain, vals, n);
}

double capacity_minimum(const BirthDeath& chain, std::int64_t n, std::optional<int> k,
                        std::vector<double>* minimizer) {
    if (n < 0) throw InvalidSpec("n must be nonnegative");
    if (k && *k >= n) throw InvalidSpec("k must be below n");
    std::int64_t lo = k ? *k + 1 : 0; // unknowns f(lo..n-1); below lo fixed to 0
    std::int64_t N = n - lo;

    std::vector<double> full(static_cast<std::size_t>(n), 0.0);
    if (N > 0) {
        std::size_t bw = static_cast<std::size_t>(std::min<std::int64_t>(2, N - 1));
        BandedSPD A(static_cast<std::size_t>(N), bw);
        BandedSPD A_orig(static_cast<std::size_t>(N), bw); // kept for refinement residuals
        std::vector<double> rhs(static_cast<std::size_t>(N), 0.0);
        // accumulate weight * (sum coef*f(idx) + constant)^2
        auto add_sq = [&](double w, std::initializer_list<std::pair<std::int64_t, double>> terms,
                          double constant) {
            double cst = constant;
            std::vector<std::pair<std::int64_t, double>> un;
            for (auto [r, c] : terms) {
                if (r < lo) continue;        // fixed 0
                else if (r >= n) cst += c;   // fixed 1
                else un.emplace_back(r - lo, c);
            }
            for (auto [i, ci] : un) {
                for (auto [j, cj] : un)
                    if (j <= i) {
                        A.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j), w * ci * cj);
                        A_orig.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                   w * ci * cj);
                    }
                rhs[static_cast<std::size_t>(i)] -= w * ci * cst;
            }
        };

        for (std::int64_t r = lo; r < n; ++r)
            add_sq(chain.measure.at(static_cast<std::size_t>(r)), {{r, 1.0}}, 0.0);
        for (std::int64_t r = std::max<std::int64_t>(0, lo - 1); r < n; ++r)
            add_sq(chain.edge.at(static_cast<std::size_t>(r)), {{r, 1.0}, {r + 1, -1.0}}, 0.0);
        for (std::int64_t r = std::max<std::int64_t>(0, lo - 1); r <= n; ++r) {
            double m = chain.measure.at(static_cast<std::size_t>(r));
            double bl = r > 0 ? chain.edge.at(static_cast<std::size_t>(r - 1)) : 0.0;
            double br = chain.edge.at(static_cast<std::size_t>(r));
            // m * ((bl(f(r)-f(r-1)) + br(f(r)-f(r+1)))/m)^2
            add_sq(1.0 / m,
                   {{r, bl + br}, {r - 1, -bl}, {r + 1, -br}}, 0.0);
        }
        try {
            A.factorize();
        } catch (const SolverFailure& e) {
            throw SolverFailure(std::string("capacity Hessian not positive definite: ") + e.what());
        }
        std::vector<double> x = rhs;
        A.solve(x);
        // iterative refinement with double-double residuals
        std::vector<dd> xd(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) xd[i] = dd{x[i]};
        for (int pass = 0; pass < 3; ++pass) {
            std::vector<double> res(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                dd acc{rhs[i]};
                std::size_t jlo = i > bw ? i - bw : 0;
                std::size_t jhi = std::min(x.size() - 1, i + bw);
                for (std::size_t j = jlo; j <= jhi; ++j)
                    acc = dd_sub(acc, dd_mul(xd[j], A_orig.get(i, j)));
                res[i] = acc.value();
            }
            A.solve(res);
            for (std::size_t i = 0; i < x.size(); ++i) xd[i] = dd_add(xd[i], dd{res[i]});
        }
        for (std::int64_t i = 0; i < N; ++i)
            full[static_cast<std::size_t>(lo + i)] = xd[static_cast<std::size_t>(i)].value();
    }
    if (minimizer) *minimizer = full;
    return h2_norm_sq(chain, full, n);
}

double capacity_comparison_constant(const BirthDeath& chain, int k) {
    if (k < 1) throw InvalidSpec("the comparison constant needs k >= 1");
    auto b = [&](int i) { return chain.edge.at(static_cast<std::size_t>(i)); };
    auto m = [&](int i) { return chain.measure.at(static_cast<std::size_t>(i)); };
    double c1 = std::max(1.0, b(k) / m(k + 1));
    double c2 = std::max({1.0, 2.0 * b(k + 1) / m(k + 1),
                          b(k) * b(k) / (m(k) * m(k + 1)) + 2.0 * b(k) * b(k) / (m(k + 1) * m(k + 1))});
    return std::max(c1, c2);
}

std::optional<double> capacity_duality_constant_sq(const BirthDeath& chain, SeriesBudget budget) {
    SeriesVerdict v = decide_series(chain.edge, chain.measure, SeriesShape::CapacityConstant, budget);
    if (v.converges()) return v.estimate;
    return std::nullopt;
}

CapacityRecord capacity(const BirthDeath& chain, const CapacityOptions& opt) {
    CapacityRecord rec;
    MeasureVerdict mv = measure_finite(chain.measure, opt.budget);
    if (mv == MeasureVerdict::Infinite) {
        rec.kind = CapacityRecord::Kind::Infinite;
        rec.dichotomy = CapacityRecord::Dichotomy::Infinite;
        rec.note = "test classes are empty: total measure infinite";
        return rec;
    }
    if (mv == MeasureVerdict::Inconclusive) {
        rec.note = "measure finiteness undecided";
        return rec;
    }
    if (opt.schedule.empty()) throw InvalidSpec("empty capacity schedule");

    rec.kind = CapacityRecord::Kind::Sequence;
    double prev = std::numeric_limits<double>::infinity();
    for (std::int64_t n : opt.schedule) {
        std::vector<double> f;
        double v = capacity_minimum(chain, n, {}, &f);
        if (v > prev + 1e-12 * std::max(1.0, prev))
            throw AssertionFailure("capacity minima increased along the schedule");
        rec.minima.emplace_back(n, v);
        rec.minimizer = std::move(f);
        prev = v;
    }

    // Trend fit on the last three minima. Two models: a positive limit with
    // geometrically shrinking corrections (Aitken), or pure power-law decay to
    // zero, recognized when the differences shrink at the same rate as the
    // values themselves.
    std::size_t s = rec.minima.size();
    if (s >= 3) {
        double m1 = rec.minima[s - 3].second, m2 = rec.minima[s - 2].second,
               m3 = rec.minima[s - 1].second;
        double d1 = m1 - m2, d2 = m2 - m3;
        double value_ratio = m2 > 0.0 ? m3 / m2 : 1.0;
        double diff_ratio = d1 > 0.0 ? d2 / d1 : 1.0;
        if (d1 > 0.0 && d2 > 0.0 && std::abs(diff_ratio - value_ratio) < 0.1 &&
            value_ratio < 0.9) {
            rec.extrapolated = 0.0; // self-similar decay: the fitted limit vanishes
        } else {
            double denom = m1 - 2.0 * m2 + m3;
            if (std::abs(denom) > 1e-14 * std::max(1.0, std::abs(m1)))
                rec.extrapolated = std::max(0.0, m3 - d2 * d2 / denom);
            else
                rec.extrapolated = m3;
        }
    } else {
        rec.extrapolated = rec.minima.back().second;
    }

    SeriesVerdict ham = decide_series(chain.edge, chain.measure, SeriesShape::Hamburger, opt.budget);
    auto c2 = capacity_duality_constant_sq(chain, opt.budget);
    if (c2 && *c2 > 0.0) {
        double ck = capacity_comparison_constant(chain, opt.k);
        rec.lower_bound = 1.0 / (ck * *c2);
        rec.k = opt.k;
    }

    if (*rec.extrapolated < opt.zero_tol && ham.diverges()) {
        rec.dichotomy = CapacityRecord::Dichotomy::Zero;
        rec.note = "extrapolated limit below zero tolerance, corroborated by the series test";
    } else if (rec.lower_bound && *rec.extrapolated > *rec.lower_bound / 2.0) {
        rec.dichotomy = CapacityRecord::Dichotomy::PositiveFinite;
        rec.note = "extrapolated limit clears half the duality lower bound";
    } else {
        rec.dichotomy = CapacityRecord::Dichotomy::Inconclusive;
        rec.note = "minima trend does not separate the dichotomy at this schedule";
    }
    return rec;
}

CapacityComparison capacity_comparison(const BirthDeath& chain, int k,
                                       const std::vector<std::int64_t>& schedule) {
    if (measure_finite(chain.measure) != MeasureVerdict::Finite)
        throw MeasureTailInfinite("comparison needs a finite measure");
    CapacityComparison out;
    out.schedule = schedule;
    out.C_of_k = capacity_comparison_constant(chain, k);
    for (std::int64_t n : schedule) {
        double cap = capacity_minimum(chain, n);
        double capk = capacity_minimum(chain, n, k);
        double slack = 1e-10 * std::max(1.0, capk);
        if (!(cap <= capk + slack) || !(capk <= out.C_of_k * cap + slack))
            throw AssertionFailure("comparison sandwich failed at n = " + std::to_string(n));
        out.cap_n.push_back(cap);
        out.capk_n.push_back(capk);
    }
    return out;
}

} // namespace chainspec
