#include "chainspec/liouville.hpp"

#include <algorithm>
#include <cmath>

namespace chainspec {

std::string to_string(Liouville v) {
    switch (v) {
        case Liouville::Holds: return "holds";
        case Liouville::Fails: return "fails";
        case Liouville::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

enum class Tri { Yes, No, Unknown };

Tri tri_and(Tri a, Tri b) {
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Yes && b == Tri::Yes) return Tri::Yes;
    return Tri::Unknown;
}

Tri from_measure(MeasureVerdict m) {
    if (m == MeasureVerdict::Finite) return Tri::Yes;
    if (m == MeasureVerdict::Infinite) return Tri::No;
    return Tri::Unknown;
}

Tri from_series_converges(const SeriesVerdict& v) {
    if (v.converges()) return Tri::Yes;
    if (v.diverges()) return Tri::No;
    return Tri::Unknown;
}

// witness verification: harmonicity residual (relative to the row scale, so
// the check stays meaningful against steep weights) + both l2 verdicts
bool verify_witness(HarmonicSolution& w, std::int64_t window, double& residual) {
    std::vector<Vertex> verts;
    for (std::int64_t r = -window; r <= window; ++r) verts.push_back(Vertex{0, r});
    residual = max_harmonic_residual_relative(w, verts);
    return residual <= 1e-10 && w.l2_pos().converges() && w.l2_neg().converges();
}

} // namespace

LiouvilleResult liouville_two_ray(const TwoRayStar& star, const LiouvilleOptions& opt) {
    LiouvilleResult out;
    Recurrence rp = recurrence(star.edge_pos, opt.budget);
    Recurrence rn = recurrence(star.edge_neg, opt.budget);
    if (rp == Recurrence::Inconclusive || rn == Recurrence::Inconclusive) {
        out.reasons.push_back("end transience undecided");
        return out;
    }
    bool tp = rp == Recurrence::Transient;
    bool tn = rn == Recurrence::Transient;

    auto attach_witness = [&](HarmonicSolution w, std::string reason) {
        double residual = 0.0;
        if (!verify_witness(w, opt.window, residual)) {
            out.verdict = Liouville::Inconclusive;
            out.reasons.push_back("witness verification incomplete: " + reason);
            return;
        }
        out.verdict = Liouville::Fails;
        out.witness = std::move(w);
        out.witness_residual = residual;
        out.reasons.push_back(std::move(reason));
    };

    if (!tp && !tn) {
        // recurrent at both ends: fails iff both end series tests fail
        SeriesVerdict hp = decide_series(star.edge_pos, star.measure_pos, SeriesShape::Hamburger,
                                         opt.budget);
        SeriesVerdict hn = decide_series(star.edge_neg, star.measure_neg, SeriesShape::Hamburger,
                                         opt.budget);
        if (hp.inconclusive() || hn.inconclusive()) {
            out.reasons.push_back("end series tests undecided");
            return out;
        }
        if (hp.converges() && hn.converges()) {
            attach_witness(star_harmonic(star, 0.0, 1.0, opt.window, opt.budget),
                           "both end series tests fail; unbounded two-sided witness");
        } else {
            out.verdict = Liouville::Holds;
            out.reasons.push_back("an end series test passes on a recurrent star");
        }
        return out;
    }

    MeasureVerdict mp = measure_finite(star.measure_pos, opt.budget);
    MeasureVerdict mn = measure_finite(star.measure_neg, opt.budget);

    if (tp && tn) {
        Tri gp = from_series_converges(green_l2_end(star, StarEnd::Pos, opt.budget));
        Tri gn = from_series_converges(green_l2_end(star, StarEnd::Neg, opt.budget));
        Tri c1 = tri_and(gp, from_measure(mn));
        Tri c2 = tri_and(gn, from_measure(mp));
        Tri c3 = tri_and(from_measure(mp), from_measure(mn)); // m(Z) finite
        if (c1 == Tri::Yes) out.reasons.push_back("green function square-summable at +inf and m(-inf) finite");
        if (c2 == Tri::Yes) out.reasons.push_back("green function square-summable at -inf and m(+inf) finite");
        if (c3 == Tri::Yes) out.reasons.push_back("total measure finite");
        if (c1 == Tri::Yes) {
            // witness vanishing at +inf: v(0) = T_0, v(1) = T_1, flux -1
            double T0 = tail_sum_reciprocal(star.edge_pos, 0)->value;
            double T1 = tail_sum_reciprocal(star.edge_pos, 1)->value;
            attach_witness(star_harmonic(star, T0, T1, opt.window, opt.budget), out.reasons.front());
        } else if (c2 == Tri::Yes) {
            // witness vanishing at -inf: v(-1) = Tbar_1, v(0) = Tbar_0, flux +1
            double T0 = tail_sum_reciprocal(star.edge_neg, 0)->value;
            attach_witness(star_harmonic(star, T0, T0 + 1.0 / star.edge_pos.at(0), opt.window,
                                         opt.budget),
                           out.reasons.front());
        } else if (c3 == Tri::Yes) {
            // bounded nonzero limits at both ends
            attach_witness(star_harmonic(star, 0.0, 1.0 / star.edge_pos.at(0), opt.window,
                                         opt.budget),
                           out.reasons.front());
        } else if (c1 == Tri::No && c2 == Tri::No && c3 == Tri::No) {
            out.verdict = Liouville::Holds;
            out.reasons.push_back("no failure condition holds at either end");
        } else {
            out.reasons.push_back("failure conditions undecided");
        }
        return out;
    }

    // mixed cases: exactly one transient end
    const bool pos_transient = tp;
    const SequenceSpec& edge_rec = pos_transient ? star.edge_neg : star.edge_pos;
    const SequenceSpec& meas_rec = pos_transient ? star.measure_neg : star.measure_pos;
    SeriesVerdict ham_rec = decide_series(edge_rec, meas_rec, SeriesShape::Hamburger, opt.budget);
    if (ham_rec.inconclusive()) {
        out.reasons.push_back("recurrent-side series test undecided");
        return out;
    }
    if (ham_rec.diverges()) {
        out.verdict = Liouville::Holds;
        out.reasons.push_back("recurrent-side chain passes the series test");
        return out;
    }
    Tri g_l2 = from_series_converges(
        green_l2_end(star, pos_transient ? StarEnd::Pos : StarEnd::Neg, opt.budget));
    Tri m_fin = from_measure(pos_transient ? mp : mn);
    if (g_l2 == Tri::Yes) {
        out.reasons.push_back("recurrent-side test fails and green function square-summable at the transient end");
        if (pos_transient) {
            double T0 = tail_sum_reciprocal(star.edge_pos, 0)->value;
            double T1 = tail_sum_reciprocal(star.edge_pos, 1)->value;
            attach_witness(star_harmonic(star, T0, T1, opt.window, opt.budget), out.reasons.back());
        } else {
            double T0 = tail_sum_reciprocal(star.edge_neg, 0)->value;
            attach_witness(star_harmonic(star, T0, T0 + 1.0 / star.edge_pos.at(0), opt.window,
                                         opt.budget),
                           out.reasons.back());
        }
    } else if (m_fin == Tri::Yes) {
        out.reasons.push_back("recurrent-side test fails and measure finite at the transient end");
        attach_witness(star_harmonic(star, 0.0, 1.0 / star.edge_pos.at(0), opt.window, opt.budget),
                       out.reasons.back());
    } else if (g_l2 == Tri::No && m_fin == Tri::No) {
        out.verdict = Liouville::Holds;
        out.reasons.push_back("neither square-summable green function nor finite measure at the transient end");
    } else {
        out.reasons.push_back("transient-end conditions undecided");
    }
    return out;
}

CheckVerdict starlike_green_l2(const StarLike& g, SeriesBudget budget) {
    if (g.family) return CheckVerdict::Inconclusive;
    bool any_unknown = false;
    for (const Ray& r : g.rays) {
        Recurrence rec = recurrence(r.chain, budget);
        if (rec == Recurrence::Transient) {
            SeriesVerdict v =
                decide_series(r.chain.edge, r.chain.measure, SeriesShape::GreenL2, budget);
            if (v.diverges()) return CheckVerdict::Fails;
            if (!v.converges()) any_unknown = true;
        } else if (rec == Recurrence::Recurrent) {
            // the exhaustion limit is asymptotically constant on a recurrent ray
            MeasureVerdict m = measure_finite(r.chain.measure, budget);
            if (m == MeasureVerdict::Infinite) return CheckVerdict::Fails;
            if (m != MeasureVerdict::Finite) any_unknown = true;
        } else {
            any_unknown = true;
        }
    }
    return any_unknown ? CheckVerdict::Inconclusive : CheckVerdict::Holds;
}

HarmonicSolution starlike_liouville_witness(const StarLike& g, const StarWitnessOptions& opt) {
    if (g.family) throw UnsupportedOperation("witness construction needs explicit rays");
    g.hub.validate();

    // the continued ray: first ray whose chain fails the series test
    int ray_index = -1;
    for (std::size_t i = 0; i < g.rays.size(); ++i) {
        if (hamburger_esa(g.rays[i].chain, opt.budget).converges()) {
            ray_index = static_cast<int>(i);
            break;
        }
    }
    if (ray_index < 0) throw NoNonEsaRay("every ray passes the series test");

    bool transient = false;
    for (const Ray& r : g.rays)
        if (recurrence(r.chain, opt.budget) == Recurrence::Transient) transient = true;
    if (!transient) throw NotTransient("witness construction needs a transient graph");

    if (starlike_green_l2(g, opt.budget) != CheckVerdict::Holds)
        throw GreenNotL2("green function square-summability not established");

    Vertex x0{0, static_cast<std::int64_t>(g.rays[static_cast<std::size_t>(ray_index)].attach_vertex)};
    GreenFunction green = green_exhaustion(g, x0, opt.radii);

    // harmonic at the pole: shift the ray head so the flux balances
    double b_att = g.rays[static_cast<std::size_t>(ray_index)].attach_weight;
    Vertex head{ray_index + 1, 0};
    dd flux_rest{0.0};
    dd gx0 = green.at_dd(x0);
    for (const auto& [y, w] : neighbors(GraphSpec{g}, x0)) {
        if (y == head) continue;
        if (!(gx0.value() > green.at(y)))
            throw AssertionFailure("pole value not strictly maximal at " + y.str());
        flux_rest = dd_add(flux_rest, dd_mul(dd_sub(gx0, green.at_dd(y)), w));
    }
    double C = flux_rest.value();
    if (!(C > 0.0)) throw AssertionFailure("degenerate witness flux");
    dd head_value = dd_add(gx0, dd_div(flux_rest, b_att));

    // values off the continued ray come from the deepest exhaustion level
    std::map<Vertex, dd> fixed;
    for (const auto& [v, val] : green.values_dd)
        if (v.comp != ray_index + 1) fixed[v] = val;

    // l2 of the continuation: v(r) = head + C sum_{k<r} 1/b
    const BirthDeath& ray = g.rays[static_cast<std::size_t>(ray_index)].chain;
    double a = head_value.value() + C / ray.edge.at(0);
    SeriesVerdict l2_ray = harmonic_l2_tail(ray.edge, ray.measure, 1, a, C, opt.budget);

    SeriesVerdict l2_rest;
    l2_rest.outcome = Outcome::Converges;
    KahanSum rest;
    for (const auto& [v, val] : fixed)
        rest.add(val.value() * val.value() * vertex_measure(GraphSpec{g}, v));
    l2_rest.estimate = rest.value();
    l2_rest.evidence.note = "green part: square-summability established per ray";

    return StarWitnessBuilder::build(g, ray_index + 1, head_value, C, std::move(fixed), l2_ray,
                                     l2_rest);
}

} // namespace chainspec
