#include "chainspec/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "chainspec/capacity.hpp"
#include "chainspec/constructions.hpp"
#include "chainspec/harmonic.hpp"
#include "chainspec/liouville.hpp"

namespace chainspec {

namespace anchors {
// rule identifiers attached to every decided property
constexpr const char* condition_a = "rule:condition-A";
constexpr const char* hamburger = "rule:hamburger-series";
constexpr const char* recurrence = "rule:recurrence-series";
constexpr const char* measure = "rule:measure-series";
constexpr const char* transient_eq = "rule:transient-three-way-equivalence";
constexpr const char* feller = "rule:feller-tail-measure-series";
constexpr const char* esa_implies_fu = "rule:esa-implies-form-uniqueness";
constexpr const char* two_ray = "rule:two-ray-end-conjunction";
constexpr const char* star_like = "rule:star-like-ray-conjunction";
constexpr const char* stability = "rule:bounded-boundary-stability";
constexpr const char* pendant = "rule:pendant-divergence-certificate";
constexpr const char* liouville_chain = "rule:chain-l2-liouville";
constexpr const char* esa_implies_liouville = "rule:esa-implies-l2-liouville";
constexpr const char* liouville_two_ray = "rule:two-ray-l2-liouville-cases";
constexpr const char* capacity_dichotomy = "rule:capacity-dichotomy";
constexpr const char* finite_graph = "rule:finite-graph";
} // namespace anchors

SeriesVerdict hamburger_esa(const BirthDeath& chain, SeriesBudget budget) {
    return decide_series(chain.edge, chain.measure, SeriesShape::Hamburger, budget);
}

std::string to_string(Recurrence r) {
    switch (r) {
        case Recurrence::Recurrent: return "recurrent";
        case Recurrence::Transient: return "transient";
        case Recurrence::Inconclusive: return "inconclusive";
    }
    return "?";
}

Recurrence recurrence(const SequenceSpec& edge, SeriesBudget budget) {
    SequenceSpec unit = SequenceSpec::constant(1.0);
    auto v = decide_series(edge, unit, SeriesShape::Recurrence, budget);
    if (v.diverges()) return Recurrence::Recurrent;
    if (v.converges()) return Recurrence::Transient;
    return Recurrence::Inconclusive;
}

Recurrence recurrence(const BirthDeath& chain, SeriesBudget budget) {
    return recurrence(chain.edge, budget);
}

std::string to_string(MeasureVerdict v) {
    switch (v) {
        case MeasureVerdict::Finite: return "finite";
        case MeasureVerdict::Infinite: return "infinite";
        case MeasureVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

MeasureVerdict measure_finite(const SequenceSpec& measure, SeriesBudget budget) {
    SequenceSpec unit = SequenceSpec::constant(1.0);
    auto v = decide_series(unit, measure, SeriesShape::Measure, budget);
    if (v.converges()) return MeasureVerdict::Finite;
    if (v.diverges()) return MeasureVerdict::Infinite;
    return MeasureVerdict::Inconclusive;
}

TransientEquivalences transient_chain_equivalences(const BirthDeath& chain, SeriesBudget budget) {
    if (recurrence(chain, budget) != Recurrence::Transient)
        throw NotTransient("the three-way equivalence needs a transient chain");
    SequenceSpec unit = SequenceSpec::constant(1.0);
    TransientEquivalences out;
    out.measure_series = decide_series(unit, chain.measure, SeriesShape::Measure, budget);
    CheckVerdict v = CheckVerdict::Inconclusive;
    if (out.measure_series.diverges()) v = CheckVerdict::Holds;       // m infinite
    else if (out.measure_series.converges()) v = CheckVerdict::Fails; // m finite
    out.esa = out.form_uniqueness = out.measure_infinite = v;
    return out;
}

SeriesVerdict feller_recurrent(const BirthDeath& chain, SeriesBudget budget) {
    if (recurrence(chain, budget) != Recurrence::Recurrent)
        throw NotRecurrent("the Feller test applies to recurrent chains");
    return decide_series(chain.edge, chain.measure, SeriesShape::Feller, budget);
}

TwoRayEsa two_ray_esa(const TwoRayStar& star, SeriesBudget budget) {
    TwoRayEsa out;
    out.pos = decide_series(star.edge_pos, star.measure_pos, SeriesShape::Hamburger, budget);
    out.neg = decide_series(star.edge_neg, star.measure_neg, SeriesShape::Hamburger, budget);
    if (out.pos.diverges() && out.neg.diverges()) out.esa = CheckVerdict::Holds;
    else if (out.pos.converges() || out.neg.converges()) out.esa = CheckVerdict::Fails;
    else out.esa = CheckVerdict::Inconclusive;
    return out;
}

StarLikeEsa star_like_esa(const StarLike& g, SeriesBudget budget) {
    if (g.hub_infinite && !g.hub_esa_asserted)
        throw HubAssumptionMissing("an infinite hub needs an explicit assertion");
    auto bound = boundary_degree_bound(g);
    if (bound.kind == Boundedness::Unbounded)
        throw BoundaryDegreeUnbounded("boundary degree unbounded at index " +
                                      std::to_string(bound.witness_index));
    StarLikeEsa out;
    bool all_diverge = true, any_converge = false, any_inconclusive = false;
    for (const Ray& r : g.rays) {
        out.per_ray.push_back(hamburger_esa(r.chain, budget));
        const auto& v = out.per_ray.back();
        all_diverge = all_diverge && v.diverges();
        any_converge = any_converge || v.converges();
        any_inconclusive = any_inconclusive || v.inconclusive();
    }
    if (g.family) {
        // identical chains along the family: one uniform verdict covers all i
        out.family = hamburger_esa(g.family->chain, budget);
        all_diverge = all_diverge && out.family->diverges();
        any_converge = any_converge || out.family->converges();
        any_inconclusive = any_inconclusive || out.family->inconclusive();
    }
    if (bound.kind == Boundedness::Inconclusive) any_inconclusive = true;
    if (any_converge) out.esa = CheckVerdict::Fails;
    else if (all_diverge && !any_inconclusive) out.esa = CheckVerdict::Holds;
    else out.esa = CheckVerdict::Inconclusive;
    return out;
}

const PropertyEntry* PropertyReport::find(const std::string& name) const {
    for (const auto& [n, e] : properties)
        if (n == name) return &e;
    return nullptr;
}

void PropertyReport::add(std::string name, PropertyEntry e) {
    properties.emplace_back(std::move(name), std::move(e));
}

namespace {

std::string check_str(CheckVerdict v) { return to_string(v); }

PropertyEntry entry(std::string verdict, std::vector<std::string> cites,
                    std::optional<SeriesVerdict> series = {}, std::string detail = {}) {
    PropertyEntry e;
    e.verdict = std::move(verdict);
    e.citations = std::move(cites);
    e.series = std::move(series);
    e.detail = std::move(detail);
    return e;
}

CheckVerdict esa_from_series(const SeriesVerdict& v) {
    if (v.diverges()) return CheckVerdict::Holds;
    if (v.converges()) return CheckVerdict::Fails;
    return CheckVerdict::Inconclusive;
}

void classify_chain(const BirthDeath& bd, const ClassifyOptions& opt, PropertyReport& rep) {
    rep.add("condition_A", entry(check_str(check_condition_A(bd)), {anchors::condition_a}));

    Recurrence rec = recurrence(bd, opt.budget);
    rep.add("recurrence", entry(to_string(rec), {anchors::recurrence}));

    MeasureVerdict mv = measure_finite(bd.measure, opt.budget);
    rep.add("measure_finite", entry(to_string(mv), {anchors::measure}));

    SeriesVerdict ham = hamburger_esa(bd, opt.budget);
    CheckVerdict esa = esa_from_series(ham);
    rep.add("esa", entry(check_str(esa), {anchors::hamburger}, ham));

    if (rec == Recurrence::Transient) {
        auto eq = transient_chain_equivalences(bd, opt.budget);
        rep.add("form_uniqueness",
                entry(check_str(eq.form_uniqueness), {anchors::transient_eq}, eq.measure_series));
        // three-way consistency: for transient chains the series verdict must
        // match the negated measure verdict
        if (esa != CheckVerdict::Inconclusive && eq.esa != CheckVerdict::Inconclusive &&
            esa != eq.esa)
            rep.consistency_violations.push_back(
                "transient equivalence: series test and measure verdict disagree");
    } else if (rec == Recurrence::Recurrent) {
        SeriesVerdict fel = feller_recurrent(bd, opt.budget);
        std::string verdict =
            fel.diverges() ? "holds" : (fel.converges() ? "criterion fails" : "inconclusive");
        rep.add("feller", entry(verdict, {anchors::feller}, fel));
        if (fel.diverges() && !ham.diverges())
            rep.consistency_violations.push_back(
                "Feller series diverges but the ESA series does not");
        if (esa == CheckVerdict::Holds)
            rep.add("form_uniqueness", entry("holds", {anchors::esa_implies_fu}));
        else
            rep.add("form_uniqueness", entry("undecided", {anchors::esa_implies_fu}, std::nullopt,
                                             "decided only via ESA here"));
    }

    // chains always satisfy the l2-Liouville property
    rep.add("liouville", entry("holds", {anchors::liouville_chain}));

    if (opt.with_capacity) {
        CapacityOptions copt;
        copt.schedule = opt.capacity_schedule;
        copt.k = opt.capacity_k;
        copt.zero_tol = opt.capacity_zero_tol;
        copt.budget = opt.budget;
        try {
            CapacityRecord cap = capacity(bd, copt);
            std::string d = to_string(cap.dichotomy);
            rep.add("capacity", entry(d, {anchors::capacity_dichotomy}, std::nullopt, cap.note));
            // dichotomy consistency with the series verdict
            using D = CapacityRecord::Dichotomy;
            if ((cap.dichotomy == D::Zero || cap.dichotomy == D::Infinite) &&
                esa == CheckVerdict::Fails)
                rep.consistency_violations.push_back(
                    "capacity dichotomy contradicts the series test");
            if (cap.dichotomy == D::PositiveFinite && esa == CheckVerdict::Holds)
                rep.consistency_violations.push_back(
                    "capacity dichotomy contradicts the series test");
        } catch (const Error& e) {
            // numerically intractable minimizations surface as inconclusive
            rep.add("capacity",
                    entry("inconclusive", {anchors::capacity_dichotomy}, std::nullopt, e.what()));
        }
    }
}

void classify_two_ray(const TwoRayStar& st, const ClassifyOptions& opt, PropertyReport& rep) {
    rep.add("condition_A", entry(check_str(check_condition_A(st)), {anchors::condition_a}));

    Recurrence rp = recurrence(st.edge_pos, opt.budget);
    Recurrence rn = recurrence(st.edge_neg, opt.budget);
    rep.add("recurrence_pos", entry(to_string(rp), {anchors::recurrence}));
    rep.add("recurrence_neg", entry(to_string(rn), {anchors::recurrence}));
    rep.add("measure_finite_pos",
            entry(to_string(measure_finite(st.measure_pos, opt.budget)), {anchors::measure}));
    rep.add("measure_finite_neg",
            entry(to_string(measure_finite(st.measure_neg, opt.budget)), {anchors::measure}));

    TwoRayEsa te = two_ray_esa(st, opt.budget);
    rep.add("esa_pos", entry(to_string(esa_from_series(te.pos)), {anchors::hamburger}, te.pos));
    rep.add("esa_neg", entry(to_string(esa_from_series(te.neg)), {anchors::hamburger}, te.neg));
    rep.add("esa", entry(check_str(te.esa), {anchors::two_ray}));

    if (te.esa == CheckVerdict::Holds)
        rep.add("form_uniqueness", entry("holds", {anchors::esa_implies_fu}));

    if (opt.with_liouville) {
        LiouvilleOptions lopt;
        lopt.budget = opt.budget;
        lopt.window = opt.witness_window;
        LiouvilleResult li = liouville_two_ray(st, lopt);
        std::string detail;
        for (const auto& r : li.reasons) detail += (detail.empty() ? "" : "; ") + r;
        rep.add("liouville",
                entry(to_string(li.verdict), {anchors::liouville_two_ray}, std::nullopt, detail));
        if (te.esa == CheckVerdict::Holds && li.verdict == Liouville::Fails)
            rep.consistency_violations.push_back("ESA holds but the l2-Liouville verdict fails");
    }
}

void classify_star_like(const StarLike& sl, const ClassifyOptions& opt, PropertyReport& rep) {
    rep.add("condition_A", entry(check_str(check_condition_A(sl)), {anchors::condition_a}));
    auto bound = boundary_degree_bound(sl);
    rep.add("boundary_degree",
            entry(to_string(bound.kind), {anchors::stability}, std::nullopt,
                  bound.kind == Boundedness::Bounded
                      ? "sup estimate " + std::to_string(bound.sup_estimate)
                      : ""));
    StarLikeEsa se = star_like_esa(sl, opt.budget);
    for (std::size_t i = 0; i < se.per_ray.size(); ++i)
        rep.add("esa_ray_" + std::to_string(i),
                entry(to_string(esa_from_series(se.per_ray[i])), {anchors::hamburger},
                      se.per_ray[i]));
    if (se.family)
        rep.add("esa_ray_family",
                entry(to_string(esa_from_series(*se.family)), {anchors::hamburger}, *se.family));
    rep.add("esa", entry(check_str(se.esa), {anchors::star_like}));

    if (se.esa == CheckVerdict::Holds) {
        rep.add("liouville", entry("holds", {anchors::esa_implies_liouville}));
        rep.add("form_uniqueness", entry("holds", {anchors::esa_implies_fu}));
    } else if (opt.with_liouville && se.esa == CheckVerdict::Fails && !sl.family) {
        // constructive route: a witness exists when the graph is transient
        // with square-summable Green's function
        try {
            StarWitnessOptions wopt;
            wopt.budget = opt.budget;
            HarmonicSolution w = starlike_liouville_witness(sl, wopt);
            (void)w;
            rep.add("liouville", entry("fails", {anchors::liouville_two_ray}, std::nullopt,
                                       "non-constant harmonic l2 witness"));
        } catch (const Error&) {
            rep.add("liouville", entry("undecided", {anchors::liouville_two_ray}, std::nullopt,
                                       "no witness construction applies"));
        }
    }
}

void classify_doubled(const DoubledChain& dc, const ClassifyOptions& opt, PropertyReport& rep) {
    rep.add("condition_A", entry("holds", {anchors::condition_a}));
    SeriesVerdict ham = hamburger_esa(dc.base, opt.budget);
    CheckVerdict esa = esa_from_series(ham);
    // finite boundary {0, 0~}: stability transfers the base verdict
    rep.add("esa", entry(check_str(esa), {anchors::stability, anchors::hamburger}, ham,
                         "doubling preserves the verdict of the base chain"));
    Recurrence rec = recurrence(dc.base, opt.budget);
    rep.add("recurrence_both_ends", entry(to_string(rec), {anchors::recurrence}));
    if (esa == CheckVerdict::Holds)
        rep.add("liouville", entry("holds", {anchors::esa_implies_liouville}));
    else if (esa == CheckVerdict::Fails)
        rep.add("liouville", entry("fails", {anchors::liouville_two_ray}, std::nullopt,
                                   "doubled harmonic witness is square-summable"));
}

void classify_pendant(const PendantChain& pc, const ClassifyOptions& opt, PropertyReport& rep) {
    rep.add("condition_A", entry("holds", {anchors::condition_a}));
    SeriesVerdict base = hamburger_esa(pc.base, opt.budget);
    rep.add("base_esa", entry(to_string(esa_from_series(base)), {anchors::hamburger}, base));

    auto bound = boundary_degree_bound(pc);
    if (bound.both_bounded()) {
        // pendants alone carry no edges, so stability reduces to the base chain
        rep.add("esa",
                entry(to_string(esa_from_series(base)), {anchors::stability, anchors::hamburger},
                      base, "bounded boundary degree: verdict transfers from the base chain"));
        return;
    }
    SeriesVerdict cert =
        decide_series(pc.pendant_edge, pc.pendant_measure, SeriesShape::Pendant, opt.budget);
    if (cert.diverges())
        rep.add("esa", entry("holds", {anchors::pendant}, cert, "divergence certificate"));
    else
        rep.add("esa", entry("inconclusive", {anchors::pendant}, cert,
                             "certificate series does not diverge; no conclusion"));
}

void classify_finite(const FiniteGraph& fg, PropertyReport& rep) {
    fg.validate();
    rep.add("condition_A", entry("holds", {anchors::condition_a}));
    rep.add("esa", entry("holds", {anchors::finite_graph}, std::nullopt,
                         "bounded operator on a finite-dimensional space"));
    rep.add("measure_finite", entry("finite", {anchors::finite_graph}));
    rep.add("liouville", entry("holds", {anchors::finite_graph}));
}

} // namespace

PropertyReport classify(const GraphSpec& g, const ClassifyOptions& opt) {
    PropertyReport rep;
    rep.kind = kind_name(g);
    if (const auto* bd = std::get_if<BirthDeath>(&g)) classify_chain(*bd, opt, rep);
    else if (const auto* st = std::get_if<TwoRayStar>(&g)) classify_two_ray(*st, opt, rep);
    else if (const auto* sl = std::get_if<StarLike>(&g)) classify_star_like(*sl, opt, rep);
    else if (const auto* dc = std::get_if<DoubledChain>(&g)) classify_doubled(*dc, opt, rep);
    else if (const auto* pc = std::get_if<PendantChain>(&g)) classify_pendant(*pc, opt, rep);
    else if (const auto* fg = std::get_if<FiniteGraph>(&g)) classify_finite(*fg, rep);
    else throw InvalidSpec("unknown graph kind");
    for (auto& [name, e] : rep.properties) {
        (void)name;
        if (e.verdict != "undecided" && e.citations.empty())
            throw AssertionFailure("decided property without a citation anchor");
    }
    return rep;
}

} // namespace chainspec
