#include "chainspec/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "chainspec/dd.hpp"

namespace chainspec {

std::string to_string(Boundedness b) {
    switch (b) {
        case Boundedness::Bounded: return "bounded";
        case Boundedness::Unbounded: return "unbounded";
        case Boundedness::Inconclusive: return "inconclusive";
    }
    return "?";
}

Decomposition decompose(const GraphSpec& g, const Window& w, const std::set<Vertex>& x1) {
    Decomposition d;
    d.x1 = x1;
    for (const Vertex& v : w.verts)
        if (!x1.count(v)) d.x2.insert(v);

    // boundaries against the full neighbor structure
    auto crosses = [&](const Vertex& v) {
        bool in1 = x1.count(v) > 0;
        for (const auto& [y, wt] : neighbors(g, v)) {
            (void)wt;
            if ((x1.count(y) > 0) != in1) return true;
        }
        return false;
    };
    for (const Vertex& v : w.verts)
        if (crosses(v)) d.x3.insert(v);

    for (std::size_t i = 0; i < w.size(); ++i) {
        for (const auto& [j, wt] : w.adj[i]) {
            if (j < static_cast<int>(i)) continue; // each undirected edge once
            const Vertex& a = w.verts[i];
            const Vertex& b = w.verts[static_cast<std::size_t>(j)];
            bool a1 = x1.count(a) > 0, b1 = x1.count(b) > 0;
            Decomposition::Part part = a1 && b1 ? Decomposition::Part::Inner1
                                       : (!a1 && !b1 ? Decomposition::Part::Inner2
                                                     : Decomposition::Part::Boundary);
            d.edges.emplace_back(a, b, wt, part);
        }
    }

    for (const Vertex& v : d.x3) {
        bool in1 = x1.count(v) > 0;
        KahanSum s;
        for (const auto& [y, wt] : neighbors(g, v))
            if ((x1.count(y) > 0) != in1) s.add(wt);
        d.deg_boundary[v] = s.value() / vertex_measure(g, v);
    }
    return d;
}

double verify_decomposition(const GraphSpec& g, const std::set<Vertex>& x1,
                            const VertexFunction& f, const std::vector<Vertex>& check) {
    double worst = 0.0;
    for (const Vertex& x : check) {
        bool x_in1 = x1.count(x) > 0;
        dd full{0.0}, inner1{0.0}, inner2{0.0}, boundary{0.0};
        double fx = f.at(x);
        // boundary status of x: any cross edge
        bool x_in3 = false;
        for (const auto& [y, wt] : neighbors(g, x)) {
            (void)wt;
            if ((x1.count(y) > 0) != x_in1) x_in3 = true;
        }
        for (const auto& [y, wt] : neighbors(g, x)) {
            bool y_in1 = x1.count(y) > 0;
            dd contrib = dd_mul(dd_sub(dd{fx}, dd{f.at(y)}), wt);
            full = dd_add(full, contrib);
            if (x_in1 && y_in1) inner1 = dd_add(inner1, contrib);
            if (!x_in1 && !y_in1) inner2 = dd_add(inner2, contrib);
            if (x_in3 && y_in1 != x_in1) boundary = dd_add(boundary, contrib);
        }
        dd sum = dd_add(dd_add(inner1, inner2), boundary);
        double res = std::abs(dd_sub(full, sum).value()) / vertex_measure(g, x);
        worst = std::max(worst, res);
    }
    return worst;
}

BoundVerdict ratio_bounded(const SequenceSpec& num, const SequenceSpec& den,
                           std::int64_t probe_depth) {
    BoundVerdict out;
    auto nt = tail_term(num);
    auto dt = tail_term(den);
    auto sample_sup = [&](std::int64_t upto) {
        double sup = 0.0;
        std::int64_t arg = 0;
        for (std::int64_t i = 0; i < upto; ++i) {
            double v = num.at(static_cast<std::size_t>(i)) / den.at(static_cast<std::size_t>(i));
            if (v > sup) {
                sup = v;
                arg = i;
            }
        }
        return std::pair{sup, arg};
    };
    if (nt && dt) {
        AsymptoticTerm ratio = mul(*nt, reciprocal(*dt));
        if (ratio.grows_unbounded()) {
            out.kind = Boundedness::Unbounded;
            auto [sup, arg] = sample_sup(std::min<std::int64_t>(probe_depth, 100000));
            (void)sup;
            out.witness_index = arg;
            return out;
        }
        out.kind = Boundedness::Bounded;
        auto [sup, arg] = sample_sup(1024);
        (void)arg;
        double lim = ratio.has_positive_limit() ? ratio.coef : 0.0;
        out.sup_estimate = std::max(sup, lim);
        return out;
    }
    // numeric trend over the table; no certificate beyond it
    std::int64_t upto = probe_depth;
    if (!num.has_tail()) upto = std::min<std::int64_t>(upto, static_cast<std::int64_t>(num.table_size()));
    if (!den.has_tail()) upto = std::min<std::int64_t>(upto, static_cast<std::int64_t>(den.table_size()));
    auto [sup, arg] = sample_sup(upto);
    out.kind = Boundedness::Inconclusive;
    out.sup_estimate = sup;
    out.witness_index = arg;
    return out;
}

BoundVerdict boundary_degree_bound(const StarLike& g, std::int64_t probe_depth) {
    g.hub.validate();
    BoundVerdict out;
    out.kind = Boundedness::Bounded;
    double sup = 0.0;
    // hub side: attachment weights over hub measure
    std::vector<double> hub_cross(g.hub.n, 0.0);
    for (const Ray& r : g.rays) hub_cross[r.attach_vertex] += r.attach_weight;
    if (g.family) {
        auto tot = tail_sum(g.family->attach_weight, 0);
        if (!tot) {
            out.kind = Boundedness::Unbounded;
            out.witness_index = 0;
            return out;
        }
        hub_cross[g.family->attach_vertex] += tot->value;
    }
    for (std::size_t i = 0; i < g.hub.n; ++i) sup = std::max(sup, hub_cross[i] / g.hub.measure[i]);
    // ray-head side: b(x0, 0^(i)) / m(0^(i))
    for (const Ray& r : g.rays) sup = std::max(sup, r.attach_weight / r.chain.measure.at(0));
    if (g.family) {
        SequenceSpec m0 = SequenceSpec::constant(g.family->chain.measure.at(0));
        BoundVerdict fam = ratio_bounded(g.family->attach_weight, m0, probe_depth);
        if (fam.kind != Boundedness::Bounded) return fam;
        sup = std::max(sup, fam.sup_estimate);
    }
    out.sup_estimate = sup;
    return out;
}

PendantBoundary boundary_degree_bound(const PendantChain& g, std::int64_t probe_depth) {
    PendantBoundary out;
    out.on_pendants = ratio_bounded(g.pendant_edge, g.pendant_measure, probe_depth);
    out.on_spine = ratio_bounded(g.pendant_edge, g.base.measure, probe_depth);
    return out;
}

PendantResult attach_pendants(const BirthDeath& base, const SequenceSpec& pendant_edge,
                              const SequenceSpec& pendant_measure, SeriesBudget budget) {
    pendant_edge.validate();
    pendant_measure.validate();
    PendantResult out;
    out.graph = PendantChain{base, pendant_edge, pendant_measure};
    out.certificate = decide_series(pendant_edge, pendant_measure, SeriesShape::Pendant, budget);
    out.esa_certified = out.certificate.diverges();
    return out;
}

FiniteGraph attach_pendants(const FiniteGraph& base, const std::vector<double>& pendant_edge,
                            const std::vector<double>& pendant_measure) {
    base.validate();
    if (pendant_edge.size() != base.n || pendant_measure.size() != base.n)
        throw InvalidSpec("one pendant per base vertex");
    FiniteGraph out;
    out.n = 2 * base.n;
    out.weights.assign(out.n, std::vector<double>(out.n, 0.0));
    out.measure.resize(out.n);
    for (std::size_t i = 0; i < base.n; ++i) {
        out.measure[i] = base.measure[i];
        out.measure[base.n + i] = pendant_measure[i];
        if (!(pendant_edge[i] > 0.0)) throw InvalidSpec("pendant weights must be positive");
        out.weights[i][base.n + i] = out.weights[base.n + i][i] = pendant_edge[i];
        for (std::size_t j = 0; j < base.n; ++j) out.weights[i][j] = base.weights[i][j];
    }
    out.validate();
    return out;
}

StabilityBreak stability_break_example(const BirthDeath& chain, const SequenceSpec& pendant_edge,
                                       const SequenceSpec& pendant_measure, SeriesBudget budget) {
    SeriesVerdict ham = decide_series(chain.edge, chain.measure, SeriesShape::Hamburger, budget);
    if (ham.diverges())
        throw BaseChainIsEsa("the counterexample needs a base chain failing the series test");
    StabilityBreak out;
    PendantResult p = attach_pendants(chain, pendant_edge, pendant_measure, budget);
    out.graph = p.graph;
    out.pendant_certificate = p.certificate;
    out.base_hamburger = ham;
    return out;
}

StarLike assemble_star(const FiniteGraph& hub, const std::vector<RayInput>& rays,
                       const std::optional<RayFamily>& family, SeriesBudget budget) {
    hub.validate();
    StarLike out;
    out.hub = hub;
    for (const RayInput& rin : rays) {
        if (rin.attachments.size() != 1)
            throw RayConditionViolated("a ray attaches by exactly one edge, got " +
                                       std::to_string(rin.attachments.size()));
        const RayAttachment& at = rin.attachments.front();
        if (at.chain_index != 0)
            throw RayConditionViolated("the connecting edge must meet the chain at its vertex 0");
        if (at.hub_vertex >= hub.n) throw InvalidSpec("attachment vertex outside the hub");
        if (!(at.weight > 0.0)) throw InvalidSpec("attachment weight must be positive");
        out.rays.push_back(Ray{rin.chain, at.hub_vertex, at.weight});
    }
    if (family) {
        if (family->attach_vertex >= hub.n) throw InvalidSpec("family attachment outside the hub");
        auto tot = tail_sum(family->attach_weight, 0);
        if (!tot) throw ConditionAFailure("family attachment weights must be summable");
        // sum_i b^2(x0, 0^(i))/m(0^(i)) must also be finite
        double m0 = family->chain.measure.at(0);
        auto att = family->attach_weight;
        auto term = [att, m0](std::int64_t i) {
            double b = att.at(static_cast<std::size_t>(i));
            return b * b / m0;
        };
        std::optional<AsymptoticTerm> dom;
        if (auto t = tail_term(att)) dom = mul(square(*t), AsymptoticTerm{1.0 / m0, 0.0, 0, 1.0});
        SeriesVerdict v = decide_term_stream(term, dom, budget);
        if (!v.converges())
            throw ConditionAFailure("hub series of squared attachment weights must converge");
        out.family = family;
    }
    return out;
}

} // namespace chainspec
