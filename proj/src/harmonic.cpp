#include "chainspec/harmonic.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace chainspec {

// Lazy per-side prefix sums of 1/b in double-double, plus fixed values for
// witness domains. Fill is idempotent and guarded by a mutex; values are
// immutable once computed.
struct HarmonicSolution::Cache {
    mutable std::mutex mu;
    // u[r] = sum_{k=1}^r 1/edge(k) (u[0] = 0)
    mutable std::vector<dd> u_pos{dd{0.0}};
    mutable std::vector<dd> u_neg{dd{0.0}};
    // p[r] = sum_{k=0}^{r-1} 1/edge(k) (p[0] = 0), for ray continuations
    mutable std::vector<dd> p_ray{dd{0.0}};
    std::map<Vertex, dd> fixed; // witness values off the continued ray
    int ray_comp = 0;           // component of the continued ray (witness domain)
    dd ray_head{0.0};           // v at the ray's vertex 0

    // returns by value: the store may reallocate under a concurrent fill
    dd prefix(std::vector<dd>& store, const SequenceSpec& edge, std::int64_t r, int from) const {
        std::lock_guard<std::mutex> lock(mu);
        while (static_cast<std::int64_t>(store.size()) <= r) {
            std::int64_t k = static_cast<std::int64_t>(store.size()) - 1 + from;
            store.push_back(dd_add(store.back(), dd_div(dd{1.0}, edge.at(static_cast<std::size_t>(k)))));
        }
        return store[static_cast<std::size_t>(r)];
    }
};

double HarmonicSolution::value(const Vertex& v) const { return value_dd(v).value(); }

dd HarmonicSolution::value_dd(const Vertex& v) const {
    switch (domain_) {
        case Domain::Chain: {
            const auto& bd = std::get<BirthDeath>(*graph_);
            if (v.comp != 0 || v.idx < 0) throw MissingValue("vertex outside chain: " + v.str());
            if (v.idx == 0) return dd{v0_};
            dd u = cache_->prefix(cache_->u_pos, bd.edge, v.idx - 1, 1);
            return dd_add(dd{v1_}, dd_mul(u, C_));
        }
        case Domain::TwoRayStar: {
            const auto& st = std::get<TwoRayStar>(*graph_);
            if (v.idx == 0) return dd{v0_};
            if (v.idx >= 1) {
                dd u = cache_->prefix(cache_->u_pos, st.edge_pos, v.idx - 1, 1);
                return dd_add(dd{v1_}, dd_mul(u, C_));
            }
            // v(-1) = v(0) - C/b(0,-1); v(-r-1) = v(-1) - C * sum_{k=1}^r 1/b(-k,-k-1)
            dd vm1 = dd_sub(dd{v0_}, dd_div(dd{C_}, st.edge_neg.at(0)));
            if (v.idx == -1) return vm1;
            dd u = cache_->prefix(cache_->u_neg, st.edge_neg, -v.idx - 1, 1);
            return dd_sub(vm1, dd_mul(u, C_));
        }
        case Domain::DoubledChain: {
            const auto& dc = std::get<DoubledChain>(*graph_);
            const SequenceSpec& b = dc.base.edge;
            if (v.comp == 0) {
                if (v.idx == 0) return dd{0.0};
                dd u = cache_->prefix(cache_->u_pos, b, v.idx - 1, 1);
                return dd_add(dd{v1_}, dd_mul(u, C_));
            }
            dd v0t = dd_div(dd{-C_}, dc.bridge_weight); // v(0~) = -C/bridge
            if (v.comp == -2) return v0t;
            if (v.comp == -1 && v.idx >= 1) {
                // v(-r) = v(0~) - C sum_{k=0}^{r-1} 1/b(k,k+1)
                dd p = cache_->prefix(cache_->p_ray, b, v.idx, 0);
                return dd_sub(v0t, dd_mul(p, C_));
            }
            throw MissingValue("vertex outside doubled chain: " + v.str());
        }
        case Domain::StarLikeWitness: {
            if (v.comp == cache_->ray_comp && v.idx >= 0) {
                const auto& sl = std::get<StarLike>(*graph_);
                const SequenceSpec& b = sl.rays[static_cast<std::size_t>(cache_->ray_comp - 1)].chain.edge;
                if (v.idx == 0) return cache_->ray_head;
                dd p = cache_->prefix(cache_->p_ray, b, v.idx, 0);
                return dd_add(cache_->ray_head, dd_mul(p, C_));
            }
            auto it = cache_->fixed.find(v);
            if (it == cache_->fixed.end())
                throw MissingValue("witness value not computed at " + v.str());
            return it->second;
        }
    }
    throw InvalidSpec("unreachable domain");
}

SeriesVerdict harmonic_l2_tail(const SequenceSpec& edge, const SequenceSpec& measure,
                               int measure_offset, double a, double C, SeriesBudget budget) {
    // terms (a + C*U_r)^2 m(r+offset), r >= 0, U_r = sum_{k=1}^r 1/edge(k)
    struct Stream {
        SequenceSpec edge, measure;
        int offset;
        double a, C;
        KahanSum u;
        std::int64_t next = 1;
    };
    auto st = std::make_shared<Stream>(Stream{edge, measure, measure_offset, a, C, {}, 1});
    auto term = [st](std::int64_t r) {
        while (st->next <= r) {
            st->u.add(1.0 / st->edge.at(static_cast<std::size_t>(st->next)));
            ++st->next;
        }
        double val = st->a + st->C * (r >= 1 ? st->u.value() : 0.0);
        return val * val * st->measure.at(static_cast<std::size_t>(r + st->offset));
    };

    std::optional<AsymptoticTerm> dom;
    auto e = tail_term(edge);
    auto m = tail_term(measure);
    if (e && m) {
        AsymptoticTerm mshift = shift(*m, measure_offset);
        if (C == 0.0) {
            dom = mul(AsymptoticTerm{a * a, 0.0, 0, 1.0}, mshift);
        } else {
            AsymptoticTerm recip = reciprocal(*e);
            if (series_outcome(recip) == TermSum::Diverges) {
                // recurrent end: |a + C U_r| ~ |C| U_r
                AsymptoticTerm U = prefix_sum(recip);
                dom = mul(mul(AsymptoticTerm{C * C, 0.0, 0, 1.0}, square(U)), mshift);
            } else {
                auto uinf = tail_sum_reciprocal(edge, 1);
                if (uinf) {
                    double L = a + C * uinf->value;
                    double scale = std::abs(a) + std::abs(C) * uinf->value + 1e-300;
                    if (std::abs(L) > 1e-10 * scale) {
                        dom = mul(AsymptoticTerm{L * L, 0.0, 0, 1.0}, mshift);
                    } else {
                        // vanishing limit: a + C U_r = -C T_{r+1}
                        auto T = suffix_sum(recip);
                        if (T) dom = mul(mul(AsymptoticTerm{C * C, 0.0, 0, 1.0}, square(*T)), mshift);
                    }
                }
            }
        }
    }
    return decide_term_stream(term, dom, budget);
}

namespace {

SeriesVerdict trivially_convergent(const std::string& why) {
    SeriesVerdict v;
    v.outcome = Outcome::Converges;
    v.estimate = 0.0;
    v.evidence.note = why;
    return v;
}

} // namespace

HarmonicSolution chain_harmonic(const BirthDeath& chain, double v0, double v1, std::int64_t upto,
                                SeriesBudget budget) {
    HarmonicSolution h;
    h.domain_ = HarmonicSolution::Domain::Chain;
    h.v0_ = v0;
    h.v1_ = v1;
    h.C_ = chain.edge.at(0) * (v1 - v0);
    h.graph_ = std::make_shared<GraphSpec>(chain);
    h.cache_ = std::make_shared<HarmonicSolution::Cache>();
    h.l2_pos_ = harmonic_l2_tail(chain.edge, chain.measure, 1, v1, h.C_, budget);
    h.l2_neg_ = trivially_convergent("chain has a single end");
    for (std::int64_t r = 0; r <= upto; ++r) (void)h.value(Vertex{0, r}); // prefill
    return h;
}

DoubledChain doubled_chain(const BirthDeath& chain, double bridge_weight) {
    if (!(bridge_weight > 0.0)) throw InvalidSpec("bridge weight must be positive");
    return DoubledChain{chain, bridge_weight};
}

HarmonicSolution doubled_harmonic(const DoubledChain& doubled, double v1, std::int64_t upto,
                                  SeriesBudget budget) {
    if (!(v1 > 0.0)) throw InvalidSpec("v(1) must be positive");
    HarmonicSolution h;
    h.domain_ = HarmonicSolution::Domain::DoubledChain;
    h.v0_ = 0.0;
    h.v1_ = v1;
    h.C_ = doubled.base.edge.at(0) * v1;
    h.graph_ = std::make_shared<GraphSpec>(doubled);
    h.cache_ = std::make_shared<HarmonicSolution::Cache>();
    // positive branch: v(r) = v1 + C U_{r-1} against m(r)
    h.l2_pos_ = harmonic_l2_tail(doubled.base.edge, doubled.base.measure, 1, v1, h.C_, budget);
    // mirror branch: v(-k) = A - C U_{k-1}, A = v(0~) - C/b(0,1), against m(k)
    double A = -h.C_ / doubled.bridge_weight - h.C_ / doubled.base.edge.at(0);
    h.l2_neg_ = harmonic_l2_tail(doubled.base.edge, doubled.base.measure, 1, A, -h.C_, budget);
    for (std::int64_t r = 0; r <= upto; ++r) (void)h.value(Vertex{0, r});
    for (std::int64_t r = 1; r <= upto; ++r) (void)h.value(Vertex{-1, r});
    return h;
}

HarmonicSolution star_harmonic(const TwoRayStar& star, double v0, double v1, std::int64_t upto,
                               SeriesBudget budget) {
    HarmonicSolution h;
    h.domain_ = HarmonicSolution::Domain::TwoRayStar;
    h.v0_ = v0;
    h.v1_ = v1;
    h.C_ = star.edge_pos.at(0) * (v1 - v0);
    h.graph_ = std::make_shared<GraphSpec>(star);
    h.cache_ = std::make_shared<HarmonicSolution::Cache>();
    h.l2_pos_ = harmonic_l2_tail(star.edge_pos, star.measure_pos, 1, v1, h.C_, budget);
    double vm1 = v0 - h.C_ / star.edge_neg.at(0);
    h.l2_neg_ = harmonic_l2_tail(star.edge_neg, star.measure_neg, 0, vm1, -h.C_, budget);
    for (std::int64_t r = -upto; r <= upto; ++r) (void)h.value(Vertex{0, r});
    return h;
}

VanishingEnd vanishing_end_constant(const TwoRayStar& star, StarEnd end, double v_at_1) {
    const SequenceSpec& edge = end == StarEnd::Pos ? star.edge_pos : star.edge_neg;
    auto t1 = tail_sum_reciprocal(edge, 1);
    if (!t1) throw EndNotTransient("vanishing normalization needs a transient end");
    // limit of v along the end is v(+-1) -+ C * sum_{k>=1} 1/b; vanishing pins C
    double C = end == StarEnd::Pos ? -v_at_1 / t1->value : v_at_1 / t1->value;
    double sign = end == StarEnd::Pos ? -1.0 : 1.0;
    VanishingEnd out;
    out.C = C;
    out.tail_value = [edge, C, sign](std::int64_t r) {
        auto t = tail_sum_reciprocal(edge, static_cast<std::size_t>(r));
        if (!t) throw EndNotTransient("tail sum diverged");
        return sign * C * t->value;
    };
    return out;
}

HarmonicSolution StarWitnessBuilder::build(const StarLike& g, int ray_comp, dd ray_head,
                                           double flux, std::map<Vertex, dd> fixed,
                                           SeriesVerdict l2_ray, SeriesVerdict l2_rest) {
    HarmonicSolution h;
    h.domain_ = HarmonicSolution::Domain::StarLikeWitness;
    h.C_ = flux;
    h.v0_ = ray_head.value();
    h.v1_ = 0.0;
    h.graph_ = std::make_shared<GraphSpec>(g);
    h.cache_ = std::make_shared<HarmonicSolution::Cache>();
    h.cache_->ray_comp = ray_comp;
    h.cache_->ray_head = ray_head;
    h.cache_->fixed = std::move(fixed);
    h.l2_pos_ = std::move(l2_ray);
    h.l2_neg_ = std::move(l2_rest);
    return h;
}

double max_harmonic_residual(const HarmonicSolution& v, const std::vector<Vertex>& window) {
    const GraphSpec& g = v.graph();
    double worst = 0.0;
    for (const Vertex& x : window) {
        dd acc{0.0};
        dd fx = v.value_dd(x);
        for (const auto& [y, w] : neighbors(g, x)) acc = dd_add(acc, dd_mul(dd_sub(fx, v.value_dd(y)), w));
        double res = std::abs(dd_div(acc, vertex_measure(g, x)).value());
        if (res > worst) worst = res;
    }
    return worst;
}

double max_harmonic_residual_relative(const HarmonicSolution& v,
                                      const std::vector<Vertex>& window) {
    const GraphSpec& g = v.graph();
    double worst = 0.0;
    for (const Vertex& x : window) {
        dd acc{0.0};
        double scale = 0.0;
        dd fx = v.value_dd(x);
        for (const auto& [y, w] : neighbors(g, x)) {
            dd fy = v.value_dd(y);
            acc = dd_add(acc, dd_mul(dd_sub(fx, fy), w));
            scale += w * (std::abs(fx.value()) + std::abs(fy.value()));
        }
        double m = vertex_measure(g, x);
        if (scale == 0.0) continue; // the zero function is harmonic
        double res = std::abs(acc.value()) / m / (scale / m);
        if (res > worst) worst = res;
    }
    return worst;
}

} // namespace chainspec
