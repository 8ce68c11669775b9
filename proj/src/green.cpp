#include "chainspec/green.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <memory>

#include "chainspec/banded.hpp"
#include "chainspec/criteria.hpp"
#include "chainspec/dd.hpp"

namespace chainspec {

double GreenFunction::at(const Vertex& v) const {
    auto it = values.find(v);
    if (it == values.end()) throw MissingValue("Green's function not computed at " + v.str());
    return it->second;
}

dd GreenFunction::at_dd(const Vertex& v) const {
    auto it = values_dd.find(v);
    if (it == values_dd.end()) throw MissingValue("Green's function not computed at " + v.str());
    return it->second;
}

double green_closed_form(const BirthDeath& chain, std::size_t r) {
    auto t = tail_sum_reciprocal(chain.edge, r);
    if (!t) throw NotTransient("closed-form Green's function needs a transient chain");
    return t->value;
}

namespace {

// Dirichlet solve of sum_y b(x,y)(g(x)-g(y)) = [x == pole] on the ball
// interior, zero on the sphere. Banded LDL^T when the interior ordering is
// narrow, sparse LDL^T otherwise. Two rounds of iterative refinement with a
// double-double residual tighten the solution well past double rounding so
// downstream harmonicity checks stay clean even against tiny measures.
std::vector<dd> dirichlet_green(const Window& w, int pole_idx) {
    std::vector<int> unknown(w.size(), -1);
    std::vector<int> order;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!w.on_sphere[i]) {
            unknown[i] = static_cast<int>(order.size());
            order.push_back(static_cast<int>(i));
        }
    }
    if (order.empty()) throw SingularSystem("no interior vertices");
    bool has_dirichlet = false;
    for (std::size_t i = 0; i < w.size(); ++i) has_dirichlet = has_dirichlet || w.on_sphere[i];
    if (!has_dirichlet) throw SingularSystem("window has no Dirichlet sphere");

    std::size_t n = order.size();
    std::size_t band = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (unknown[i] < 0) continue;
        for (const auto& [j, wt] : w.adj[i]) {
            (void)wt;
            if (unknown[j] >= 0)
                band = std::max<std::size_t>(band, static_cast<std::size_t>(
                                                       std::abs(unknown[i] - unknown[j])));
        }
    }

    std::vector<double> rhs(n, 0.0);
    if (unknown[pole_idx] < 0) throw SingularSystem("pole on the Dirichlet sphere");
    rhs[static_cast<std::size_t>(unknown[pole_idx])] = 1.0;

    std::function<void(std::vector<double>&)> solve_with;
    BandedSPD banded(1, 0);
    Eigen::SparseMatrix<double> sparse;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    if (band <= 4) {
        banded = BandedSPD(n, band);
        for (std::size_t oi = 0; oi < n; ++oi) {
            std::size_t i = static_cast<std::size_t>(order[oi]);
            double diag = 0.0;
            for (const auto& [j, wt] : w.adj[i]) {
                diag += wt;
                if (unknown[j] >= 0 && unknown[j] < static_cast<int>(oi))
                    banded.add(oi, static_cast<std::size_t>(unknown[j]), -wt);
            }
            banded.add(oi, oi, diag);
        }
        try {
            banded.factorize();
        } catch (const SolverFailure&) {
            throw SingularSystem("Dirichlet system not positive definite");
        }
        solve_with = [&banded](std::vector<double>& v) { banded.solve(v); };
    } else {
        using Trip = Eigen::Triplet<double>;
        std::vector<Trip> trips;
        for (std::size_t oi = 0; oi < n; ++oi) {
            std::size_t i = static_cast<std::size_t>(order[oi]);
            double diag = 0.0;
            for (const auto& [j, wt] : w.adj[i]) {
                diag += wt;
                if (unknown[j] >= 0) trips.emplace_back(static_cast<int>(oi), unknown[j], -wt);
            }
            trips.emplace_back(static_cast<int>(oi), static_cast<int>(oi), diag);
        }
        sparse.resize(static_cast<int>(n), static_cast<int>(n));
        sparse.setFromTriplets(trips.begin(), trips.end());
        ldlt.compute(sparse);
        if (ldlt.info() != Eigen::Success) throw SingularSystem("sparse factorization failed");
        solve_with = [&ldlt, n](std::vector<double>& v) {
            Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<int>(n));
            Eigen::VectorXd x = ldlt.solve(b);
            for (std::size_t i = 0; i < n; ++i) v[i] = x[static_cast<int>(i)];
        };
    }

    std::vector<double> x = rhs;
    solve_with(x);
    std::vector<dd> sol(n);
    for (std::size_t i = 0; i < n; ++i) sol[i] = dd{x[i]};

    // refinement: residual in double-double against the row definition
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> res(n);
        for (std::size_t oi = 0; oi < n; ++oi) {
            std::size_t i = static_cast<std::size_t>(order[oi]);
            dd acc = dd_sub(dd{rhs[oi]}, dd{0.0});
            dd diag{0.0};
            for (const auto& [j, wt] : w.adj[i]) {
                diag = dd_add(diag, dd{wt});
                if (unknown[j] >= 0)
                    acc = dd_add(acc, dd_mul(sol[static_cast<std::size_t>(unknown[j])], wt));
            }
            acc = dd_sub(acc, dd_mul(sol[oi], diag));
            res[oi] = acc.value();
        }
        solve_with(res);
        for (std::size_t i = 0; i < n; ++i) sol[i] = dd_add(sol[i], dd{res[i]});
    }
    return sol;
}

} // namespace

GreenFunction green_exhaustion(const GraphSpec& g, const Vertex& pole,
                               const std::vector<int>& radii) {
    if (radii.empty()) throw InvalidSpec("need at least one radius");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw InvalidSpec("radii must be strictly increasing");

    GreenFunction out;
    out.pole = pole;
    out.radii = radii;
    std::map<Vertex, dd> prev;
    for (int R : radii) {
        Window w = build_ball(g, pole, R);
        std::vector<dd> sol = dirichlet_green(w, w.at(pole));
        std::map<Vertex, dd> cur;
        int u = 0;
        double gpole = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w.on_sphere[i]) continue;
            cur[w.verts[i]] = sol[static_cast<std::size_t>(u)];
            if (w.verts[i] == pole) gpole = sol[static_cast<std::size_t>(u)].value();
            ++u;
        }
        double scale = std::max(1.0, gpole);
        for (const auto& [v, gv] : cur) {
            if (!(gv.value() > -1e-12 * scale))
                throw MonotonicityViolation("negative value at " + v.str());
            if (gv.value() > gpole + 1e-10 * scale)
                throw MonotonicityViolation("value above the pole value at " + v.str());
        }
        if (!prev.empty()) {
            double worst = 0.0;
            for (const auto& [v, gv] : prev) {
                auto it = cur.find(v);
                if (it == cur.end()) continue;
                worst = std::max(worst, gv.value() - it->second.value());
            }
            if (worst > 1e-10 * scale)
                throw MonotonicityViolation("exhaustion decreased by " + std::to_string(worst));
            out.monotone_certificate.push_back(worst);
        }
        prev = std::move(cur);
    }
    out.values_dd = std::move(prev);
    for (const auto& [v, gv] : out.values_dd) out.values[v] = gv.value();
    return out;
}

SeriesVerdict green_l2_end(const SequenceSpec& edge, const SequenceSpec& measure,
                           SeriesBudget budget) {
    if (recurrence(edge, budget) != Recurrence::Transient)
        throw EndNotTransient("Green-tail membership needs a transient end");
    return decide_series(edge, measure, SeriesShape::GreenL2, budget);
}

SeriesVerdict green_l2_end(const TwoRayStar& star, StarEnd end, SeriesBudget budget) {
    // the series runs against m(r) on the positive end, m(-r) on the negative
    if (end == StarEnd::Pos) return green_l2_end(star.edge_pos, star.measure_pos, budget);
    if (recurrence(star.edge_neg, budget) != Recurrence::Transient)
        throw EndNotTransient("Green-tail membership needs a transient end");
    // exact stream: T_r^2 m(-r) with m(-0) = m(0), m(-r) = measure_neg(r-1)
    SequenceSpec edge = star.edge_neg;
    SequenceSpec mneg = star.measure_neg;
    double m0 = star.measure_pos.at(0);
    auto total = tail_sum_reciprocal(edge, 0);
    if (!total) throw EndNotTransient("Green-tail membership needs a transient end");
    auto st = std::make_shared<std::pair<KahanSum, std::int64_t>>();
    double tot = total->value;
    auto term = [edge, mneg, m0, tot, st](std::int64_t r) {
        while (st->second < r) {
            st->first.add(1.0 / edge.at(static_cast<std::size_t>(st->second)));
            ++st->second;
        }
        double T = tot - st->first.value(); // sum_{k>=r} 1/b
        double m = r == 0 ? m0 : mneg.at(static_cast<std::size_t>(r - 1));
        return T * T * m;
    };
    std::optional<AsymptoticTerm> dom;
    auto e = tail_term(edge);
    auto m = tail_term(mneg);
    if (e && m) {
        auto T = suffix_sum(reciprocal(*e));
        if (T) dom = mul(square(*T), shift(*m, -1));
    }
    return decide_term_stream(term, dom, budget);
}

double green_pole_comparability(const GraphSpec& g, const Vertex& x0, const Vertex& x,
                                const std::vector<int>& radii) {
    // common window: ball around x0 just covering x as an interior vertex
    int d = -1;
    for (int r = 1; r <= radii.front(); ++r) {
        Window wr = build_ball(g, x0, r);
        auto it = wr.index.find(x);
        if (it != wr.index.end() && !wr.on_sphere[static_cast<std::size_t>(it->second)]) {
            d = r;
            break;
        }
    }
    if (d < 0) throw WindowDisconnected("second pole not interior to the first radius");
    Window omega = build_ball(g, x0, d);

    std::vector<GreenFunction> a, b;
    for (int R : radii) {
        a.push_back(green_exhaustion(g, x0, {R}));
        b.push_back(green_exhaustion(g, x, {R}));
    }

    // anchor constant from the deepest solve of g_x against the first of g_x0
    double C = 0.0;
    for (const Vertex& v : omega.verts) {
        if (!b.back().values.count(v) || !a.front().values.count(v)) continue;
        C = std::max(C, b.back().at(v) / a.front().at(v));
    }
    if (!(C > 0.0)) throw WindowDisconnected("no comparable interior vertices");

    // verify C g_{x0,n} >= g_{x,n} on the window at every level
    for (std::size_t i = 0; i < radii.size(); ++i) {
        for (const Vertex& v : omega.verts) {
            if (!a[i].values.count(v) || !b[i].values.count(v)) continue;
            if (C * a[i].at(v) < b[i].at(v) - 1e-10 * std::max(1.0, b[i].at(v)))
                throw AssertionFailure("pole comparability violated at " + v.str());
        }
    }
    return C;
}

} // namespace chainspec
