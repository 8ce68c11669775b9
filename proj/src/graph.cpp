#include "chainspec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "chainspec/dd.hpp"

namespace chainspec {

std::string Vertex::str() const {
    switch (comp) {
        case 0: return std::to_string(idx);
        case -1: return "-" + std::to_string(idx) + "(mirror)";
        case -2: return "0~";
        default: return std::to_string(idx) + "^(" + std::to_string(comp) + ")";
    }
}

double VertexFunction::at(const Vertex& v) const {
    auto it = values.find(v);
    if (it != values.end()) return it->second;
    if (fallback) return *fallback;
    throw MissingValue("no value at vertex " + v.str());
}

void FiniteGraph::validate() const {
    if (weights.size() != n || measure.size() != n)
        throw InvalidSpec("finite graph tables must have n rows");
    for (std::size_t i = 0; i < n; ++i) {
        if (weights[i].size() != n) throw InvalidSpec("weight table must be n x n");
        if (!(measure[i] > 0.0)) throw InvalidSpec("measure must be strictly positive");
        if (weights[i][i] != 0.0) throw InvalidSpec("weight diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (weights[i][j] < 0.0) throw InvalidSpec("weights must be nonnegative");
            if (weights[i][j] != weights[j][i]) throw InvalidSpec("weight table must be symmetric");
        }
    }
}

FiniteGraph FiniteGraph::path(std::size_t n, double w, double m) {
    FiniteGraph g;
    g.n = n;
    g.weights.assign(n, std::vector<double>(n, 0.0));
    g.measure.assign(n, m);
    for (std::size_t i = 0; i + 1 < n; ++i) g.weights[i][i + 1] = g.weights[i + 1][i] = w;
    return g;
}

FiniteGraph FiniteGraph::single(double m) { return path(1, 1.0, m); }

std::string kind_name(const GraphSpec& g) {
    struct V {
        std::string operator()(const BirthDeath&) const { return "birth_death"; }
        std::string operator()(const TwoRayStar&) const { return "two_ray_star"; }
        std::string operator()(const StarLike&) const { return "star_like"; }
        std::string operator()(const FiniteGraph&) const { return "finite_graph"; }
        std::string operator()(const DoubledChain&) const { return "doubled_chain"; }
        std::string operator()(const PendantChain&) const { return "pendant_chain"; }
    };
    return std::visit(V{}, g);
}

namespace {

// edge weight of a two-ray star between integers j and j+1
double tworay_edge(const TwoRayStar& s, std::int64_t j) {
    if (j >= 0) return s.edge_pos.at(static_cast<std::size_t>(j));
    return s.edge_neg.at(static_cast<std::size_t>(-j - 1));
}

double tworay_measure(const TwoRayStar& s, std::int64_t r) {
    if (r >= 0) return s.measure_pos.at(static_cast<std::size_t>(r));
    return s.measure_neg.at(static_cast<std::size_t>(-r - 1));
}

} // namespace

double vertex_measure(const GraphSpec& g, const Vertex& v) {
    if (const auto* bd = std::get_if<BirthDeath>(&g)) {
        if (v.comp != 0 || v.idx < 0) throw InvalidSpec("vertex outside chain");
        return bd->measure.at(static_cast<std::size_t>(v.idx));
    }
    if (const auto* st = std::get_if<TwoRayStar>(&g)) {
        if (v.comp != 0) throw InvalidSpec("vertex outside star");
        return tworay_measure(*st, v.idx);
    }
    if (const auto* fg = std::get_if<FiniteGraph>(&g)) {
        if (v.comp != 0 || v.idx < 0 || static_cast<std::size_t>(v.idx) >= fg->n)
            throw InvalidSpec("vertex outside finite graph");
        return fg->measure[static_cast<std::size_t>(v.idx)];
    }
    if (const auto* sl = std::get_if<StarLike>(&g)) {
        if (v.comp == 0) {
            if (v.idx < 0 || static_cast<std::size_t>(v.idx) >= sl->hub.n)
                throw InvalidSpec("vertex outside hub");
            return sl->hub.measure[static_cast<std::size_t>(v.idx)];
        }
        std::size_t ray = static_cast<std::size_t>(v.comp - 1);
        if (ray >= sl->rays.size() || v.idx < 0) throw InvalidSpec("vertex outside rays");
        return sl->rays[ray].chain.measure.at(static_cast<std::size_t>(v.idx));
    }
    if (const auto* dc = std::get_if<DoubledChain>(&g)) {
        if (v.comp == 0 && v.idx >= 0) return dc->base.measure.at(static_cast<std::size_t>(v.idx));
        if (v.comp == -2 && v.idx == 0) return dc->base.measure.at(0); // m~(0~) = m(0)
        if (v.comp == -1 && v.idx >= 1) return dc->base.measure.at(static_cast<std::size_t>(v.idx));
        throw InvalidSpec("vertex outside doubled chain");
    }
    if (const auto* pc = std::get_if<PendantChain>(&g)) {
        if (v.comp == 0 && v.idx >= 0) return pc->base.measure.at(static_cast<std::size_t>(v.idx));
        if (v.comp == 1 && v.idx >= 0) return pc->pendant_measure.at(static_cast<std::size_t>(v.idx));
        throw InvalidSpec("vertex outside pendant chain");
    }
    throw InvalidSpec("unknown graph kind");
}

std::vector<std::pair<Vertex, double>> neighbors(const GraphSpec& g, const Vertex& v) {
    std::vector<std::pair<Vertex, double>> out;
    if (const auto* bd = std::get_if<BirthDeath>(&g)) {
        if (v.comp != 0 || v.idx < 0) throw InvalidSpec("vertex outside chain");
        if (v.idx > 0)
            out.emplace_back(Vertex{0, v.idx - 1}, bd->edge.at(static_cast<std::size_t>(v.idx - 1)));
        out.emplace_back(Vertex{0, v.idx + 1}, bd->edge.at(static_cast<std::size_t>(v.idx)));
        return out;
    }
    if (const auto* st = std::get_if<TwoRayStar>(&g)) {
        out.emplace_back(Vertex{0, v.idx - 1}, tworay_edge(*st, v.idx - 1));
        out.emplace_back(Vertex{0, v.idx + 1}, tworay_edge(*st, v.idx));
        return out;
    }
    if (const auto* fg = std::get_if<FiniteGraph>(&g)) {
        std::size_t i = static_cast<std::size_t>(v.idx);
        for (std::size_t j = 0; j < fg->n; ++j)
            if (fg->weights[i][j] > 0.0) out.emplace_back(Vertex{0, static_cast<std::int64_t>(j)}, fg->weights[i][j]);
        return out;
    }
    if (const auto* sl = std::get_if<StarLike>(&g)) {
        if (v.comp == 0) {
            std::size_t i = static_cast<std::size_t>(v.idx);
            for (std::size_t j = 0; j < sl->hub.n; ++j)
                if (sl->hub.weights[i][j] > 0.0)
                    out.emplace_back(Vertex{0, static_cast<std::int64_t>(j)}, sl->hub.weights[i][j]);
            for (std::size_t r = 0; r < sl->rays.size(); ++r)
                if (sl->rays[r].attach_vertex == i)
                    out.emplace_back(Vertex{static_cast<int>(r) + 1, 0}, sl->rays[r].attach_weight);
            // family rays are not enumerable; callers handle them analytically
            return out;
        }
        std::size_t ray = static_cast<std::size_t>(v.comp - 1);
        const Ray& R = sl->rays.at(ray);
        if (v.idx == 0)
            out.emplace_back(Vertex{0, static_cast<std::int64_t>(R.attach_vertex)}, R.attach_weight);
        else
            out.emplace_back(Vertex{v.comp, v.idx - 1}, R.chain.edge.at(static_cast<std::size_t>(v.idx - 1)));
        out.emplace_back(Vertex{v.comp, v.idx + 1}, R.chain.edge.at(static_cast<std::size_t>(v.idx)));
        return out;
    }
    if (const auto* dc = std::get_if<DoubledChain>(&g)) {
        const SequenceSpec& b = dc->base.edge;
        if (v.comp == 0) {
            if (v.idx == 0) {
                out.emplace_back(Vertex{-2, 0}, dc->bridge_weight);
                out.emplace_back(Vertex{0, 1}, b.at(0));
            } else {
                out.emplace_back(Vertex{0, v.idx - 1}, b.at(static_cast<std::size_t>(v.idx - 1)));
                out.emplace_back(Vertex{0, v.idx + 1}, b.at(static_cast<std::size_t>(v.idx)));
            }
            return out;
        }
        if (v.comp == -2) { // 0~: bridge to 0, and b(0,1) to mirror vertex 1
            out.emplace_back(Vertex{0, 0}, dc->bridge_weight);
            out.emplace_back(Vertex{-1, 1}, b.at(0));
            return out;
        }
        // mirror copy: -k for k >= 1, edge b~(-k-1,-k) = b(k,k+1)
        if (v.idx == 1)
            out.emplace_back(Vertex{-2, 0}, b.at(0));
        else
            out.emplace_back(Vertex{-1, v.idx - 1}, b.at(static_cast<std::size_t>(v.idx - 1)));
        out.emplace_back(Vertex{-1, v.idx + 1}, b.at(static_cast<std::size_t>(v.idx)));
        return out;
    }
    if (const auto* pc = std::get_if<PendantChain>(&g)) {
        const SequenceSpec& b = pc->base.edge;
        if (v.comp == 0) {
            if (v.idx > 0)
                out.emplace_back(Vertex{0, v.idx - 1}, b.at(static_cast<std::size_t>(v.idx - 1)));
            out.emplace_back(Vertex{0, v.idx + 1}, b.at(static_cast<std::size_t>(v.idx)));
            out.emplace_back(Vertex{1, v.idx}, pc->pendant_edge.at(static_cast<std::size_t>(v.idx)));
            return out;
        }
        out.emplace_back(Vertex{0, v.idx}, pc->pendant_edge.at(static_cast<std::size_t>(v.idx)));
        return out;
    }
    throw InvalidSpec("unknown graph kind");
}

std::string to_string(CheckVerdict v) {
    switch (v) {
        case CheckVerdict::Holds: return "holds";
        case CheckVerdict::Fails: return "fails";
        case CheckVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

CheckVerdict check_condition_A(const GraphSpec& g, SeriesBudget budget) {
    // chains, stars and locally finite kinds satisfy (A) outright
    if (const auto* sl = std::get_if<StarLike>(&g)) {
        if (!sl->family) return CheckVerdict::Holds;
        // hub series sum_i b^2(x0,0^(i))/m(0^(i)); the family chains share m(0)
        double m0 = sl->family->chain.measure.at(0);
        auto att = sl->family->attach_weight;
        auto term = [att, m0](std::int64_t i) {
            double b = att.at(static_cast<std::size_t>(i));
            return b * b / m0;
        };
        auto at = tail_term(att);
        if (at) {
            AsymptoticTerm t = mul(square(*at), AsymptoticTerm{1.0 / m0, 0.0, 0, 1.0});
            return series_outcome(t) == TermSum::Converges ? CheckVerdict::Holds
                                                           : CheckVerdict::Fails;
        }
        auto v = decide_numeric(term, budget);
        if (v.converges()) return CheckVerdict::Holds;
        if (v.diverges()) return CheckVerdict::Fails;
        return CheckVerdict::Inconclusive;
    }
    return CheckVerdict::Holds;
}

double weighted_degree(const GraphSpec& g, const Vertex& v) {
    KahanSum s;
    for (const auto& [y, w] : neighbors(g, v)) {
        (void)y;
        s.add(w);
    }
    if (const auto* sl = std::get_if<StarLike>(&g)) {
        if (v.comp == 0 && sl->family &&
            sl->family->attach_vertex == static_cast<std::size_t>(v.idx)) {
            auto tot = tail_sum(sl->family->attach_weight, 0);
            if (!tot) throw DivergentDegree("family attachment weights are not summable");
            s.add(tot->value);
        }
    }
    return s.value() / vertex_measure(g, v);
}

VertexFunction apply_laplacian(const GraphSpec& g, const VertexFunction& f,
                               const std::vector<Vertex>& window) {
    VertexFunction out;
    for (const Vertex& x : window) {
        dd acc{0.0};
        double fx = f.at(x);
        for (const auto& [y, w] : neighbors(g, x)) {
            if (!f.defined(y)) throw MissingValue("Laplacian at " + x.str() + " needs f(" + y.str() + ")");
            acc = dd_add(acc, dd_mul(dd_sub(dd{fx}, dd{f.at(y)}), w));
        }
        if (const auto* sl = std::get_if<StarLike>(&g)) {
            if (x.comp == 0 && sl->family &&
                sl->family->attach_vertex == static_cast<std::size_t>(x.idx)) {
                if (!f.fallback)
                    throw MissingValue("family ray heads need a fallback value");
                auto tot = tail_sum(sl->family->attach_weight, 0);
                if (!tot) throw DivergentDegree("family attachment weights are not summable");
                acc = dd_add(acc, dd_mul(dd_sub(dd{fx}, dd{*f.fallback}), tot->value));
            }
        }
        out.set(x, dd_div(acc, vertex_measure(g, x)).value());
    }
    return out;
}

double energy(const GraphSpec& g, const VertexFunction& f,
              const std::vector<std::pair<Vertex, Vertex>>& edges) {
    KahanSum s;
    for (const auto& [x, y] : edges) {
        double w = 0.0;
        bool found = false;
        for (const auto& [z, wz] : neighbors(g, x)) {
            if (z == y) {
                w = wz;
                found = true;
                break;
            }
        }
        if (!found) throw InvalidSpec("not an edge: " + x.str() + " ~ " + y.str());
        double d = f.at(x) - f.at(y);
        s.add(w * d * d);
    }
    return s.value();
}

int Window::at(const Vertex& v) const {
    auto it = index.find(v);
    if (it == index.end()) throw MissingValue("vertex not in window: " + v.str());
    return it->second;
}

Window build_ball(const GraphSpec& g, const Vertex& center, int radius) {
    Window w;
    std::map<Vertex, int> dist;
    std::deque<Vertex> queue{center};
    dist[center] = 0;
    while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        int d = dist[x];
        int id = static_cast<int>(w.verts.size());
        w.index[x] = id;
        w.verts.push_back(x);
        w.measure.push_back(vertex_measure(g, x));
        w.on_sphere.push_back(d == radius);
        if (d == radius) continue;
        for (const auto& [y, wt] : neighbors(g, x)) {
            (void)wt;
            if (!dist.count(y)) {
                dist[y] = d + 1;
                queue.push_back(y);
            }
        }
    }
    w.adj.assign(w.size(), {});
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (const auto& [y, wt] : neighbors(g, w.verts[i])) {
            auto it = w.index.find(y);
            if (it != w.index.end()) w.adj[i].emplace_back(it->second, wt);
        }
    }
    return w;
}

} // namespace chainspec
