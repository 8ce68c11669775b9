#include "chainspec/json_io.hpp"

#include <fstream>
#include <sstream>

namespace chainspec {

using json = nlohmann::ordered_json;

nlohmann::json sequence_to_json(const SequenceSpec& s) {
    json j;
    j["table"] = s.table;
    json tail;
    tail["family"] = to_string(s.family);
    switch (s.family) {
        case TailFamily::None: break;
        case TailFamily::Constant: tail["c"] = s.c; break;
        case TailFamily::Power:
            tail["c"] = s.c;
            tail["p"] = s.p;
            break;
        case TailFamily::Exponential:
            tail["c"] = s.c;
            tail["q"] = s.q;
            break;
    }
    j["tail"] = tail;
    return j;
}

SequenceSpec sequence_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("table") || !j.contains("tail"))
        throw ParseError("a sequence needs \"table\" and \"tail\"");
    std::vector<double> table = j.at("table").get<std::vector<double>>();
    const auto& tail = j.at("tail");
    std::string family = tail.at("family").get<std::string>();
    if (family == "none") return SequenceSpec::table_only(std::move(table));
    double c = tail.at("c").get<double>();
    if (family == "const") return SequenceSpec::constant(c, std::move(table));
    if (family == "power") return SequenceSpec::power(c, tail.at("p").get<double>(), std::move(table));
    if (family == "exp") return SequenceSpec::exponential(c, tail.at("q").get<double>(), std::move(table));
    throw ParseError("unknown tail family \"" + family + "\"");
}

namespace {

json finite_to_json(const FiniteGraph& g) {
    json j;
    j["n"] = g.n;
    json edges = json::array();
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t k = i + 1; k < g.n; ++k)
            if (g.weights[i][k] > 0.0) edges.push_back({i, k, g.weights[i][k]});
    j["weights"] = edges;
    j["measure"] = g.measure;
    return j;
}

FiniteGraph finite_from_json(const nlohmann::json& j) {
    FiniteGraph g;
    g.n = j.at("n").get<std::size_t>();
    g.weights.assign(g.n, std::vector<double>(g.n, 0.0));
    g.measure = j.at("measure").get<std::vector<double>>();
    for (const auto& e : j.at("weights")) {
        std::size_t a = e.at(0).get<std::size_t>(), b = e.at(1).get<std::size_t>();
        double w = e.at(2).get<double>();
        if (a >= g.n || b >= g.n) throw ParseError("edge endpoint outside the vertex range");
        g.weights[a][b] = g.weights[b][a] = w;
    }
    g.validate();
    return g;
}

json chain_to_json(const BirthDeath& g) {
    json j;
    j["edge"] = sequence_to_json(g.edge);
    j["measure"] = sequence_to_json(g.measure);
    return j;
}

BirthDeath chain_from_json(const nlohmann::json& j) {
    return BirthDeath{sequence_from_json(j.at("edge")), sequence_from_json(j.at("measure"))};
}

} // namespace

nlohmann::json graph_to_json(const GraphSpec& g) {
    json j;
    j["kind"] = kind_name(g);
    if (const auto* bd = std::get_if<BirthDeath>(&g)) {
        j.update(chain_to_json(*bd));
    } else if (const auto* st = std::get_if<TwoRayStar>(&g)) {
        j["edge_pos"] = sequence_to_json(st->edge_pos);
        j["edge_neg"] = sequence_to_json(st->edge_neg);
        j["measure_pos"] = sequence_to_json(st->measure_pos);
        j["measure_neg"] = sequence_to_json(st->measure_neg);
    } else if (const auto* sl = std::get_if<StarLike>(&g)) {
        j["hub"] = finite_to_json(sl->hub);
        json rays = json::array();
        for (const Ray& r : sl->rays) {
            json rj;
            rj["chain"] = chain_to_json(r.chain);
            rj["attach_vertex"] = r.attach_vertex;
            rj["attach_weight"] = r.attach_weight;
            rays.push_back(rj);
        }
        j["rays"] = rays;
        if (sl->family) {
            json f;
            f["attach_weight"] = sequence_to_json(sl->family->attach_weight);
            f["chain"] = chain_to_json(sl->family->chain);
            f["attach_vertex"] = sl->family->attach_vertex;
            j["ray_family"] = f;
        }
        if (sl->hub_infinite) {
            j["hub_infinite"] = true;
            j["hub_esa_asserted"] = sl->hub_esa_asserted;
        }
    } else if (const auto* fg = std::get_if<FiniteGraph>(&g)) {
        j.update(finite_to_json(*fg));
    } else if (const auto* dc = std::get_if<DoubledChain>(&g)) {
        j["base"] = chain_to_json(dc->base);
        j["bridge_weight"] = dc->bridge_weight;
    } else if (const auto* pc = std::get_if<PendantChain>(&g)) {
        j["base"] = chain_to_json(pc->base);
        j["pendant_edge"] = sequence_to_json(pc->pendant_edge);
        j["pendant_measure"] = sequence_to_json(pc->pendant_measure);
    }
    return j;
}

namespace {

GraphSpec graph_from_json_impl(const nlohmann::json& j);

} // namespace

GraphSpec graph_from_json(const nlohmann::json& j) {
    try {
        return graph_from_json_impl(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
}

namespace {

GraphSpec graph_from_json_impl(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError("a graph spec needs \"kind\"");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "birth_death") return chain_from_json(j);
    if (kind == "two_ray_star")
        return TwoRayStar{sequence_from_json(j.at("edge_pos")), sequence_from_json(j.at("edge_neg")),
                          sequence_from_json(j.at("measure_pos")),
                          sequence_from_json(j.at("measure_neg"))};
    if (kind == "star_like") {
        StarLike sl;
        sl.hub = finite_from_json(j.at("hub"));
        for (const auto& rj : j.at("rays"))
            sl.rays.push_back(Ray{chain_from_json(rj.at("chain")),
                                  rj.at("attach_vertex").get<std::size_t>(),
                                  rj.at("attach_weight").get<double>()});
        if (j.contains("ray_family")) {
            const auto& f = j.at("ray_family");
            sl.family = RayFamily{sequence_from_json(f.at("attach_weight")),
                                  chain_from_json(f.at("chain")),
                                  f.at("attach_vertex").get<std::size_t>()};
        }
        sl.hub_infinite = j.value("hub_infinite", false);
        sl.hub_esa_asserted = j.value("hub_esa_asserted", false);
        return sl;
    }
    if (kind == "finite_graph") return finite_from_json(j);
    if (kind == "doubled_chain")
        return DoubledChain{chain_from_json(j.at("base")), j.at("bridge_weight").get<double>()};
    if (kind == "pendant_chain")
        return PendantChain{chain_from_json(j.at("base")), sequence_from_json(j.at("pendant_edge")),
                            sequence_from_json(j.at("pendant_measure"))};
    throw ParseError("unknown graph kind \"" + kind + "\"");
}

} // namespace

GraphSpec load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // recover line/column from the byte offset
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                         e.what());
    }
    try {
        return graph_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_graph(const GraphSpec& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << graph_to_json(g).dump(2) << "\n";
}

nlohmann::json series_to_json(const SeriesVerdict& v) {
    json j;
    j["outcome"] = to_string(v.outcome);
    if (v.estimate) j["estimate"] = *v.estimate;
    json ev;
    ev["terms_used"] = v.evidence.terms_used;
    json ps = json::array();
    for (const auto& [i, s] : v.evidence.partial_sums) ps.push_back({i, s});
    ev["partial_sums"] = ps;
    if (v.evidence.dominant_term) {
        const auto& t = *v.evidence.dominant_term;
        ev["dominant_term"] = {{"coef", t.coef}, {"power", t.power}, {"logpower", t.logpower},
                               {"base", t.base}};
    }
    if (!v.evidence.note.empty()) ev["note"] = v.evidence.note;
    j["evidence"] = ev;
    return j;
}

namespace {

SeriesVerdict series_from_json(const nlohmann::json& j) {
    SeriesVerdict v;
    std::string o = j.at("outcome").get<std::string>();
    v.outcome = o == "diverges"    ? Outcome::Diverges
                : o == "converges" ? Outcome::Converges
                                   : Outcome::Inconclusive;
    if (j.contains("estimate")) v.estimate = j.at("estimate").get<double>();
    const auto& ev = j.at("evidence");
    v.evidence.terms_used = ev.at("terms_used").get<std::int64_t>();
    for (const auto& p : ev.at("partial_sums"))
        v.evidence.partial_sums.emplace_back(p.at(0).get<std::int64_t>(), p.at(1).get<double>());
    if (ev.contains("dominant_term")) {
        const auto& t = ev.at("dominant_term");
        v.evidence.dominant_term =
            AsymptoticTerm{t.at("coef").get<double>(), t.at("power").get<double>(),
                           t.at("logpower").get<int>(), t.at("base").get<double>()};
    }
    if (ev.contains("note")) v.evidence.note = ev.at("note").get<std::string>();
    return v;
}

} // namespace

nlohmann::json report_to_json(const PropertyReport& r) {
    json j;
    j["schema"] = "chainspec/1";
    j["kind"] = r.kind;
    json props;
    for (const auto& [name, e] : r.properties) {
        json pe;
        pe["verdict"] = e.verdict;
        if (e.series) pe["series"] = series_to_json(*e.series);
        pe["citations"] = e.citations;
        if (!e.detail.empty()) pe["detail"] = e.detail;
        props[name] = pe;
    }
    j["properties"] = props;
    j["consistency_violations"] = r.consistency_violations;
    return j;
}

PropertyReport report_from_json(const nlohmann::json& j) {
    try {
        if (j.value("schema", "") != "chainspec/1") throw ParseError("unknown report schema");
        PropertyReport r;
        r.kind = j.at("kind").get<std::string>();
        for (const auto& [name, pe] : j.at("properties").items()) {
            PropertyEntry e;
            e.verdict = pe.at("verdict").get<std::string>();
            if (pe.contains("series")) e.series = series_from_json(pe.at("series"));
            e.citations = pe.at("citations").get<std::vector<std::string>>();
            e.detail = pe.value("detail", "");
            r.add(name, std::move(e));
        }
        r.consistency_violations = j.at("consistency_violations").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
}

nlohmann::json capacity_to_json(const CapacityRecord& r) {
    json j;
    j["kind"] = r.kind == CapacityRecord::Kind::Infinite ? "infinite" : "sequence";
    json minima = json::array();
    for (const auto& [n, v] : r.minima) minima.push_back({n, v});
    j["minima"] = minima;
    if (r.k) j["k"] = *r.k;
    if (r.extrapolated) j["extrapolated"] = *r.extrapolated;
    j["dichotomy"] = to_string(r.dichotomy);
    if (r.lower_bound) j["lower_bound"] = *r.lower_bound;
    if (!r.minimizer.empty()) j["minimizer"] = r.minimizer;
    j["note"] = r.note;
    return j;
}

nlohmann::json comparison_to_json(const CapacityComparison& c) {
    json j;
    j["schedule"] = c.schedule;
    j["cap_n"] = c.cap_n;
    j["capk_n"] = c.capk_n;
    j["C_of_k"] = c.C_of_k;
    return j;
}

nlohmann::json witness_to_json(const HarmonicSolution& v, std::int64_t window, double residual) {
    json j;
    json vals;
    for (std::int64_t r = -window; r <= window; ++r) {
        try {
            vals[std::to_string(r)] = v.value(Vertex{0, r});
        } catch (const Error&) {
            // outside the domain (chains have no negative side)
        }
    }
    j["values"] = vals;
    j["C"] = v.flux();
    j["residual_max"] = residual;
    j["l2_pos"] = series_to_json(v.l2_pos());
    j["l2_neg"] = series_to_json(v.l2_neg());
    return j;
}

nlohmann::json green_to_json(const GreenFunction& g) {
    json j;
    j["pole"] = g.pole.str();
    j["radii"] = g.radii;
    json vals;
    for (const auto& [v, gv] : g.values) vals[v.str()] = gv;
    j["values"] = vals;
    j["monotone_certificate"] = g.monotone_certificate;
    return j;
}

} // namespace chainspec
