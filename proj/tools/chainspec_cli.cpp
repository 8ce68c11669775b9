// chainspec — classify analytic properties of Laplacians on infinite weighted
// graphs given as JSON specs: essential self-adjointness (series test and
// capacity), recurrence, Feller, form uniqueness, the l2-Liouville property,
// harmonic and Green's function construction, Schroedinger transforms, and
// graph constructions.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <random>

#include "chainspec/capacity.hpp"
#include "chainspec/constructions.hpp"
#include "chainspec/criteria.hpp"
#include "chainspec/green.hpp"
#include "chainspec/harmonic.hpp"
#include "chainspec/json_io.hpp"
#include "chainspec/liouville.hpp"
#include "chainspec/schrodinger.hpp"

using namespace chainspec;

namespace {

struct Common {
    std::string input;
    bool json = false;
    bool strict = false;
    std::int64_t budget = 100000;
    std::string schedule = "25,50,100,200,400";
    double lambda = -1.0;
    double bridge = 1.0;
    std::string param;
    std::uint64_t seed = 0;
    std::string out;
};

std::vector<std::int64_t> parse_schedule(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw CLI::ValidationError("schedule must be strictly increasing");
    return out;
}

void write_or_print(const nlohmann::json& j, const Common& c) {
    if (c.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(c.out);
        f << j.dump(2) << "\n";
        std::cout << "wrote " << c.out << "\n";
    }
}

void print_report_text(const PropertyReport& rep) {
    std::cout << "kind: " << rep.kind << "\n";
    for (const auto& [name, e] : rep.properties) {
        std::cout << "  " << name << ": " << e.verdict;
        if (e.series) {
            std::cout << "  (series " << to_string(e.series->outcome);
            if (e.series->estimate) std::cout << ", estimate " << *e.series->estimate;
            std::cout << ")";
        }
        if (!e.detail.empty()) std::cout << "  -- " << e.detail;
        std::cout << "  [";
        for (std::size_t i = 0; i < e.citations.size(); ++i)
            std::cout << (i ? ", " : "") << e.citations[i];
        std::cout << "]\n";
    }
    for (const auto& v : rep.consistency_violations)
        std::cout << "  CONSISTENCY VIOLATION: " << v << "\n";
}

// --param alpha=1:0.5:5 or name=value; applied to tail parameters
struct ParamSweep {
    std::string name;
    std::vector<double> values;
};

ParamSweep parse_param(const std::string& p) {
    auto eq = p.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--param needs name=value[:step:end]");
    ParamSweep sw;
    sw.name = p.substr(0, eq);
    std::string rest = p.substr(eq + 1);
    std::vector<double> parts;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() == 1) {
        sw.values.push_back(parts[0]);
    } else if (parts.size() == 3) {
        for (double v = parts[0]; v <= parts[2] + 1e-12; v += parts[1]) sw.values.push_back(v);
    } else {
        throw CLI::ValidationError("--param needs name=value or name=start:step:end");
    }
    return sw;
}

GraphSpec apply_param(GraphSpec g, const std::string& name, double value) {
    auto* bd = std::get_if<BirthDeath>(&g);
    if (!bd) throw InvalidSpec("--param overrides apply to birth-death specs");
    auto set_pq = [&](SequenceSpec& s, char which) {
        if (which == 'p') {
            if (s.family != TailFamily::Power) throw InvalidSpec("tail is not a power family");
            s.p = value;
        } else if (which == 'q') {
            if (s.family != TailFamily::Exponential)
                throw InvalidSpec("tail is not an exponential family");
            s.q = value;
        } else {
            s.c = value;
        }
        s.validate();
    };
    if (name == "alpha") {
        if (bd->measure.family != TailFamily::Power)
            throw InvalidSpec("alpha override needs a power measure tail");
        bd->measure.p = -value;
        bd->measure.validate();
    } else if (name == "measure_p") set_pq(bd->measure, 'p');
    else if (name == "measure_q") set_pq(bd->measure, 'q');
    else if (name == "measure_c") set_pq(bd->measure, 'c');
    else if (name == "edge_p") set_pq(bd->edge, 'p');
    else if (name == "edge_q") set_pq(bd->edge, 'q');
    else if (name == "edge_c") set_pq(bd->edge, 'c');
    else throw InvalidSpec("unknown --param name " + name);
    return g;
}

SequenceSpec random_seq(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(0.5, 2.0), pw(-3.0, 1.5), base(0.5, 2.0);
    switch (rng() % 3) {
        case 0: return SequenceSpec::constant(coef(rng));
        case 1: return SequenceSpec::power(coef(rng), pw(rng));
        default: return SequenceSpec::exponential(coef(rng), base(rng));
    }
}

int headline_inconclusive(const PropertyReport& rep) {
    const PropertyEntry* esa = rep.find("esa");
    return esa && esa->verdict == "inconclusive" ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"analytic properties of Laplacians on infinite weighted graphs"};
    app.require_subcommand(1);
    Common c;

    auto add_common = [&](CLI::App* sub, bool needs_input = true) {
        if (needs_input)
            sub->add_option("-i,--input", c.input, "graph spec JSON file")->required();
        sub->add_flag("--json", c.json, "emit JSON instead of text");
        sub->add_flag("--strict", c.strict, "exit 2 on an inconclusive headline verdict");
        sub->add_option("--budget", c.budget, "series term budget");
        sub->add_option("--schedule", c.schedule, "comma-separated window sizes / radii");
        sub->add_option("--lambda", c.lambda, "spectral parameter for recursions");
        sub->add_option("--bridge", c.bridge, "bridge weight for doubling");
        sub->add_option("--param", c.param, "tail-parameter override or sweep (name=a[:step:b])");
        sub->add_option("--seed", c.seed, "seed for randomized generation");
        sub->add_option("--out", c.out, "output file");
    };

    auto* cls = app.add_subcommand("classify", "full property report");
    add_common(cls);
    auto* cap = app.add_subcommand("capacity", "capacity minima and dichotomy");
    add_common(cap);
    int cap_k = 1;
    cap->add_option("--k", cap_k, "truncation index for the comparison class");
    auto* har = app.add_subcommand("harmonic", "harmonic function construction");
    add_common(har);
    double v0 = 0.0, v1 = 1.0;
    std::int64_t upto = 200;
    har->add_option("--v0", v0, "value at vertex 0");
    har->add_option("--v1", v1, "value at vertex 1");
    har->add_option("--upto", upto, "window size");
    auto* grn = app.add_subcommand("green", "Green's function: closed form and exhaustion");
    add_common(grn);
    auto* lio = app.add_subcommand("liouville", "l2-Liouville classification with witnesses");
    add_common(lio);
    auto* sch = app.add_subcommand("schrodinger", "Schroedinger-operator criteria");
    add_common(sch);
    double w_const = 0.0;
    sch->add_option("--potential-const", w_const, "constant potential value");
    auto* con = app.add_subcommand("construct", "graph constructions");
    add_common(con);
    std::string op = "double";
    con->add_option("--op", op, "double | pendants | stability-break | random-chain")
        ->check(CLI::IsMember({"double", "pendants", "stability-break", "random-chain"}));
    double pendant_c = 1.0;
    con->add_option("--pendant-c", pendant_c, "constant pendant edge/measure value");
    auto* rep = app.add_subcommand("report", "classification plus capacity and witnesses");
    add_common(rep);

    CLI11_PARSE(app, argc, argv);

    try {
        SeriesBudget budget;
        budget.budget = c.budget;
        ClassifyOptions copt;
        copt.budget = budget;
        copt.capacity_schedule = parse_schedule(c.schedule);

        if (cls->parsed() || rep->parsed()) {
            GraphSpec g = load_graph(c.input);
            int worst = 0;
            std::vector<ParamSweep> sweeps;
            if (!c.param.empty()) sweeps.push_back(parse_param(c.param));
            if (sweeps.empty()) sweeps.push_back(ParamSweep{"", {0.0}});
            nlohmann::json all = nlohmann::json::array();
            for (double value : sweeps[0].values) {
                GraphSpec gg = sweeps[0].name.empty() ? g : apply_param(g, sweeps[0].name, value);
                PropertyReport r = classify(gg, copt);
                if (!sweeps[0].name.empty())
                    std::cout << sweeps[0].name << "=" << value << ":\n";
                if (c.json) all.push_back(report_to_json(r));
                else print_report_text(r);
                worst = std::max(worst, c.strict ? headline_inconclusive(r) : 0);
            }
            if (c.json) write_or_print(all.size() == 1 ? all[0] : all, c);
            return worst;
        }
        if (cap->parsed()) {
            GraphSpec g = load_graph(c.input);
            const auto* bd = std::get_if<BirthDeath>(&g);
            if (!bd) throw InvalidSpec("capacity applies to birth-death chains");
            CapacityOptions o;
            o.schedule = parse_schedule(c.schedule);
            o.k = cap_k;
            o.budget = budget;
            CapacityRecord r = capacity(*bd, o);
            if (c.json) {
                write_or_print(capacity_to_json(r), c);
            } else {
                std::cout << "dichotomy: " << to_string(r.dichotomy) << "\n";
                for (const auto& [n, v] : r.minima)
                    std::cout << "  n=" << n << "  min=" << v << "\n";
                if (r.extrapolated) std::cout << "  extrapolated: " << *r.extrapolated << "\n";
                if (r.lower_bound) std::cout << "  duality lower bound: " << *r.lower_bound << "\n";
                std::cout << "  " << r.note << "\n";
            }
            return c.strict && r.dichotomy == CapacityRecord::Dichotomy::Inconclusive ? 2 : 0;
        }
        if (har->parsed()) {
            GraphSpec g = load_graph(c.input);
            HarmonicSolution v = [&]() {
                if (const auto* bd = std::get_if<BirthDeath>(&g))
                    return chain_harmonic(*bd, v0, v1, upto, budget);
                if (const auto* st = std::get_if<TwoRayStar>(&g))
                    return star_harmonic(*st, v0, v1, upto, budget);
                if (const auto* dc = std::get_if<DoubledChain>(&g))
                    return doubled_harmonic(*dc, v1, upto, budget);
                throw InvalidSpec("harmonic construction needs a chain, star or doubled chain");
            }();
            std::vector<Vertex> window;
            for (std::int64_t r = -upto; r <= upto; ++r) {
                try {
                    v.value(Vertex{0, r});
                    window.push_back(Vertex{0, r});
                } catch (const Error&) {
                }
            }
            // trim the window ends (and vertex 0 on chains, harmonic only away from it)
            double residual = max_harmonic_residual(
                v, std::vector<Vertex>(window.begin() + 1, window.end() - 1));
            nlohmann::json j = witness_to_json(v, upto, residual);
            if (c.json || !c.out.empty()) write_or_print(j, c);
            else
                std::cout << "C = " << v.flux() << ", residual " << residual << ", l2(+inf) "
                          << to_string(v.l2_pos().outcome) << ", l2(-inf) "
                          << to_string(v.l2_neg().outcome) << "\n";
            return 0;
        }
        if (grn->parsed()) {
            GraphSpec g = load_graph(c.input);
            std::vector<std::int64_t> sched = parse_schedule(c.schedule);
            std::vector<int> radii(sched.begin(), sched.end());
            GreenFunction gf = green_exhaustion(g, Vertex{0, 0}, radii);
            if (const auto* bd = std::get_if<BirthDeath>(&g)) {
                try {
                    std::cout << "closed form g(0) = " << green_closed_form(*bd, 0) << "\n";
                } catch (const NotTransient&) {
                    std::cout << "chain is recurrent: no closed form, exhaustion diverges\n";
                }
            }
            std::cout << "exhaustion g(pole) = " << gf.at(gf.pole) << " at radius "
                      << radii.back() << "\n";
            if (c.json || !c.out.empty()) write_or_print(green_to_json(gf), c);
            return 0;
        }
        if (lio->parsed()) {
            GraphSpec g = load_graph(c.input);
            if (const auto* st = std::get_if<TwoRayStar>(&g)) {
                LiouvilleOptions o;
                o.budget = budget;
                LiouvilleResult r = liouville_two_ray(*st, o);
                std::cout << "l2-liouville: " << to_string(r.verdict) << "\n";
                for (const auto& reason : r.reasons) std::cout << "  - " << reason << "\n";
                if (r.witness && (c.json || !c.out.empty()))
                    write_or_print(witness_to_json(*r.witness, 50, r.witness_residual), c);
                return c.strict && r.verdict == Liouville::Inconclusive ? 2 : 0;
            }
            if (const auto* sl = std::get_if<StarLike>(&g)) {
                try {
                    HarmonicSolution w = starlike_liouville_witness(*sl);
                    std::cout << "l2-liouville: fails (witness constructed, C = " << w.flux()
                              << ")\n";
                } catch (const Error& e) {
                    std::cout << "no witness: " << e.what() << "\n";
                }
                return 0;
            }
            if (const auto* dc = std::get_if<DoubledChain>(&g)) {
                SeriesVerdict ham = hamburger_esa(dc->base, budget);
                if (ham.converges()) {
                    HarmonicSolution w = doubled_harmonic(*dc, 1.0, 100, budget);
                    std::vector<Vertex> win{{0, 0}, {-2, 0}};
                    for (std::int64_t r = 1; r <= 80; ++r) {
                        win.push_back(Vertex{0, r});
                        win.push_back(Vertex{-1, r});
                    }
                    double res = max_harmonic_residual(w, win);
                    std::cout << "l2-liouville: fails (doubled witness, C = " << w.flux()
                              << ", residual " << res << ")\n";
                    if (c.json || !c.out.empty()) write_or_print(witness_to_json(w, 50, res), c);
                } else if (ham.diverges()) {
                    std::cout << "l2-liouville: holds (doubled graph is essentially self-adjoint)\n";
                } else {
                    std::cout << "l2-liouville: inconclusive\n";
                    return c.strict ? 2 : 0;
                }
                return 0;
            }
            throw InvalidSpec("liouville classification needs a two-ray star, star-like or doubled spec");
        }
        if (sch->parsed()) {
            GraphSpec g = load_graph(c.input);
            const auto* bd = std::get_if<BirthDeath>(&g);
            if (!bd) throw InvalidSpec("schrodinger criteria apply to birth-death chains");
            SeriesVerdict ber = berezanskii_esa(*bd, budget);
            std::cout << "potential-independent test: " << to_string(ber.outcome)
                      << (ber.diverges() ? "  (self-adjoint for every potential)" : "") << "\n";
            HcEquivalence hc = hc_equivalence(*bd, budget);
            std::cout << "counting-measure operator verdict: " << to_string(hc.esa.outcome)
                      << "\n";
            EsaPotential esa = make_esa_potential(*bd, budget);
            std::cout << "forcing potential W(0) = " << esa.W.at(0)
                      << ", certificate: " << to_string(esa.divergence_certificate.outcome)
                      << "\n";
            Potential W = Potential::from_sequence(SequenceSpec::constant(std::max(w_const, 1e-12)),
                                                   0.0);
            if (w_const > 0.0) {
                BoundedVResult bv = bounded_v_criterion(*bd, W, budget);
                std::cout << "bounded-solution series: " << to_string(bv.series.outcome) << "\n";
            }
            return 0;
        }
        if (con->parsed()) {
            if (op == "random-chain") {
                std::mt19937_64 rng(c.seed);
                BirthDeath bd{random_seq(rng), random_seq(rng)};
                write_or_print(graph_to_json(GraphSpec{bd}), c);
                return 0;
            }
            GraphSpec g = load_graph(c.input);
            const auto* bd = std::get_if<BirthDeath>(&g);
            if (!bd) throw InvalidSpec("constructions start from a birth-death chain");
            if (op == "double") {
                DoubledChain d = doubled_chain(*bd, c.bridge);
                write_or_print(graph_to_json(GraphSpec{d}), c);
            } else if (op == "pendants") {
                PendantResult p = attach_pendants(*bd, SequenceSpec::constant(pendant_c),
                                                  SequenceSpec::constant(pendant_c), budget);
                std::cout << "certificate: " << to_string(p.certificate.outcome)
                          << (p.esa_certified ? "  (supergraph certified)" : "") << "\n";
                write_or_print(graph_to_json(GraphSpec{p.graph}), c);
            } else if (op == "stability-break") {
                StabilityBreak sb = stability_break_example(
                    *bd, SequenceSpec::constant(pendant_c), SequenceSpec::constant(pendant_c),
                    budget);
                std::cout << "pendant certificate: " << to_string(sb.pendant_certificate.outcome)
                          << ", base series: " << to_string(sb.base_hamburger.outcome) << "\n";
                write_or_print(graph_to_json(GraphSpec{sb.graph}), c);
            }
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
