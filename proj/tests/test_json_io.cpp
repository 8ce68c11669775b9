#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "chainspec/json_io.hpp"

using namespace chainspec;

namespace {
SequenceSpec unit() { return SequenceSpec::constant(1.0); }
} // namespace

TEST_CASE("sequence round-trip across the tail families") {
    std::vector<SequenceSpec> specs{
        SequenceSpec::constant(2.0, {1.0, 3.0}),
        SequenceSpec::power(1.5, -2.5),
        SequenceSpec::exponential(0.5, 2.0, {7.0}),
        SequenceSpec::table_only({1.0, 2.0, 3.0}),
    };
    for (const auto& s : specs) {
        SequenceSpec back = sequence_from_json(sequence_to_json(s));
        CHECK(back == s);
    }
}

TEST_CASE("graph specs round-trip losslessly") {
    std::vector<GraphSpec> graphs;
    graphs.push_back(BirthDeath{unit(), SequenceSpec::power(1.0, -4.0)});
    graphs.push_back(TwoRayStar{unit(), SequenceSpec::exponential(1.0, 2.0), unit(),
                                SequenceSpec::power(1.0, -3.0)});
    StarLike sl;
    sl.hub = FiniteGraph::path(3, 0.5, 2.0);
    sl.rays.push_back(Ray{BirthDeath{unit(), unit()}, 1, 0.25});
    sl.family = RayFamily{SequenceSpec::exponential(1.0, 0.5), BirthDeath{unit(), unit()}, 0};
    graphs.push_back(sl);
    graphs.push_back(FiniteGraph::path(4, 2.0, 0.5));
    graphs.push_back(DoubledChain{BirthDeath{SequenceSpec::power(2.0, 1.0), unit()}, 3.0});
    graphs.push_back(PendantChain{BirthDeath{unit(), unit()}, SequenceSpec::constant(2.0),
                                  SequenceSpec::exponential(1.0, 0.5)});
    for (const GraphSpec& g : graphs) {
        nlohmann::json j = graph_to_json(g);
        GraphSpec back = graph_from_json(j);
        CHECK(graph_to_json(back) == j);
        CHECK(kind_name(back) == kind_name(g));
    }
}

TEST_CASE("parse errors carry location context") {
    const char* path = "/tmp/chainspec_bad_spec.json";
    {
        std::ofstream f(path);
        f << "{\n  \"kind\": birth_death\n}\n";
    }
    try {
        load_graph(path);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find(":2:") != std::string::npos); // line of the bad token
    }
    std::remove(path);

    // structurally valid JSON with a wrong shape is also a parse error
    {
        std::ofstream f(path);
        f << "{\"kind\": \"birth_death\"}\n";
    }
    CHECK_THROWS_AS(load_graph(path), Error);
    std::remove(path);
}

TEST_CASE("save and load through a file") {
    const char* path = "/tmp/chainspec_roundtrip.json";
    GraphSpec g = BirthDeath{SequenceSpec::exponential(1.0, 2.0), unit()};
    save_graph(g, path);
    GraphSpec back = load_graph(path);
    CHECK(graph_to_json(back) == graph_to_json(g));
    std::remove(path);
}

TEST_CASE("report JSON round-trips") {
    ClassifyOptions opt;
    opt.with_capacity = false;
    PropertyReport rep = classify(GraphSpec{BirthDeath{unit(), unit()}}, opt);
    nlohmann::json j = report_to_json(rep);
    CHECK(j.at("schema") == "chainspec/1");
    PropertyReport back = report_from_json(j);
    CHECK(report_to_json(back) == j);
}

TEST_CASE("capacity record serialization carries the evidence") {
    BirthDeath c{unit(), SequenceSpec::power(1.0, -4.0)};
    CapacityOptions o;
    o.schedule = {25, 50, 100};
    nlohmann::json j = capacity_to_json(capacity(c, o));
    CHECK(j.at("minima").size() == 3);
    CHECK(j.at("dichotomy") == "positive-finite");
    CHECK(j.contains("lower_bound"));
    CHECK(j.contains("minimizer"));
}

TEST_CASE("witness export carries values and verdicts") {
    TwoRayStar st{unit(), unit(), SequenceSpec::power(1.0, -4.0), SequenceSpec::power(1.0, -4.0)};
    HarmonicSolution v = star_harmonic(st, 0.0, 1.0, 30);
    nlohmann::json j = witness_to_json(v, 10, 0.0);
    CHECK(j.at("values").size() == 21);
    CHECK(j.at("values").at("-10").get<double>() == doctest::Approx(-10.0));
    CHECK(j.at("C") == v.flux());
    CHECK(j.at("l2_pos").at("outcome") == "converges");
}

TEST_CASE("structurally wrong specs raise parse errors, not crashes") {
    auto reject = [](const char* text) {
        nlohmann::json j = nlohmann::json::parse(text);
        CHECK_THROWS_AS(graph_from_json(j), Error);
    };
    reject(R"({"kind": "birth_death"})");                         // missing fields
    reject(R"({"kind": "unknown_kind"})");                        // bad kind
    reject(R"({"kind": "birth_death", "edge": 5, "measure": 5})"); // wrong types
    reject(R"({"kind": "finite_graph", "n": 2, "weights": [[0, 7, 1.0]], "measure": [1, 1]})");
    reject(R"({"kind": "birth_death",
               "edge": {"table": [-1.0], "tail": {"family": "none"}},
               "measure": {"table": [], "tail": {"family": "const", "c": 1}}})");
}
