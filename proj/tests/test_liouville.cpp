#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chainspec/liouville.hpp"

using namespace chainspec;

namespace {

SequenceSpec unit() { return SequenceSpec::constant(1.0); }

TwoRayStar mirrored(SequenceSpec b, SequenceSpec m) {
    return TwoRayStar{b, b, m, m};
}

} // namespace

TEST_CASE("recurrent star, both end tests fail: witness exists") {
    TwoRayStar st = mirrored(unit(), SequenceSpec::power(1.0, -4.0));
    LiouvilleResult r = liouville_two_ray(st);
    CHECK(r.verdict == Liouville::Fails);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->l2_pos().converges());
    CHECK(r.witness->l2_neg().converges());
    CHECK(r.witness_residual <= 1e-10 * std::max(1.0, std::abs(r.witness->flux())));
    // the witness is the identity-like unbounded function
    CHECK(r.witness->value(Vertex{0, 10}) > r.witness->value(Vertex{0, 5}));
}

TEST_CASE("recurrent star with a passing end holds") {
    TwoRayStar st = mirrored(unit(), unit());
    LiouvilleResult r = liouville_two_ray(st);
    CHECK(r.verdict == Liouville::Holds);
    CHECK(!r.witness.has_value());
}

TEST_CASE("transient at both ends with finite total measure fails") {
    TwoRayStar st = mirrored(SequenceSpec::exponential(1.0, 2.0),
                             SequenceSpec::exponential(1.0, 0.5));
    LiouvilleResult r = liouville_two_ray(st);
    CHECK(r.verdict == Liouville::Fails);
    REQUIRE(r.witness.has_value());
    bool cites_measure = false;
    for (const auto& reason : r.reasons)
        cites_measure = cites_measure || reason.find("total measure finite") != std::string::npos;
    CHECK(cites_measure);
    // the witness is bounded: transient at both ends
    double far = std::abs(r.witness->value(Vertex{0, 60}));
    CHECK(far < 10.0);
}

TEST_CASE("transient at both ends with infinite measure on both sides holds") {
    TwoRayStar st = mirrored(SequenceSpec::exponential(1.0, 2.0), unit());
    LiouvilleResult r = liouville_two_ray(st);
    CHECK(r.verdict == Liouville::Holds);
}

TEST_CASE("mixed ends: recurrent side decides together with the transient data") {
    // transient at +inf, recurrent at -inf with failing series test there,
    // and the green function square-summable at +inf
    TwoRayStar st{SequenceSpec::exponential(1.0, 2.0), unit(), unit(),
                  SequenceSpec::power(1.0, -4.0)};
    LiouvilleResult r = liouville_two_ray(st);
    CHECK(r.verdict == Liouville::Fails);
    REQUIRE(r.witness.has_value());
    // vanishing at the transient end
    CHECK(std::abs(r.witness->value(Vertex{0, 80})) < 1e-10);

    // same star but the recurrent side passes the test: holds
    TwoRayStar ok{SequenceSpec::exponential(1.0, 2.0), unit(), unit(), unit()};
    CHECK(liouville_two_ray(ok).verdict == Liouville::Holds);
}

TEST_CASE("transient only at the negative end, mirrored case") {
    TwoRayStar st{unit(), SequenceSpec::exponential(1.0, 2.0), SequenceSpec::power(1.0, -4.0),
                  unit()};
    LiouvilleResult r = liouville_two_ray(st);
    CHECK(r.verdict == Liouville::Fails);
    REQUIRE(r.witness.has_value());
    CHECK(std::abs(r.witness->value(Vertex{0, -80})) < 1e-10);
}

TEST_CASE("star-like green membership per ray") {
    StarLike g;
    g.hub = FiniteGraph::single();
    g.rays.push_back(Ray{BirthDeath{SequenceSpec::exponential(1.0, 2.0), unit()}, 0, 1.0});
    g.rays.push_back(Ray{BirthDeath{SequenceSpec::exponential(1.0, 2.0), unit()}, 0, 1.0});
    CHECK(starlike_green_l2(g) == CheckVerdict::Holds);
    // a recurrent ray with infinite measure breaks membership
    StarLike h = g;
    h.rays.push_back(Ray{BirthDeath{unit(), unit()}, 0, 1.0});
    CHECK(starlike_green_l2(h) == CheckVerdict::Fails);
}

TEST_CASE("star-like witness: construction and verification") {
    // hub with two geometric rays; the second carries a summable measure so
    // its chain fails the series test
    StarLike g;
    g.hub = FiniteGraph::single();
    g.rays.push_back(Ray{BirthDeath{SequenceSpec::exponential(1.0, 2.0), unit()}, 0, 1.0});
    g.rays.push_back(
        Ray{BirthDeath{SequenceSpec::exponential(1.0, 2.0), SequenceSpec::exponential(1.0, 0.5)},
            0, 1.0});
    StarWitnessOptions opt;
    HarmonicSolution w = starlike_liouville_witness(g, opt);
    CHECK(w.flux() > 0.0);
    CHECK(w.l2_pos().converges());

    // residual over hub + near-ray vertices (well inside the exhaustion radius)
    std::vector<Vertex> window{{0, 0}};
    for (int comp = 1; comp <= 2; ++comp)
        for (std::int64_t r = 0; r <= 15; ++r) window.push_back(Vertex{comp, r});
    CHECK(max_harmonic_residual(w, window) <= 1e-10 * std::max(1.0, w.flux()));
}

TEST_CASE("star-like witness preconditions") {
    StarLike all_pass;
    all_pass.hub = FiniteGraph::single();
    all_pass.rays.push_back(Ray{BirthDeath{unit(), unit()}, 0, 1.0});
    CHECK_THROWS_AS(starlike_liouville_witness(all_pass), NoNonEsaRay);

    // failing ray but the green function is not square-summable: a recurrent
    // ray with infinite measure blocks membership
    StarLike not_l2;
    not_l2.hub = FiniteGraph::single();
    not_l2.rays.push_back(
        Ray{BirthDeath{SequenceSpec::exponential(1.0, 2.0), SequenceSpec::exponential(1.0, 0.5)},
            0, 1.0});
    not_l2.rays.push_back(Ray{BirthDeath{unit(), unit()}, 0, 1.0});
    CHECK_THROWS_AS(starlike_liouville_witness(not_l2), GreenNotL2);
}

TEST_CASE("non-dyadic geometric stars verify through the row-relative residual") {
    // bases that are not powers of two: deep-index increments drop below any
    // fixed-precision resolution, so only the row-relative check is meaningful
    for (double q : {3.0, 1.7}) {
        TwoRayStar st{SequenceSpec::exponential(1.0, q), SequenceSpec::exponential(1.0, q),
                      SequenceSpec::exponential(1.0, 1.0 / q),
                      SequenceSpec::exponential(1.0, 1.0 / q)};
        LiouvilleResult r = liouville_two_ray(st);
        CHECK(r.verdict == Liouville::Fails);
        REQUIRE(r.witness.has_value());
        CHECK(r.witness_residual <= 1e-10);
    }
}
