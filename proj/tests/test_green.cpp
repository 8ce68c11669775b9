#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chainspec/green.hpp"

using namespace chainspec;

namespace {
SequenceSpec unit() { return SequenceSpec::constant(1.0); }
} // namespace

TEST_CASE("closed form on the geometric chain") {
    BirthDeath c{SequenceSpec::exponential(1.0, 2.0), unit()};
    CHECK(green_closed_form(c, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(green_closed_form(c, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(green_closed_form(c, 2) == doctest::Approx(0.5).epsilon(1e-14));
    // the ratio g(r+1)/g(r) is the geometric base
    for (std::size_t r = 0; r < 6; ++r)
        CHECK(green_closed_form(c, r + 1) / green_closed_form(c, r) ==
              doctest::Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_AS(green_closed_form(BirthDeath{unit(), unit()}, 0), NotTransient);
}

TEST_CASE("exhaustion matches the closed form on a transient chain") {
    BirthDeath c{SequenceSpec::exponential(1.0, 2.0), unit()};
    GreenFunction g = green_exhaustion(GraphSpec{c}, Vertex{0, 0}, {20, 40, 60});
    CHECK(g.at(Vertex{0, 0}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(g.at(Vertex{0, 0}) - green_closed_form(c, 0)) < 1e-9);
    CHECK(std::abs(g.at(Vertex{0, 3}) - green_closed_form(c, 3)) < 1e-9);
    // monotone certificate recorded for each consecutive pair of radii
    CHECK(g.monotone_certificate.size() == 2);
    for (double d : g.monotone_certificate) CHECK(d <= 1e-10);
}

TEST_CASE("finite path with a Dirichlet vertex solves by hand") {
    // path 0-1-2, unit weights and measure, pole 0, Dirichlet at 2:
    // g(0)-g(1) = 1 and 2g(1) = g(0) gives g(0) = 2, g(1) = 1
    FiniteGraph p = FiniteGraph::path(3);
    GreenFunction g = green_exhaustion(GraphSpec{p}, Vertex{0, 0}, {2});
    CHECK(g.at(Vertex{0, 0}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.at(Vertex{0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("recurrent chain exhibits linear growth of the pole value") {
    BirthDeath c{unit(), unit()};
    for (int R : {10, 100, 1000}) {
        GreenFunction g = green_exhaustion(GraphSpec{c}, Vertex{0, 0}, {R});
        CHECK(g.at(Vertex{0, 0}) == doctest::Approx(static_cast<double>(R)).epsilon(1e-9));
    }
}

TEST_CASE("two-ray exhaustion splits the unit flux") {
    // symmetric geometric star: g(0) is half the single-chain value
    TwoRayStar st{SequenceSpec::exponential(1.0, 2.0), SequenceSpec::exponential(1.0, 2.0),
                  unit(), unit()};
    GreenFunction g = green_exhaustion(GraphSpec{st}, Vertex{0, 0}, {30, 60});
    CHECK(g.at(Vertex{0, 0}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("green tail square-summability per end") {
    CHECK(green_l2_end(SequenceSpec::exponential(1.0, 2.0), unit()).converges());
    CHECK(green_l2_end(SequenceSpec::exponential(1.0, 2.0), SequenceSpec::exponential(1.0, 4.0))
              .diverges());
    CHECK_THROWS_AS(green_l2_end(unit(), unit()), EndNotTransient);

    TwoRayStar st{SequenceSpec::exponential(1.0, 2.0), SequenceSpec::exponential(1.0, 2.0),
                  unit(), unit()};
    CHECK(green_l2_end(st, StarEnd::Pos).converges());
    CHECK(green_l2_end(st, StarEnd::Neg).converges());
}

TEST_CASE("pole comparability on finite windows") {
    // identical poles compare with constant one; adjacent poles verified level by level
    FiniteGraph p = FiniteGraph::path(12);
    double c_same = green_pole_comparability(GraphSpec{p}, Vertex{0, 2}, Vertex{0, 2}, {4, 6, 8});
    CHECK(c_same >= 1.0 - 1e-12);
    double c_adj = green_pole_comparability(GraphSpec{p}, Vertex{0, 2}, Vertex{0, 3}, {4, 6, 8});
    CHECK(c_adj > 0.0);

    BirthDeath geo{SequenceSpec::exponential(1.0, 2.0), unit()};
    double c_chain =
        green_pole_comparability(GraphSpec{geo}, Vertex{0, 0}, Vertex{0, 2}, {20, 40, 60});
    CHECK(c_chain > 0.0);
}

TEST_CASE("disconnected windows are rejected") {
    FiniteGraph two;
    two.n = 4;
    two.weights.assign(4, std::vector<double>(4, 0.0));
    two.weights[0][1] = two.weights[1][0] = 1.0;
    two.weights[2][3] = two.weights[3][2] = 1.0;
    two.measure.assign(4, 1.0);
    CHECK_THROWS_AS(
        green_pole_comparability(GraphSpec{two}, Vertex{0, 0}, Vertex{0, 2}, {3}),
        WindowDisconnected);
    // no Dirichlet sphere within the component: the system is singular
    CHECK_THROWS_AS(green_exhaustion(GraphSpec{two}, Vertex{0, 0}, {3}), SingularSystem);
}

TEST_CASE("pendant vertices carry no flux: spine solves unchanged") {
    // dead-end pendants equalize with their spine vertex, so the pole value
    // matches the plain chain
    BirthDeath base{SequenceSpec::exponential(1.0, 2.0), unit()};
    PendantChain pc{base, unit(), unit()};
    GreenFunction g = green_exhaustion(GraphSpec{pc}, Vertex{0, 0}, {30, 60});
    CHECK(g.at(Vertex{0, 0}) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(g.at(Vertex{1, 3}) == doctest::Approx(g.at(Vertex{0, 3})).epsilon(1e-12));
}

TEST_CASE("doubled chain splits the escape flux between the two copies") {
    // resistances: positive ray 2; bridge + mirror ray 1 + 2 = 3; parallel 6/5
    DoubledChain dc{BirthDeath{SequenceSpec::exponential(1.0, 2.0), unit()}, 1.0};
    GreenFunction g = green_exhaustion(GraphSpec{dc}, Vertex{0, 0}, {40, 80});
    CHECK(g.at(Vertex{0, 0}) == doctest::Approx(1.2).epsilon(1e-9));
}
