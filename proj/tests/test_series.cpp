#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chainspec/series.hpp"

using namespace chainspec;

namespace {

// independent brute-force partial sum of the Hamburger-type series
double brute_hamburger(const SequenceSpec& edge, const SequenceSpec& measure, std::int64_t n) {
    double S = 0.0, sum = 0.0;
    for (std::int64_t r = 0; r < n; ++r) {
        S += 1.0 / edge.at(static_cast<std::size_t>(r));
        sum += S * S * measure.at(static_cast<std::size_t>(r + 1));
    }
    return sum;
}

SequenceSpec unit() { return SequenceSpec::constant(1.0); }

} // namespace

TEST_CASE("term asymptotics of the catalogued shapes") {
    auto t = term_asymptotics(SequenceSpec::power(1.0, 0.0), SequenceSpec::power(1.0, -4.0),
                              SeriesShape::Hamburger);
    REQUIRE(t.has_value());
    CHECK(t->base == 1.0);
    CHECK(t->power == doctest::Approx(-2.0)); // r^2 * r^-4

    auto t2 = term_asymptotics(SequenceSpec::power(1.0, 0.0), SequenceSpec::power(1.0, 0.0),
                               SeriesShape::Hamburger);
    CHECK(t2->power == doctest::Approx(2.0));

    auto t3 = term_asymptotics(SequenceSpec::exponential(1.0, 2.0), unit(),
                               SeriesShape::Recurrence);
    CHECK(t3->base == doctest::Approx(0.5));
}

TEST_CASE("Hamburger decisions at the alpha family") {
    SequenceSpec b = unit();
    CHECK(decide_series(b, SequenceSpec::power(1.0, -4.0), SeriesShape::Hamburger).converges());
    CHECK(decide_series(b, unit(), SeriesShape::Hamburger).diverges());
    // alpha = 3 sits on the divergent side of the threshold
    CHECK(decide_series(b, SequenceSpec::power(1.0, -3.0), SeriesShape::Hamburger).diverges());
    CHECK(decide_series(b, SequenceSpec::power(1.0, -2.5), SeriesShape::Hamburger).diverges());
    CHECK(decide_series(b, SequenceSpec::power(1.0, -3.5), SeriesShape::Hamburger).converges());
}

TEST_CASE("convergent estimate dominates the brute-force oracle") {
    SequenceSpec b = unit(), m = SequenceSpec::power(1.0, -4.0);
    SeriesVerdict v = decide_series(b, m, SeriesShape::Hamburger);
    REQUIRE(v.converges());
    REQUIRE(v.estimate.has_value());
    double oracle = brute_hamburger(b, m, 400000);
    CHECK(*v.estimate >= oracle);
    CHECK(*v.estimate == doctest::Approx(oracle).epsilon(1e-3));
    // partial sums never exceed the estimate
    for (const auto& [i, s] : v.evidence.partial_sums) {
        (void)i;
        CHECK(s <= *v.estimate * (1.0 + 1e-12));
    }
}

TEST_CASE("log-power refinement at the borderline") {
    // edge (k+1): S_r ~ log r; with m = (r+1)^-1 the term is log^2 r / r -> diverges
    CHECK(decide_series(SequenceSpec::power(1.0, 1.0), SequenceSpec::power(1.0, -1.0),
                        SeriesShape::Hamburger)
              .diverges());
    // with m = (r+1)^-1.5 it converges
    CHECK(decide_series(SequenceSpec::power(1.0, 1.0), SequenceSpec::power(1.0, -1.5),
                        SeriesShape::Hamburger)
              .converges());
}

TEST_CASE("numeric path: ratio test, blow threshold, honest inconclusive") {
    SeriesBudget bud;
    bud.budget = 20000;
    auto geometric = [](std::int64_t r) { return std::pow(0.9, static_cast<double>(r)); };
    SeriesVerdict g = decide_numeric(geometric, bud);
    CHECK(g.converges());
    CHECK(*g.estimate == doctest::Approx(10.0).epsilon(1e-6));

    SeriesBudget small;
    small.budget = 4096;
    small.blow_threshold = 1e3;
    auto ones = [](std::int64_t) { return 1.0; };
    CHECK(decide_numeric(ones, small).diverges());

    // polynomially convergent: the ratio test must stay silent
    auto poly = [](std::int64_t r) { return std::pow(static_cast<double>(r + 1), -1.2); };
    SeriesVerdict p = decide_numeric(poly, bud);
    CHECK(p.inconclusive());
    CHECK(!p.evidence.partial_sums.empty());
}

TEST_CASE("partial sums are nondecreasing in the budget") {
    auto term = series_term_fn(unit(), SequenceSpec::power(1.0, -4.0), SeriesShape::Hamburger);
    double s1 = 0.0;
    for (std::int64_t r = 0; r < 1000; ++r) s1 += term(r);
    auto term2 = series_term_fn(unit(), SequenceSpec::power(1.0, -4.0), SeriesShape::Hamburger);
    double s2 = 0.0;
    for (std::int64_t r = 0; r < 10000; ++r) s2 += term2(r);
    CHECK(s2 >= s1);
}

TEST_CASE("symbolic decisions agree with the partial-sum trend on random draws") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pw(-2.0, 2.0), alpha(-5.0, 1.0), basep(0.3, 3.0);
    int checked = 0;
    for (int t = 0; t < 20; ++t) {
        SequenceSpec b, m;
        if (t % 2 == 0) b = SequenceSpec::power(1.0, pw(rng));
        else b = SequenceSpec::exponential(1.0, basep(rng));
        m = SequenceSpec::power(1.0, alpha(rng));
        auto dom = term_asymptotics(b, m, SeriesShape::Hamburger);
        REQUIRE(dom.has_value());
        SeriesVerdict v = decide_series(b, m, SeriesShape::Hamburger);
        double p3 = brute_hamburger(b, m, 1000);
        if (v.diverges() && dom->base == 1.0 && dom->power >= -0.5) {
            double p6 = brute_hamburger(b, m, 1000000);
            CHECK(p6 >= 10.0 * p3);
            ++checked;
        } else if (v.converges()) {
            double p5 = brute_hamburger(b, m, 100000);
            CHECK(*v.estimate >= p5 - 1e-12 * std::abs(p5));
            CHECK(*v.estimate - p3 >= p5 - p3); // tail bound covers the gap
            ++checked;
        }
    }
    CHECK(checked >= 10);
}

TEST_CASE("pendant shape follows the degree ratio limit") {
    // unit pendants: terms (1/2)^2 -> diverges
    CHECK(decide_series(unit(), unit(), SeriesShape::Pendant).diverges());
    // pendant measure 4^-r: degree ratio explodes, terms ~ m -> converges
    CHECK(decide_series(unit(), SequenceSpec::exponential(1.0, 0.25), SeriesShape::Pendant)
              .converges());
}

TEST_CASE("GreenL2 shape requires a transient end") {
    CHECK_THROWS_AS(decide_series(unit(), unit(), SeriesShape::GreenL2), NotTransient);
    SeriesVerdict v =
        decide_series(SequenceSpec::exponential(1.0, 2.0), unit(), SeriesShape::GreenL2);
    CHECK(v.converges()); // sum 4^(1-r) < inf
    SeriesVerdict w = decide_series(SequenceSpec::exponential(1.0, 2.0),
                                    SequenceSpec::exponential(1.0, 4.0), SeriesShape::GreenL2);
    CHECK(w.diverges()); // terms 4^(1-r) * 4^r stay of order one
}

TEST_CASE("verdict invariants") {
    SeriesVerdict c = decide_series(unit(), SequenceSpec::power(1.0, -4.0), SeriesShape::Measure);
    CHECK(c.converges());
    CHECK(c.estimate.has_value()); // Converges => estimate present
    SeriesBudget bud;
    bud.budget = 512;
    auto poly = [](std::int64_t r) { return std::pow(static_cast<double>(r + 1), -1.1); };
    SeriesVerdict i = decide_numeric(poly, bud);
    CHECK(i.inconclusive());
    CHECK(!i.evidence.partial_sums.empty()); // Inconclusive => evidence present
}
