#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chainspec/sequence.hpp"

using namespace chainspec;

TEST_CASE("evaluation: table lookup and tail formulas") {
    CHECK(SequenceSpec::power(1.0, -4.0, {1.0}).at(0) == 1.0);
    CHECK(SequenceSpec::power(1.0, -4.0).at(3) == doctest::Approx(0.00390625).epsilon(1e-15));
    CHECK(SequenceSpec::exponential(1.0, 0.5, {2.0, 3.0}).at(5) ==
          doctest::Approx(0.03125).epsilon(1e-15));
    CHECK(SequenceSpec::constant(7.0).at(123456) == 7.0);
}

TEST_CASE("evaluation beyond the table without a tail is an error") {
    SequenceSpec s = SequenceSpec::table_only({1.0, 2.0});
    CHECK(s.at(1) == 2.0);
    CHECK_THROWS_AS(s.at(2), IndexBeyondTable);
}

TEST_CASE("validation rejects nonpositive data") {
    CHECK_THROWS_AS(SequenceSpec::table_only({1.0, 0.0}), InvalidSpec);
    CHECK_THROWS_AS(SequenceSpec::table_only({1.0, -2.0}), InvalidSpec);
    CHECK_THROWS_AS(SequenceSpec::constant(0.0), InvalidSpec);
    CHECK_THROWS_AS(SequenceSpec::exponential(1.0, -1.0), InvalidSpec);
}

TEST_CASE("strict positivity and determinism on random analytic specs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(0.1, 5.0), pw(-4.0, 3.0), base(0.25, 4.0);
    for (int t = 0; t < 50; ++t) {
        SequenceSpec s;
        switch (t % 3) {
            case 0: s = SequenceSpec::constant(coef(rng)); break;
            case 1: s = SequenceSpec::power(coef(rng), pw(rng)); break;
            default: s = SequenceSpec::exponential(coef(rng), base(rng)); break;
        }
        for (std::size_t k : {0u, 1u, 5u, 100u}) {
            double v = s.at(k);
            CHECK(v > 0.0);
            CHECK(std::isfinite(v));
            CHECK(s.at(k) == v);
        }
    }
}

TEST_CASE("geometric tail sums are exact") {
    // sum 2^-k from 0 = 2
    auto t = tail_sum(SequenceSpec::exponential(1.0, 0.5), 0);
    REQUIRE(t.has_value());
    CHECK(t->value == doctest::Approx(2.0).epsilon(1e-14));
    // reciprocal of edge 2^k: same series
    auto r = tail_sum_reciprocal(SequenceSpec::exponential(1.0, 2.0), 0);
    REQUIRE(r.has_value());
    CHECK(r->value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(tail_sum_reciprocal(SequenceSpec::exponential(1.0, 2.0), 2)->value ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("power tail sums against the zeta oracle") {
    // sum (k+1)^-2, k >= 0 equals pi^2/6
    auto t = tail_sum(SequenceSpec::power(1.0, -2.0), 0);
    REQUIRE(t.has_value());
    CHECK(t->value == doctest::Approx(1.6449340668482264).epsilon(1e-12));
    CHECK(t->error < 1e-10);
    // sum (k+1)^-4 = pi^4/90
    auto q = tail_sum(SequenceSpec::power(1.0, -4.0), 0);
    CHECK(q->value == doctest::Approx(1.0823232337111382).epsilon(1e-12));
}

TEST_CASE("divergent tails report no sum") {
    CHECK(!tail_sum(SequenceSpec::constant(1.0), 0).has_value());
    CHECK(!tail_sum(SequenceSpec::power(1.0, -1.0), 0).has_value());
    CHECK(!tail_sum(SequenceSpec::exponential(1.0, 1.5), 0).has_value());
    CHECK(!tail_sum_reciprocal(SequenceSpec::power(1.0, 1.0), 0).has_value()); // harmonic
}

TEST_CASE("table prefix participates in the sum") {
    // table [4, 4] then 2^-k tail from k=2: sum from 0 = 8 + 0.5 = 8.5
    auto t = tail_sum(SequenceSpec::exponential(1.0, 0.5, {4.0, 4.0}), 0);
    CHECK(t->value == doctest::Approx(8.5).epsilon(1e-14));
    auto mid = tail_sum(SequenceSpec::exponential(1.0, 0.5, {4.0, 4.0}), 1);
    CHECK(mid->value == doctest::Approx(4.5).epsilon(1e-14));
}
