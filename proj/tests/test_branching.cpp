#include "bce/branching.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

using namespace bce;

namespace {

BranchingVector vec(std::initializer_list<int> xs) { return BranchingVector{xs}; }

double residual(const BranchingVector& b, double a) {
    double s = 0;
    for (int e : b.entries) s += std::pow(a, -static_cast<double>(e));
    return 1.0 - s;
}

}  // namespace

TEST_CASE("closed-form branching factors") {
    CHECK(branching_factor(vec({1, 1})).value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(branching_factor(vec({1, 2})).value ==
          doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-9));
    CHECK(branching_factor(vec({1})).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("factors of the solver's refined rules stay under their bounds") {
    double deg1 = branching_factor(vec({1, 2, 3, 3, 4})).value;
    CHECK(deg1 < 2.066);
    CHECK(deg1 > 2.0);
    double twins = branching_factor(vec({1, 2, 2, 3, 3, 4})).value;
    CHECK(twins < 2.317);
    CHECK(twins > deg1);
    double c2d3 = branching_factor(vec({2, 2, 2, 2, 3, 3, 3, 3})).value;
    CHECK(c2d3 == doctest::Approx(2.3830).epsilon(1e-3));
    CHECK(c2d3 < 2.39);
}

TEST_CASE("lrr closed forms and bounds") {
    CHECK(lrr_cd(1, 2).value == doctest::Approx(1.0 + std::sqrt(5.0)).epsilon(1e-7));
    CHECK(lrr_cd(1, 2).value < 3.237);
    CHECK(lrr_cd(2, 1).value == doctest::Approx(lrr_cd(1, 2).value).epsilon(1e-7));
    CHECK(lrr_cd(3, 3).value == doctest::Approx(std::cbrt(16.0)).epsilon(1e-7));
    CHECK(lrr_cd(4, 2).value <= 2.55);
    CHECK(lrr_cd(2, 4).value <= 2.55);
    CHECK(lrr_cd(1, 6).value <= 2.58);
    CHECK(lrr_cd(1, 1).value == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("lrr_cd equals the factor of its expanded vector") {
    for (int c = 1; c <= 4; ++c) {
        for (int d = 1; d <= 4; ++d) {
            BranchingVector b;
            for (int i = 0; i < (1 << c); ++i) b.entries.push_back(c);
            for (int i = 0; i < (1 << d); ++i) b.entries.push_back(d);
            CHECK(lrr_cd(c, d).value == doctest::Approx(branching_factor(b).value).epsilon(1e-7));
        }
    }
}

TEST_CASE("lrr_cd guards oversized exponents") {
    CHECK_THROWS_AS(lrr_cd(31, 2), std::invalid_argument);
    CHECK_THROWS_AS(lrr_cd(0, 2), std::invalid_argument);
}

TEST_CASE("root certificates bracket the returned value") {
    for (auto b : {vec({1, 2, 3, 3, 4}), vec({2, 2}), vec({1, 5, 5, 5}), vec({3})}) {
        RootResult r = branching_factor(b, 1e-9);
        CHECK(residual(b, r.value - 2e-9) < 0);
        CHECK(residual(b, r.value + 2e-9) > 0);
    }
}

TEST_CASE("lrr monotonicity in both arguments") {
    for (int c = 1; c <= 8; ++c) {
        for (int d = 1; d <= 8; ++d) {
            double here = lrr_cd(c, d).value;
            CHECK(here >= lrr_cd(c + 1, d).value - 1e-6);
            CHECK(here >= lrr_cd(c, d + 1).value - 1e-6);
        }
    }
}

TEST_CASE("the better relation") {
    CHECK(is_better(vec({1, 2, 3, 3, 4}), vec({1, 2, 2, 3, 3, 4})));
    CHECK(is_better(vec({2, 1, 3}), vec({2, 1, 3})));
    CHECK_FALSE(is_better(vec({1, 1, 1}), vec({2})));
    CHECK_FALSE(is_better(vec({1, 2, 2, 3, 3, 4}), vec({1, 2, 3, 3, 4})));
}

TEST_CASE("better vectors never have larger factors (fuzz)") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        BranchingVector a, b;
        int n = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < n; ++i) a.entries.push_back(1 + static_cast<int>(rng() % 6));
        int m = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < m; ++i) b.entries.push_back(1 + static_cast<int>(rng() % 6));
        if (is_better(a, b))
            CHECK(branching_factor(a).value <= branching_factor(b).value + 1e-7);
    }
}

TEST_CASE("composing vectors") {
    SUBCASE("expanding all four entries of (2,2,2,2)") {
        BranchingVector outer = vec({2, 2, 2, 2});
        std::map<int, BranchingVector> reps;
        for (int i = 0; i < 4; ++i) reps[i] = vec({1, 2, 2, 3, 3, 4});
        BranchingVector got = compose(outer, reps);
        std::vector<int> sorted = got.entries;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expect;
        for (int v : {3, 4, 4, 5, 5, 6})
            for (int i = 0; i < 4; ++i) expect.push_back(v);
        std::sort(expect.begin(), expect.end());
        CHECK(sorted == expect);
    }
    SUBCASE("no replacement is the identity") {
        BranchingVector outer = vec({3, 1, 4});
        CHECK(compose(outer, {}).entries == outer.entries);
    }
    SUBCASE("entries shift additively") {
        CHECK(compose(vec({1}), {{0, vec({1, 1})}}).entries == std::vector<int>{2, 2});
    }
    SUBCASE("bad position") {
        CHECK_THROWS_AS(compose(vec({1}), {{2, vec({1})}}), std::invalid_argument);
    }
}

TEST_CASE("the worst-case composite vector has factor 2.581") {
    // four copies of (3,4,4,5,5,6), two plain 2-branches, and two copies of
    // (3,4,5,5,6); as a multiset: {2x2, 6x3, 10x4, 12x5, 6x6}.
    BranchingVector b;
    auto add = [&](int v, int times) {
        for (int i = 0; i < times; ++i) b.entries.push_back(v);
    };
    add(2, 2);
    add(3, 6);
    add(4, 10);
    add(5, 12);
    add(6, 6);
    CHECK(branching_factor(b).value == doctest::Approx(2.581).epsilon(1e-2 / 2.581));
}

TEST_CASE("vector text form") {
    CHECK(parse_vector("1,2,3,3,4").entries == std::vector<int>{1, 2, 3, 3, 4});
    CHECK(vec({1, 2, 3}).to_text() == "1,2,3");
    CHECK_THROWS_AS(parse_vector("1,,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vector("1,x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vector("0,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vector(""), std::invalid_argument);
}
