#include <doctest.h>

#include <cmath>
#include <random>

#include "acw/error.hpp"
#include "acw/numeric.hpp"

using namespace acw;

TEST_CASE("rational parsing and rendering") {
    CHECK(to_string(parse_rational("10/16")) == "5/8");
    CHECK(to_string(parse_rational(" -3 ")) == "-3");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK(to_decimal(Rational(1, 3)) == "3.33333333333e-01");
    CHECK(to_decimal(Rational(2, 3), 3) == "6.67e-01");
    CHECK(to_decimal(Rational(1999, 200), 3) == "1.00e+01");
    CHECK(to_decimal(Rational(-5, 2), 2) == "-2.5e+00");
    CHECK(to_decimal(Rational(0)) == "0");
    CHECK(to_decimal(Rational(1, 1000)) == "1.00000000000e-03");
}

TEST_CASE("factorisation") {
    auto f = factor(BigInt(360));
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::pair<BigInt, unsigned long>(2, 3));
    CHECK(f[1] == std::pair<BigInt, unsigned long>(3, 2));
    CHECK(f[2] == std::pair<BigInt, unsigned long>(5, 1));
    CHECK(factor(BigInt(1)).empty());
    BigInt p("1000000007");
    auto g = factor(p * p);
    REQUIRE(g.size() == 1);
    CHECK(g[0].second == 2);
    CHECK(ceil_root(BigInt(27), 3) == 3);
    CHECK(ceil_root(BigInt(28), 3) == 4);
}

TEST_CASE("root sums simplify perfect powers") {
    RootSum s(3);
    s.add_power(Rational(8), 1);
    REQUIRE(s.as_rational());
    CHECK(*s.as_rational() == 2);

    RootSum t(2);
    t.add_power(Rational(2), 1);
    t.add_power(Rational(8), 1);  // sqrt 8 = 2 sqrt 2
    CHECK(t.term_count() == 1);
    CHECK(t.terms().at(BigInt(2)) == 3);

    RootSum u(2);
    u.add_power(Rational(1, 2), 1);  // 1/sqrt2 = sqrt2 / 2
    CHECK(u.terms().at(BigInt(2)) == Rational(1, 2));
}

TEST_CASE("quantity exact comparisons") {
    Quantity root2 = Quantity::power(Rational(2), Rational(1, 2));
    CHECK(Quantity::of(Rational(141421356, 100000000)) < root2);
    CHECK(root2 < Quantity::of(Rational(141421357, 100000000)));
    CHECK(root2 * root2 == Quantity::of(Rational(2)));
    CHECK(root2.pow(Rational(2)).as_rational() == Rational(2));
    CHECK(Quantity::power(Rational(4), Rational(1, 2)).as_rational() == Rational(2));
    CHECK(Quantity::zero() < Quantity::of(Rational(1, 1000000)));
    CHECK(Quantity::zero() == Quantity::zero());

    // 2^(1/3) vs 3^(1/5): 2^5 = 32 < 27? no, 2^(5/15)=32^(1/15) > 27^(1/15)
    CHECK(Quantity::power(Rational(3), Rational(1, 5)) < Quantity::power(Rational(2), Rational(1, 3)));

    RootSum s(2);
    s.add_power(Rational(2), 1);
    s.add_power(Rational(3), 1);  // sqrt2 + sqrt3 ~ 3.146
    Quantity q = Quantity::power(s, Rational(1));
    CHECK(Quantity::of(Rational(3146, 1000)) < q);
    CHECK(q < Quantity::of(Rational(3147, 1000)));
    CHECK(std::fabs(q.to_double() - (std::sqrt(2.0) + std::sqrt(3.0))) < 1e-12);
    // (sqrt2+sqrt3)^2 = 5 + 2 sqrt6 is irrational, so never equal to 10.
    CHECK(q.pow(Rational(2)) < Quantity::of(Rational(10)));
}

TEST_CASE("lp norms of value lists") {
    std::vector<Rational> ones(3, Rational(1));
    CHECK(lp_norm_of_values(ones, 3).pow(Rational(3)).as_rational() == Rational(3));
    CHECK(lp_norm_of_values({Rational(3), Rational(-5)}, NormOrder::infinity()).as_rational() == Rational(5));
    CHECK(lp_norm_of_values({}, 2).is_zero());
    CHECK_THROWS_AS(lp_norm_of_values(ones, Rational(1, 2)), Error);
    // ||(1,1,1)||_{3/2} = 3^{2/3}
    CHECK(lp_norm_of_values(ones, Rational(3, 2)) == Quantity::power(Rational(3), Rational(2, 3)));
}

TEST_CASE("Hölder interpolation on random nonnegative values") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(0, 9);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rational> v;
        const int n = 1 + static_cast<int>(rng() % 7);
        for (int i = 0; i < n; ++i) v.emplace_back(d(rng), 1 + d(rng) % 3);
        Quantity lhs = lp_norm_of_values(v, Rational(3, 2));
        Quantity rhs = lp_norm_of_values(v, 3).pow(Rational(1, 2)) * lp_norm_of_values(v, 1).pow(Rational(1, 2));
        CHECK(lhs <= rhs);
        // floating cross-check of the exact answer
        double a = 0, b = 0, c = 0;
        for (const auto& x : v) {
            double y = x.get_d();
            a += std::pow(y, 1.5);
            b += y * y * y;
            c += y;
        }
        CHECK(std::pow(a, 2.0 / 3.0) <= std::pow(b, 1.0 / 6.0) * std::sqrt(c) * (1 + 1e-12));
    }
}

TEST_CASE("quantity folds merged fractional powers") {
    auto ten = Quantity::power(Rational(10), Rational(2, 3)) * Quantity::power(Rational(10), Rational(1, 3));
    REQUIRE(ten.as_rational());
    CHECK(*ten.as_rational() == 10);
    auto two = Quantity::power(Rational(4), Rational(1, 4)) * Quantity::power(Rational(4), Rational(1, 4));
    REQUIRE(two.as_rational());
    CHECK(*two.as_rational() == 2);
    CHECK(!Quantity::power(Rational(10), Rational(1, 3)).as_rational());
}
