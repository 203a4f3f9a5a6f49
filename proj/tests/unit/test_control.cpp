#include <doctest.h>

#include <random>

#include "acw/control.hpp"
#include "acw/decompose.hpp"
#include "acw/error.hpp"
#include "acw/families.hpp"
#include "oracles.hpp"

using namespace acw;

namespace {

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// max over every nonempty B of Z/n (no translation reduction) by brute force.
Rational brute_control_cyclic(const FiniteSet& a) {
    const std::int64_t n = a.ambient().modulus();
    Rational best(0);
    const long na = static_cast<long>(a.size());
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::int64_t> xs;
        for (std::int64_t j = 0; j < n; ++j)
            if (mask >> j & 1) xs.push_back(j);
        FiniteSet b = FiniteSet::cyclic(n, xs);
        long nb = static_cast<long>(b.size());
        Rational r = q(oracle::cube_sum_pairs(a, b), na * na * nb * nb);
        if (r > best) best = r;
    }
    return best;
}

void check_bounds(const FiniteSet& a, const ControlEstimate& e) {
    CHECK(e.value <= 1);
    CHECK(e.value * Rational(static_cast<long>(a.size())) >= 1);
    // recomputable from the witness
    const long na = static_cast<long>(a.size()), nb = static_cast<long>(e.witness.size());
    CHECK(e.value == q(oracle::cube_sum_pairs(a, e.witness), na * na * nb * nb));
}

}  // namespace

TEST_CASE("control ratio examples") {
    auto a = FiniteSet::integers({0, 1});
    CHECK(control_ratio(a, a) == q(5, 8));
    CHECK(cube_sum(a, a) == 10);
    CHECK(control_ratio(FiniteSet::integers({7}), FiniteSet::integers({-3})) == 1);
    auto b = FiniteSet::integers({0, 1, 3});
    CHECK(control_ratio(b, b.negated()) == q(11, 27));
    CHECK_THROWS_AS(control_ratio(a, FiniteSet(a.ambient(), {})), Error);
    CHECK_THROWS_AS(control_ratio(a, FiniteSet::cyclic(5, {1})), Error);
}

TEST_CASE("control ratio matches pair counting and is translation invariant") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        auto a = oracle::random_integers(rng, -30, 30, 1 + rng() % 12);
        auto b = oracle::random_integers(rng, -30, 30, 1 + rng() % 12);
        long na = static_cast<long>(a.size()), nb = static_cast<long>(b.size());
        Rational expect = q(oracle::cube_sum_pairs(a, b), na * na * nb * nb);
        CHECK(control_ratio(a, b) == expect);
        CHECK(control_ratio(a.translated(element(17)), b.translated(element(-5))) == expect);
        CHECK(control_ratio(a.negated(), b.negated()) == expect);
    }
}

TEST_CASE("exhaustive control examples") {
    ExhaustiveOptions opts;
    opts.window = std::pair<std::int64_t, std::int64_t>{-4, 4};
    auto e = control_exhaustive(FiniteSet::integers({0, 1}), opts);
    CHECK(e.value == q(5, 8));
    CHECK(e.mode == ControlMode::ExhaustiveWindowLowerBound);
    CHECK(e.witness.scalars() == std::vector<std::int64_t>{0, 1});

    auto s = control_exhaustive(FiniteSet::cyclic(5, {3}));
    CHECK(s.value == 1);
    CHECK(s.mode == ControlMode::ExactFiniteGroup);

    for (std::int64_t n : {1, 2, 6, 9}) {
        auto whole = FiniteSet::whole(Ambient::cyclic(n));
        auto w = control_exhaustive(whole);
        CHECK(w.value == 1);
        CHECK(w.witness.size() == static_cast<std::size_t>(n));
    }
}

TEST_CASE("exhaustive control errors") {
    CHECK_THROWS_AS(control_exhaustive(FiniteSet(Ambient::cyclic(5), {})), Error);
    try {
        control_exhaustive(FiniteSet::cyclic(23, {0, 1}));
        FAIL("expected UniverseTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UniverseTooLarge);
    }
    ExhaustiveOptions small;
    small.max_subsets = 1 << 10;
    CHECK_THROWS_AS(control_exhaustive(FiniteSet::cyclic(12, {0, 1}), small), Error);
    CHECK_THROWS_AS(control_exhaustive(FiniteSet::integers({0, 40})), Error);
    CHECK_THROWS_AS(control_exhaustive(FiniteSet(Ambient::lattice(2), {Element{0, 0}})), Error);
}

TEST_CASE("exhaustive control agrees with brute force and the reference search") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 12; ++t) {
        std::int64_t n = 3 + static_cast<std::int64_t>(rng() % 8);
        auto a = oracle::random_cyclic(rng, n);
        auto fast = control_exhaustive(a);
        CHECK(fast.value == brute_control_cyclic(a));
        auto ref = control_exhaustive_reference(a);
        CHECK(fast.value == ref.value);
        CHECK(fast.witness == ref.witness);
        check_bounds(a, fast);
    }
    for (int t = 0; t < 6; ++t) {
        auto a = oracle::random_integers(rng, 0, 5, 1 + rng() % 4);
        auto fast = control_exhaustive(a);
        auto ref = control_exhaustive_reference(a);
        CHECK(fast.value == ref.value);
        CHECK(fast.witness == ref.witness);
        check_bounds(a, fast);
    }
}

TEST_CASE("wide sets with a narrow explicit window") {
    ExhaustiveOptions opts;
    opts.window = std::pair<std::int64_t, std::int64_t>{0, 6};
    auto a = FiniteSet::integers({0, 1, 1000000, 1000003});
    auto fast = control_exhaustive(a, opts);
    auto ref = control_exhaustive_reference(a, opts);
    CHECK(fast.value == ref.value);
    check_bounds(a, fast);
}

TEST_CASE("exhaustive control invariances and additivity in Z/n") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 8; ++t) {
        std::int64_t n = 4 + static_cast<std::int64_t>(rng() % 9);
        auto a = oracle::random_cyclic(rng, n);
        Rational k = control_exhaustive(a).value;
        CHECK(control_exhaustive(a.negated()).value == k);
        CHECK(control_exhaustive(a.translated(element(static_cast<std::int64_t>(rng() % n)))).value == k);
        CHECK(weak_control(a).implied_kappa_lower <= k);
    }
    for (int t = 0; t < 10; ++t) {
        std::int64_t n = 6 + static_cast<std::int64_t>(rng() % 11);
        std::vector<std::int64_t> x1, x2;
        for (std::int64_t i = 0; i < n; ++i) {
            auto r = rng() % 3;
            if (r == 0) x1.push_back(i);
            else if (r == 1) x2.push_back(i);
        }
        if (x1.empty() || x2.empty()) continue;
        auto a1 = FiniteSet::cyclic(n, x1), a2 = FiniteSet::cyclic(n, x2);
        CHECK(control_exhaustive(set_union(a1, a2)).value <=
              control_exhaustive(a1).value + control_exhaustive(a2).value);
    }
}

TEST_CASE("weak control") {
    auto a = FiniteSet::integers({0, 1, 3});
    auto w = weak_control(a);
    CHECK(w.cube_autocorrelation == 33);
    CHECK(w.implied_kappa_lower == q(33, 81));
    CHECK_THROWS_AS(weak_control(FiniteSet(a.ambient(), {})), Error);
}

TEST_CASE("candidate control") {
    auto sq = generate(FamilySpec::squares(64));
    auto e = control_candidates(sq);
    CHECK(e.mode == ControlMode::CandidateLowerBound);
    CHECK(e.value * 64 >= 1);
    check_bounds(sq, e);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        auto a = oracle::random_integers(rng, -50, 50, 2 + rng() % 15);
        CHECK(control_candidates(a, std::vector<FiniteSet>{a.negated()}).value == control_ratio(a, a.negated()));
        auto d = control_candidates(a);
        CHECK(d.value >= control_ratio(a, a.negated()));
        check_bounds(a, d);
    }
    auto interval = generate(FamilySpec::interval(16));
    CHECK(control_candidates(interval).value >= control_ratio(interval, interval));
    CHECK_THROWS_AS(control_candidates(interval, std::vector<FiniteSet>{}), Error);
}

TEST_CASE("default candidates contain the advertised sets") {
    auto a = FiniteSet::integers({0, 2, 4, 10});
    auto c = default_candidates(a);
    auto has = [&](const FiniteSet& s) {
        for (const auto& t : c)
            if (t == s) return true;
        return false;
    };
    CHECK(has(a));
    CHECK(has(a.negated()));
    CHECK(has(set_algebra(a, a, SetOp::Difference)));
    CHECK(has(FiniteSet::integers({0, 1, 2, 3})));
    CHECK(has(FiniteSet::integers({0, 2, 4, 6})));
    CHECK(has(symmetry_set(a, q(1, 2))));
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) CHECK(c[i] != c[j]);
}

TEST_CASE("Hoelder bound for the 3/2 norm") {
    auto one = FiniteSet::integers({4});
    Quantity lhs = lp_norm(diff_convolve(one, one), Rational(3, 2));
    CHECK(lhs == holder_upper_bound(one, one, Rational(1)));

    auto a = FiniteSet::integers({0, 1, 2, 3});
    auto s = symmetry_set(a, q(1, 2));
    ExhaustiveOptions opts;
    opts.window = std::pair<std::int64_t, std::int64_t>{0, 12};
    Rational k = control_exhaustive(a, opts).value;
    CHECK(lp_norm(diff_convolve(a, s), Rational(3, 2)) <= holder_upper_bound(a, s, k));

    std::mt19937_64 rng(8);
    for (int t = 0; t < 5; ++t) {
        auto z = oracle::random_cyclic(rng, 12);
        Rational kz = control_exhaustive(z).value;
        CHECK(lp_norm(diff_convolve(z, z), Rational(3, 2)) <= holder_upper_bound(z, z, kz));
    }
    CHECK_THROWS_AS(holder_upper_bound(a, s, Rational(0)), Error);
    CHECK_THROWS_AS(holder_upper_bound(a, s, q(3, 2)), Error);
}
