#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "acw/convolution.hpp"
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

std::vector<std::int64_t> xs(const FiniteSet& s) { return s.scalars(); }

// r(d) = #{(a,b) in A^2 : a - b = d}, by pair counting
std::map<Element, long> autocorr(const FiniteSet& a) {
    std::map<Element, long> r;
    for (const auto& x : a.elements())
        for (const auto& y : a.elements()) ++r[a.ambient().sub(x, y)];
    return r;
}

long bad_count_brute(const FiniteSet& a, const FiniteSet& x, const Rational& theta) {
    auto r = autocorr(a);
    long bad = 0;
    for (const auto& p : x.elements())
        for (const auto& s : x.elements())
            if (Rational(r[a.ambient().sub(p, s)]) <= theta) ++bad;
    return bad;
}

}  // namespace

TEST_CASE("level sets of an autocorrelation") {
    auto a = FiniteSet::integers({0, 1, 2, 3});
    auto levels = level_sets(diff_convolve(a, a), q(1, 8));
    REQUIRE(levels.size() == 3);
    CHECK(levels[0].threshold_low == 2);
    CHECK(levels[0].threshold_high == 4);
    CHECK(xs(levels[0].set) == std::vector<std::int64_t>{-1, 0, 1});
    CHECK(levels[1].threshold_low == 1);
    CHECK(xs(levels[1].set) == std::vector<std::int64_t>{-2, 2});
    CHECK(levels[2].threshold_low == q(1, 2));
    CHECK(xs(levels[2].set) == std::vector<std::int64_t>{-3, 3});
    // the floor excludes the last level once 2^-i reaches it
    CHECK(level_sets(diff_convolve(a, a), q(1, 4)).size() == 2);

    auto c = DensityFunction::from_pairs(Ambient::integers(), {{element(1), q(3, 7)}, {element(5), q(3, 7)}});
    auto one = level_sets(c);
    REQUIRE(one.size() == 1);
    CHECK(one[0].set.size() == 2);
    CHECK(one[0].threshold_high == q(3, 7));

    auto neg = DensityFunction::from_pairs(Ambient::integers(), {{element(1), q(-1)}});
    CHECK_THROWS_AS(level_sets(neg), Error);
}

TEST_CASE("level sets partition and reconstruct f above the floor") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 30; ++t) {
        std::vector<std::pair<Element, Rational>> pairs;
        for (int i = 0; i < 40; ++i) {
            Rational v = oracle::random_rational(rng, 1000, 97);
            pairs.emplace_back(element(static_cast<std::int64_t>(rng() % 60)), abs(v));
        }
        auto f = DensityFunction::from_pairs(Ambient::integers(), pairs);
        if (f.empty()) continue;
        const Rational floor = q(1, 1024);
        auto levels = level_sets(f, floor);
        const Rational m = f.max_value();
        std::vector<std::pair<Element, Rational>> rebuilt;
        std::set<Element> seen;
        for (const auto& l : levels) {
            CHECK(l.threshold_high == 2 * l.threshold_low);
            for (const auto& x : l.set.elements()) {
                Rational v = f.at(x);
                CHECK(v > l.threshold_low);
                CHECK(v <= l.threshold_high);
                CHECK(seen.insert(x).second);
                rebuilt.emplace_back(x, v);
            }
        }
        auto above = f.where([&](const Rational& v) { return v > floor * m; });
        CHECK(above.size() == seen.size());
        auto g = DensityFunction::from_pairs(f.ambient(), rebuilt);
        CHECK(g == DensityFunction::from_pairs(f.ambient(), [&] {
                  std::vector<std::pair<Element, Rational>> p;
                  for (const auto& x : above.elements()) p.emplace_back(x, f.at(x));
                  return p;
              }()));
    }
}

TEST_CASE("dominant level") {
    auto a = FiniteSet::integers({0, 1, 2, 3});
    auto d = dominant_level(diff_convolve(a, a), Rational(2), default_level_floor(), Rational(4));
    CHECK(xs(d.level.set) == std::vector<std::int64_t>{-1, 0, 1});
    CHECK(d.score == Quantity::of(Rational(12)));
    CHECK(d.delta == q(1, 2));

    auto f = CountFunction::from_pairs(Ambient::integers(),
                                       {{element(0), 8}, {element(1), 1}, {element(2), 1}, {element(3), 1}});
    CHECK(dominant_level(f, Rational(0)).level.set.size() == 3);
    CHECK(dominant_level(f, Rational(1)).level.set.size() == 1);  // 4 beats 3/2
    // weight 1: 2*1 = (1/2)*4 is a tie, kept on the larger threshold
    auto g = CountFunction::from_pairs(Ambient::integers(), {{element(0), 4},
                                                             {element(1), 1}, {element(2), 1},
                                                             {element(3), 1}, {element(4), 1}});
    CHECK(dominant_level(g, Rational(1)).level.index == 0);
    // weight 1/2 compared exactly: sqrt(2) < 4 sqrt(1/2)
    CHECK(dominant_level(g, q(1, 2)).level.index == 2);
    CHECK_THROWS_AS(dominant_level(CountFunction(Ambient::integers()), Rational(1)), Error);
    CHECK_THROWS_AS(dominant_level(f, Rational(1), Rational(1)), Error);
}

TEST_CASE("symmetry sets") {
    auto a = FiniteSet::integers({0, 1, 2, 3});
    CHECK(xs(symmetry_set(a, q(1, 2))) == std::vector<std::int64_t>{-2, -1, 0, 1, 2});
    CHECK(xs(symmetry_set(FiniteSet::integers({0, 1, 3}), Rational(1))) == std::vector<std::int64_t>{0});
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        auto b = oracle::random_integers(rng, -40, 40, 1 + rng() % 20);
        CHECK(symmetry_set(b, q(1, 1000)) == set_algebra(b, b, SetOp::Difference));
        auto s = symmetry_set(b, q(1 + static_cast<long>(rng() % 5), 6));
        CHECK(s.contains(element(0)));
        CHECK(s == s.negated());
    }
    CHECK_THROWS_AS(symmetry_set(a, Rational(0)), Error);
    CHECK_THROWS_AS(symmetry_set(a, q(3, 2)), Error);
}

TEST_CASE("bsg extraction on an interval") {
    auto a = generate(FamilySpec::interval(8));
    auto f = convolve(a, a);
    auto c = f.where([](std::int64_t v) { return v >= 4; });
    CHECK(c.size() == 9);
    auto ex = bsg_extract(a, a, c, q(1, 2), q(1, 8));
    CHECK(ex.threshold == q(9, 32));
    CHECK(ex.X.size() >= 4);
    CHECK(ex.bad_pairs.empty());
    CHECK(is_subset(ex.X, a));

    auto s = bsg_extract(FiniteSet::integers({5}), FiniteSet::integers({2}), FiniteSet::integers({7}), Rational(1), q(1, 8));
    CHECK(s.X.size() == 1);
    CHECK(s.bad_pairs.empty());

    try {
        bsg_extract(a, a, FiniteSet::integers({0, 7}), q(1, 2), q(1, 8));
        FAIL("expected a hypothesis violation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HypothesisViolation);
        CHECK(std::string(e.what()).find("1_A*1_B(0)") != std::string::npos);
    }
}

TEST_CASE("bsg extraction postconditions by recount") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 15; ++t) {
        auto a = oracle::random_integers(rng, 0, 31, 6 + rng() % 14);
        auto f = convolve(a, a);
        auto dl = dominant_level(f, Rational(3), default_level_floor(), Rational(static_cast<long>(a.size())));
        const auto& c = dl.level.set;
        long mn = 1L << 40;
        for (const auto& x : c.elements()) mn = std::min<long>(mn, f.at(x));
        Rational eta = q(mn, static_cast<long>(a.size()));
        const Rational eps = q(1, 8);
        auto ex = bsg_extract(a, a, c, eta, eps);
        const long na = static_cast<long>(a.size()), nc = static_cast<long>(c.size()), nx = static_cast<long>(ex.X.size());
        Rational theta = eps * eta * eta * Rational(na * na * nc) / Rational(na * na);
        theta.canonicalize();
        CHECK(ex.threshold == theta);
        CHECK(is_subset(ex.X, a));
        CHECK(Rational(nx) >= eta * Rational(na));
        long bad = bad_count_brute(a, ex.X, theta);
        CHECK(bad == static_cast<long>(ex.bad_pairs.size()));
        CHECK(Rational(bad) <= eps * Rational(nx * nx));
        // no other x does strictly better
        for (const auto& x : c.elements()) {
            std::vector<Element> cand;
            for (const auto& y : a.elements())
                if (a.contains(a.ambient().sub(x, y))) cand.push_back(a.ambient().sub(x, y));
            FiniteSet xx(a.ambient(), cand);
            long b2 = bad_count_brute(a, xx, theta), n2 = static_cast<long>(xx.size());
            CHECK(BigInt(b2) * nx * nx >= BigInt(bad) * n2 * n2);
        }
    }
}

TEST_CASE("bsg refinement") {
    auto x = generate(FamilySpec::interval(8));
    CHECK(bsg_refine(x, {}) == x);
    PairList bad;
    for (std::int64_t b = 1; b < 8; ++b) bad.emplace_back(element(0), element(b));
    CHECK(xs(bsg_refine(x, bad)) == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7});
    PairList too_many = bad;
    for (std::int64_t b = 1; b < 8; ++b) too_many.emplace_back(element(b), element(0));
    CHECK_THROWS_AS(bsg_refine(x, too_many), Error);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 30; ++t) {
        auto y = oracle::random_integers(rng, -100, 100, 4 + rng() % 20);
        const auto& e = y.elements();
        const long n = static_cast<long>(y.size());
        std::set<std::pair<Element, Element>> chosen;
        long budget = static_cast<long>(rng() % static_cast<std::uint64_t>(n * n / 8 + 1));
        while (static_cast<long>(chosen.size()) < budget)
            chosen.emplace(e[rng() % e.size()], e[rng() % e.size()]);
        PairList pl(chosen.begin(), chosen.end());
        auto out = bsg_refine(y, pl);
        CHECK(2 * static_cast<long>(out.size()) >= n);
        for (const auto& p : out.elements()) {
            long deg = 0;
            for (const auto& s : e) deg += chosen.count({p, s}) ? 0 : 1;
            CHECK(4 * deg >= 3 * n);
        }
        for (const auto& p : e) {
            if (out.contains(p)) continue;
            long deg = 0;
            for (const auto& s : e) deg += chosen.count({p, s}) ? 0 : 1;
            CHECK(4 * deg < 3 * n);
        }
    }
}

TEST_CASE("bsg pipeline") {
    auto ap = generate(FamilySpec::interval(16));
    auto cert = bsg_pipeline(ap);
    CHECK(verify(cert).empty());
    CHECK(cert.measured_doubling <= 4);

    auto single = bsg_pipeline(FiniteSet::integers({9}));
    CHECK(single.trivial);
    CHECK(single.A_prime == FiniteSet::integers({9}));
    CHECK(single.measured_doubling == 1);

    auto rnd = generate(FamilySpec::random_subset(1 << 20, 32, 99));
    auto mixed = set_union(generate(FamilySpec::interval(32)), rnd);
    auto mc = bsg_pipeline(mixed);
    auto fails = verify(mc);
    for (const auto& f : fails) MESSAGE(f);
    CHECK(fails.empty());
    CHECK(mc.measured_doubling * Rational(static_cast<long>(mc.A_prime.size())) <=
          Rational(static_cast<long>(set_algebra(mixed, mixed, SetOp::Difference).size())));

    auto tampered = mc;
    tampered.bad_pair_count += 1;
    CHECK(!verify(tampered).empty());
    tampered = mc;
    tampered.eta *= 4;
    CHECK(!verify(tampered).empty());
}

TEST_CASE("bsg pipeline with an explicit B and in Z/n") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 8; ++t) {
        auto a = oracle::random_cyclic(rng, 40, 0.3);
        auto b = oracle::random_cyclic(rng, 40, 0.3);
        auto cert = bsg_pipeline(a, b);
        auto fails = verify(cert);
        for (const auto& f : fails) MESSAGE(f);
        CHECK(fails.empty());
    }
}

TEST_CASE("convex decomposition") {
    auto a = generate(FamilySpec::interval(32, 1));
    auto sq = ConvexFunctionSpec::polynomial({BigInt(0), BigInt(0), BigInt(1)});
    auto cert = convex_decompose(a, sq);
    CHECK(set_union(cert.X, cert.Y) == a);
    CHECK(cert.X.size() >= 16);
    CHECK(cert.Y.size() >= 16);
    CHECK(cert.fX.size() == cert.X.size());
    CHECK(cert.product_times_size == cert.kappa_fX.value * cert.kappa_Y.value * Rational(32));

    auto one = convex_decompose(FiniteSet::integers({5}), sq);
    CHECK(one.X == FiniteSet::integers({5}));
    CHECK(one.Y == FiniteSet::integers({5}));

    auto a64 = generate(FamilySpec::interval(64, 1));
    auto lg = convex_decompose(a64, ConvexFunctionSpec::negative_logarithm());
    CHECK(set_union(lg.X, lg.Y) == a64);
    CHECK(2 * lg.X.size() >= 64);
    CHECK(2 * lg.Y.size() >= 64);
    CHECK(lg.fX.ambient().kind() == AmbientKind::Lattice);
    CHECK(lg.product_times_size > 0);
    CHECK(lg.kappa_fX.value == control_ratio(lg.fX, lg.kappa_fX.witness));
    CHECK(lg.kappa_Y.value == control_ratio(lg.Y, lg.kappa_Y.witness));

    CHECK_THROWS_AS(convex_decompose(FiniteSet::integers({0, 3}), ConvexFunctionSpec::negative_logarithm()), Error);
    auto bounded = ConvexFunctionSpec::polynomial({BigInt(0), BigInt(0), BigInt(1)}, Rational(0), Rational(10));
    CHECK_THROWS_AS(convex_decompose(FiniteSet::integers({1, 20}), bounded), Error);
}

TEST_CASE("convex decomposition with the exhaustive oracle") {
    auto a = generate(FamilySpec::interval(9, 1));
    ConvexDecomposeOptions opts;
    opts.oracle = ControlOracle::ExhaustiveWindow;
    auto cert = convex_decompose(a, ConvexFunctionSpec::polynomial({BigInt(1), BigInt(-3), BigInt(2)}), opts);
    CHECK(set_union(cert.X, cert.Y) == a);
    CHECK(2 * cert.X.size() >= 9);
    CHECK(2 * cert.Y.size() >= 9);
    CHECK(cert.kappa_Y.mode == ControlMode::ExhaustiveWindowLowerBound);

    opts.exhaustive.max_subsets = 16;
    CHECK_THROWS_AS(convex_decompose(a, ConvexFunctionSpec::polynomial({BigInt(0), BigInt(0), BigInt(1)}), opts), Error);
}

TEST_CASE("energy chain") {
    auto ap = generate(FamilySpec::interval(16));
    auto ch = energy_chain(ap, 2);
    REQUIRE(!ch.truncated);
    REQUIRE(ch.A.size() == 3);
    CHECK(ch.A[1] == ap);
    CHECK(is_subset(ch.A[2], ch.A[0]));
    CHECK(verify(ch, ap).empty());
    CHECK(ch.selected_i >= 1);
    CHECK(ch.selected_i <= 2);

    auto one = energy_chain(FiniteSet::integers({0, 1, 3, 7, 8}), 1);
    CHECK(is_subset(one.S, one.S_prime));
    CHECK(verify(one, FiniteSet::integers({0, 1, 3, 7, 8})).empty());

    std::mt19937_64 rng(64);
    for (int t = 0; t < 6; ++t) {
        auto a = oracle::random_cyclic(rng, 64, 0.25);
        if (a.size() < 2) continue;
        auto c = energy_chain(a, 3);
        CHECK(verify(c, a).empty());
        for (std::size_t i = 0; i < c.A.size(); ++i)
            for (std::size_t j = 0; j <= i; ++j)
                if ((i - j) % 2 == 0) CHECK(is_subset(c.A[i], c.A[j]));
        // selected ratio is minimal
        for (const auto& r : c.ratios) CHECK(c.ratios[static_cast<std::size_t>(c.selected_i - 1)] <= r);
    }
    CHECK_THROWS_AS(energy_chain(ap, 0), Error);
    CHECK_THROWS_AS(energy_chain(FiniteSet::integers({1}), 1), Error);
}
