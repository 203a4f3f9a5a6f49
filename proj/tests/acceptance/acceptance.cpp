// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <omp.h>

#include "acw/control.hpp"
#include "acw/convolution.hpp"
#include "acw/decompose.hpp"
#include "acw/error.hpp"
#include "acw/exponents.hpp"
#include "acw/families.hpp"
#include "acw/harness.hpp"
#include "acw/incidence.hpp"

using namespace acw;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void fail(Outcome& o, const std::string& why) {
    if (o.pass) o.detail = why;
    o.pass = false;
}

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

long isize(const FiniteSet& a) { return static_cast<long>(a.size()); }

// ---- 1

Outcome exact_suite() {
    Outcome o;
    const std::vector<std::int64_t> moduli{8, 16, 32, 64};
    auto sets = run_suite(SuiteKind::Exact, random_cyclic_corpus(500, moduli, 2024), 1, {false, 16});
    auto triples = run_suite(SuiteKind::Exact, random_cyclic_corpus(100, moduli, 4048), 2, {false, 16});
    std::map<std::string, int> seen;
    for (const auto* b : {&sets, &triples})
        for (const auto& r : b->reports) {
            ++seen[r.spec_id];
            if (!r.pass || !*r.pass) fail(o, r.spec_id + " fails on " + r.instance_id);
            if (!r.lhs.exact || !r.rhs.exact) fail(o, r.spec_id + " compared inexactly");
        }
    for (const char* id : {"cs_energy", "hol", "innbound", "holderbound", "remove"})
        if (seen[id] == 0) fail(o, std::string("no ") + id + " reports");
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(sets.reports.size() + triples.reports.size()) +
                " exact comparisons, " + std::to_string(seen["holderbound"]) + " holderbound, " +
                std::to_string(seen["remove"]) + " remove";
    return o;
}

// ---- 2

template <class V>
SparseFunction<V> random_function(std::mt19937_64& rng, const Ambient& amb, std::size_t support, bool rational) {
    std::vector<std::pair<Element, V>> pairs;
    std::uniform_int_distribution<std::int64_t> coord(-300, 300), val(-1000, 1000), den(1, 12);
    for (std::size_t i = 0; i < support; ++i) {
        Element x;
        for (std::size_t d = 0; d < amb.dimension(); ++d) x.push_back(amb.kind() == AmbientKind::Lattice ? coord(rng) % 9 : coord(rng));
        V v;
        if constexpr (std::is_same_v<V, Rational>) v = rational ? q(static_cast<long>(val(rng)), static_cast<long>(den(rng))) : V(static_cast<long>(val(rng)));
        else v = val(rng);
        pairs.emplace_back(amb.reduce(x), v);
    }
    return SparseFunction<V>::from_pairs(amb, pairs);
}

Outcome oracle_equivalence() {
    Outcome o;
    using M = ConvolutionOptions::Method;
    std::mt19937_64 rng(77);
    ConvolutionOptions ref, fast, par;
    ref.method = M::Reference;
    fast.method = M::Accelerated;
    par.method = M::Naive;
    for (int t = 0; t < 1000; ++t) {
        Ambient amb = t % 4 == 0 ? Ambient::cyclic(97) : t % 4 == 1 ? Ambient::lattice(2) : Ambient::integers(300);
        const std::size_t nf = 1 + rng() % 80, ng = 1 + rng() % 80;
        if (t % 2 == 0) {
            auto f = random_function<Rational>(rng, amb, nf, true), g = random_function<Rational>(rng, amb, ng, true);
            auto r = convolve(f, g, ref), a = convolve(f, g, fast), p = convolve(f, g, par);
            if (a.keys() != r.keys() || a.values() != r.values()) fail(o, "density pair " + std::to_string(t));
            if (p.keys() != r.keys() || p.values() != r.values()) fail(o, "parallel density pair " + std::to_string(t));
        } else {
            auto f = random_function<std::int64_t>(rng, amb, nf, false), g = random_function<std::int64_t>(rng, amb, ng, false);
            auto r = convolve(f, g, ref);
            auto a = convolve(f, g, fast);
            if (a.values() != r.values() || a.keys() != r.keys()) fail(o, "count pair " + std::to_string(t));
        }
    }

    int instances = 0;
    for (int t = 0; t < 200; ++t) {
        std::vector<BigInt> coeffs{BigInt(static_cast<long>(rng() % 9) - 4), BigInt(static_cast<long>(rng() % 9) - 4),
                                   BigInt(1 + static_cast<long>(rng() % 3))};
        CurveFamily l;
        l.base = ConvexFunctionSpec::polynomial(coeffs);
        l.kind = t % 2 ? CurveFamily::Kind::Sheared : CurveFamily::Kind::Translate;
        for (int i = 0, m = 1 + static_cast<int>(rng() % 40); i < m; ++i)
            l.shifts.emplace_back(q(static_cast<long>(rng() % 13) - 6, 1 + static_cast<long>(rng() % 2)),
                                  q(static_cast<long>(rng() % 13) - 6));
        std::vector<Point> pts;
        for (int i = 0, m = static_cast<int>(rng() % 120); i < m; ++i) {
            const std::size_t c = rng() % l.size();
            Rational u = q(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 2));
            Rational arg = l.argument(c, u);
            Rational v = l.base(arg) + l.shifts[c].second;
            if (rng() % 3 == 0) v += 1;
            pts.emplace_back(u, v);
        }
        PointSet p(pts);
        if (count_incidences(p, l) != count_incidences_reference(p, l)) fail(o, "incidence instance " + std::to_string(t));
        ++instances;
    }
    if (o.pass) o.detail = "1000 convolution pairs, " + std::to_string(instances) + " incidence instances";
    return o;
}

// ---- 3

Outcome exhaustive_sanity() {
    Outcome o;
    const std::int64_t n = 12;
    std::vector<std::optional<Rational>> kappas(1u << n);
#pragma omp parallel for schedule(dynamic)
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<std::int64_t> xs;
        for (int j = 0; j < n; ++j)
            if (mask >> j & 1) xs.push_back(j);
        kappas[static_cast<std::size_t>(mask)] = control_exhaustive(FiniteSet::cyclic(n, xs)).value;
    }
    for (int mask = 1; mask < (1 << n); ++mask) {
        const Rational& k = *kappas[static_cast<std::size_t>(mask)];
        const long size = __builtin_popcount(static_cast<unsigned>(mask));
        if (k < q(1, size) || k > 1) fail(o, "mask " + std::to_string(mask) + " kappa " + to_string(k));
    }
    if (*kappas[(1u << n) - 1] != 1) fail(o, "kappa(Z_12) != 1");
    // the empty subset has no control
    try {
        control_exhaustive(FiniteSet::cyclic(n, {}));
        fail(o, "empty set accepted");
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptySet) fail(o, "empty set: wrong error");
    }
    if (o.pass) o.detail = "4095 nonempty subsets, empty subset rejected";
    return o;
}

// ---- 4

Outcome catalog() {
    Outcome o;
    CatalogReport report = verify_catalog();
    if (!report.all_pass()) fail(o, "catalog mismatch");
    std::set<std::string> derived;
    for (const auto& c : report.checks) derived.insert(c.derived);
    const std::vector<std::string> wanted{"tau <= kappa^(27/50) [eps]", "K^(-1) <= kappa^(11/19) [polylog]",
                                          "K^(-1) <= kappa^(2506/4175) [eps]", "1270/951", "144511/108174",
                                          "32/21", "7239/4733", "56/83"};
    for (const auto& w : wanted)
        if (!derived.count(w)) fail(o, "missing " + w);
    if (o.pass) o.detail = std::to_string(report.checks.size()) + " checks";
    return o;
}

// ---- 5

Outcome convex_trend() {
    Outcome o;
    auto b = run_suite(SuiteKind::Trend, squares_corpus({64, 128, 256, 512, 1024}), 0);
    std::map<std::string, double> slope;
    for (const auto& t : b.trends) slope[t.spec_id] = t.slope;
    if (b.rows.size() != 5) fail(o, "expected 5 rows");
    const double e = slope["energy_trend"], k = slope["kappa_trend"], d = slope["diffset_trend"];
    if (!(e >= 2.0 && e <= 2.60)) fail(o, "energy slope out of band");
    if (!(k >= -0.25 && k <= 0.25)) fail(o, "kappa|A| slope out of band");
    if (!(d >= 1.55)) fail(o, "difference-set slope below 1.55");
    char buf[160];
    std::snprintf(buf, sizeof buf, "slopes: energy %.4f, kappa|A| %.4f, |A-A| %.4f", e, k, d);
    o.detail += (o.detail.empty() ? "" : "; ") + std::string(buf);
    return o;
}

// ---- 6

Outcome bsg() {
    Outcome o;
    SplitMix64 rng(606);
    int pure = 0;
    for (int t = 0; t < 50; ++t) {
        const std::int64_t len = 16 + static_cast<std::int64_t>(rng.below(113));
        const std::int64_t step = 1 + static_cast<std::int64_t>(rng.below(5));
        FiniteSet a = generate(FamilySpec::ap(static_cast<std::int64_t>(rng.below(50)), step, len));
        const bool is_pure = t % 5 == 0;
        if (!is_pure) {
            const std::int64_t extra = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(256 - len)));
            a = set_union(a, generate(FamilySpec::random_subset(4096, extra, rng.next())));
        }
        auto cert = bsg_pipeline(a);
        auto fails = verify(cert);
        if (!fails.empty()) fail(o, "instance " + std::to_string(t) + ": " + fails.front());
        if (a.size() > 256) fail(o, "instance too large");

        // independent recount of the structural claims
        std::set<std::int64_t> da, dp;
        auto xs = a.scalars(), ps = cert.A_prime.scalars();
        for (auto x : xs)
            for (auto y : xs) da.insert(x - y);
        for (auto x : ps)
            for (auto y : ps) dp.insert(x - y);
        if (dp.size() > da.size()) fail(o, "|A'-A'| > |A-A| at " + std::to_string(t));
        if (Rational(16 * isize(cert.A_prime)) < cert.eta * Rational(isize(a)))
            fail(o, "|A'| < eta|A|/16 at " + std::to_string(t));
        if (!cert.trivial) {
            std::map<std::int64_t, long> rep;
            for (auto x : xs)
                for (auto y : xs) ++rep[x - y];
            auto xx = cert.X.scalars();
            for (auto p : ps) {
                long deg = 0;
                for (auto y : xx)
                    if (Rational(rep[p - y]) > cert.threshold) ++deg;
                if (4 * deg < 3 * static_cast<long>(xx.size())) fail(o, "degree below 3|X|/4 at " + std::to_string(t));
            }
        }
        if (is_pure) {
            ++pure;
            if (cert.measured_doubling > 4) fail(o, "AP doubling above 4 at " + std::to_string(t));
        }
    }
    if (o.pass) o.detail = "50 certificates, " + std::to_string(pure) + " pure APs";
    return o;
}

// ---- 7

Outcome decomposition() {
    Outcome o;
    auto a = generate(FamilySpec::interval(64, 1));
    std::string detail;
    for (const auto& f : {ConvexFunctionSpec::polynomial({BigInt(0), BigInt(0), BigInt(1)}),
                          ConvexFunctionSpec::negative_logarithm()}) {
        auto cert = convex_decompose(a, f);
        if (set_union(cert.X, cert.Y) != a) fail(o, f.describe() + ": X u Y != A");
        if (cert.X.size() < 32 || cert.Y.size() < 32) fail(o, f.describe() + ": a part is below 32");
        if (cert.product_times_size != cert.kappa_fX.value * cert.kappa_Y.value * Rational(64))
            fail(o, f.describe() + ": product report mismatch");
        detail += (detail.empty() ? "" : "; ") + f.describe() + " |X|=" + std::to_string(cert.X.size()) +
                  " |Y|=" + std::to_string(cert.Y.size()) + " kappa(f(X)) kappa(Y) |A|=" +
                  to_decimal(cert.product_times_size, 6);
    }
    o.detail = o.pass ? detail : o.detail;
    return o;
}

// ---- 8

Outcome determinism() {
    Outcome o;
    auto corpus = random_cyclic_corpus(80, {8, 16, 32}, 8);
    auto mixed = fitted_corpus(8);
    corpus.insert(corpus.end(), mixed.begin(), mixed.end());
    const SuiteOptions opts{false, 16};
    auto verdicts = [](const ReportBundle& b) {
        std::vector<int> v;
        for (const auto& r : b.reports) v.push_back(r.pass ? *r.pass : -1);
        for (const auto& t : b.trends) v.push_back(t.pass ? *t.pass : -1);
        return v;
    };
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    auto b1 = run_suite(SuiteKind::All, corpus, 13, opts);
    const auto r1 = emit_report(b1, ReportFormat::Json);
    const auto r2 = emit_report(run_suite(SuiteKind::All, corpus, 13, opts), ReportFormat::Json);
    const auto s1 = emit_search(search_extremal(Objective::EnergyVsControl, Ambient::cyclic(14), 600, 13));
    const auto s2 = emit_search(search_extremal(Objective::EnergyVsControl, Ambient::cyclic(14), 600, 13));
    if (r1 != r2) fail(o, "suite reports differ between runs");
    if (s1 != s2) fail(o, "search reports differ between runs");
    for (int threads : {2, 4, 8}) {
        omp_set_num_threads(threads);
        auto b = run_suite(SuiteKind::All, corpus, 13, opts);
        if (verdicts(b) != verdicts(b1)) fail(o, "verdicts change at " + std::to_string(threads) + " threads");
    }
    omp_set_num_threads(saved);
    if (o.pass) o.detail = std::to_string(r1.size()) + "-byte suite report, " + std::to_string(s1.size()) + "-byte search report";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact inequality suite", exact_suite},
        {"oracle equivalence", oracle_equivalence},
        {"exhaustive control sanity on Z_12", exhaustive_sanity},
        {"exponent catalog", catalog},
        {"convex-set trend", convex_trend},
        {"BSG pipeline", bsg},
        {"convex decomposition", decomposition},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %zu. %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
