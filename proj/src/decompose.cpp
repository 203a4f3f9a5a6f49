#include "acw/decompose.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "acw/convolution.hpp"
#include "acw/error.hpp"
#include "acw/families.hpp"

namespace acw {

namespace {

BigInt pow2(unsigned long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

Rational ratio(const BigInt& n, const BigInt& d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Rational ratio(long n, long d) { return ratio(BigInt(n), BigInt(d)); }

long isize(const FiniteSet& s) { return static_cast<long>(s.size()); }

// floor(log2 q) for q >= 1
long floor_log2(const Rational& q) {
    const BigInt& n = q.get_num();
    const BigInt& d = q.get_den();
    long i = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
    if (i > 0 && n < d * pow2(static_cast<unsigned long>(i))) --i;
    else if (i == 0 && n < d) --i;
    return i;
}

// the pigeonholed threshold actually attained: min of f over the level
template <class V>
Rational min_on(const SparseFunction<V>& f, const FiniteSet& s) {
    Rational m;
    bool first = true;
    for (const auto& x : s.elements()) {
        Rational v(f.at(x));
        if (first || v < m) m = v;
        first = false;
    }
    return m;
}

Rational at_least_rational(std::int64_t v) { return Rational(static_cast<long>(v)); }

// {x in domain : f(x) >= bound}
FiniteSet at_least(const CountFunction& f, const FiniteSet& domain, const Rational& bound) {
    std::vector<Element> out;
    for (const auto& x : domain.elements())
        if (at_least_rational(f.at(x)) >= bound) out.push_back(x);
    return FiniteSet(domain.ambient(), std::move(out));
}

constexpr long kEpsDen = 8;  // eps = 1/8 for every extraction in the pipeline

}  // namespace

Rational default_level_floor() { return Rational(BigInt(1), pow2(40)); }

std::vector<LevelSet> level_sets(const DensityFunction& f, const Rational& floor) {
    if (!f.nonnegative()) throw Error(ErrorKind::InvalidArgument, "level sets of a function with negative values");
    if (floor <= 0) throw Error(ErrorKind::InvalidArgument, "level floor must be positive");
    std::vector<LevelSet> out;
    if (f.empty()) return out;
    const Rational m = f.max_value();
    std::map<long, std::vector<Element>> levels;
    for (std::size_t t = 0; t < f.size(); ++t) {
        long i = floor_log2(m / f.values()[t]);
        if (Rational(BigInt(1), pow2(static_cast<unsigned long>(i))) > floor) levels[i].push_back(f.keys()[t]);
    }
    for (auto& [i, keys] : levels) {
        LevelSet l;
        l.index = static_cast<int>(i);
        l.threshold_high = m / Rational(pow2(static_cast<unsigned long>(i)));
        l.threshold_low = m / Rational(pow2(static_cast<unsigned long>(i + 1)));
        l.threshold_high.canonicalize();
        l.threshold_low.canonicalize();
        l.set = FiniteSet(f.ambient(), std::move(keys));
        out.push_back(std::move(l));
    }
    return out;
}

std::vector<LevelSet> level_sets(const CountFunction& f, const Rational& floor) {
    return level_sets(to_density(f), floor);
}

DominantLevel dominant_level(const DensityFunction& f, const Rational& weight_exponent, const Rational& floor,
                             const Rational& scale) {
    if (f.empty()) throw Error(ErrorKind::EmptySet, "dominant level of the zero function");
    if (scale <= 0) throw Error(ErrorKind::InvalidArgument, "level scale must be positive");
    auto levels = level_sets(f, floor);
    if (levels.empty()) throw Error(ErrorKind::InvalidArgument, "all mass lies below the level floor");
    std::optional<Quantity> best_score;
    std::size_t best = 0;
    for (std::size_t t = 0; t < levels.size(); ++t) {
        Quantity score = Quantity::power(levels[t].threshold_low, weight_exponent) *
                         Quantity::of(Rational(static_cast<long>(levels[t].set.size())));
        // levels arrive with decreasing thresholds, so strict improvement keeps ties on the larger one
        if (!best_score || *best_score < score) {
            best_score = score;
            best = t;
        }
    }
    DominantLevel d;
    d.level = levels[best];
    d.delta = d.level.threshold_low / scale;
    d.delta.canonicalize();
    d.score = *best_score;
    return d;
}

DominantLevel dominant_level(const CountFunction& f, const Rational& weight_exponent, const Rational& floor,
                             const Rational& scale) {
    return dominant_level(to_density(f), weight_exponent, floor, scale);
}

FiniteSet symmetry_set(const CountFunction& autocorrelation, std::int64_t size, const Rational& delta) {
    if (delta <= 0 || delta > 1) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0,1], got " + to_string(delta));
    const Rational bound = delta * Rational(static_cast<long>(size));
    return autocorrelation.where([&](std::int64_t v) { return at_least_rational(v) >= bound; });
}

FiniteSet symmetry_set(const FiniteSet& a, const Rational& delta) {
    if (a.empty()) throw Error(ErrorKind::EmptySet, "symmetry set of the empty set");
    return symmetry_set(diff_convolve(a, a), static_cast<std::int64_t>(a.size()), delta);
}

BsgExtraction bsg_extract(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const Rational& eta,
                          const Rational& eps) {
    require_same_group(a.ambient(), b.ambient(), "bsg_extract");
    require_same_group(a.ambient(), c.ambient(), "bsg_extract");
    if (a.empty() || b.empty() || c.empty()) throw Error(ErrorKind::EmptySet, "bsg_extract needs nonempty A, B, C");
    if (eta <= 0 || eps <= 0) throw Error(ErrorKind::InvalidArgument, "bsg_extract needs eta, eps > 0");

    const CountFunction f = convolve(a, b);
    const Rational need = eta * Rational(isize(a));
    for (const auto& x : c.elements())
        if (at_least_rational(f.at(x)) < need)
            throw Error(ErrorKind::HypothesisViolation, "1_A*1_B(" + element_to_string(x) + ") = " +
                                                            std::to_string(f.at(x)) + " < eta|A| = " + to_string(need));

    const CountFunction r = diff_convolve(a, a);
    Rational theta = eps * eta * eta * Rational(isize(a) * isize(a) * isize(c)) / Rational(isize(b) * isize(b));
    theta.canonicalize();
    const Ambient& amb = a.ambient();

    std::optional<BsgExtraction> best;
    long best_bad = 0, best_size = 0;
    for (const auto& x : c.elements()) {
        std::vector<Element> xs;
        for (const auto& y : b.elements()) {
            Element t = amb.sub(x, y);
            if (a.contains(t)) xs.push_back(std::move(t));
        }
        FiniteSet X(a.ambient(), std::move(xs));
        PairList bad;
        for (const auto& p : X.elements())
            for (const auto& q : X.elements())
                if (at_least_rational(r.at(amb.sub(p, q))) <= theta) bad.emplace_back(p, q);
        const long nb = static_cast<long>(bad.size()), nx = isize(X);
        // bad/|X|^2 strictly smaller; ties keep the smaller x
        if (!best || BigInt(nb) * best_size * best_size < BigInt(best_bad) * nx * nx) {
            best = BsgExtraction{std::move(X), std::move(bad), x, theta};
            best_bad = nb;
            best_size = nx;
        }
    }
    if (Rational(best_bad) > eps * Rational(best_size * best_size))
        throw Error(ErrorKind::Internal, "no x in C meets the averaged bad-pair bound");
    return *best;
}

FiniteSet bsg_refine(const FiniteSet& x, const PairList& bad_pairs) {
    PairList bad = bad_pairs;
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    const long n = isize(x);
    if (8 * static_cast<long>(bad.size()) > n * n)
        throw Error(ErrorKind::PreconditionViolation, std::to_string(bad.size()) + " bad pairs exceed |X|^2/8 = " +
                                                          to_string(ratio(n * n, 8)));
    std::map<Element, long> row;
    for (const auto& [p, q] : bad) {
        if (!x.contains(p) || !x.contains(q))
            throw Error(ErrorKind::InvalidArgument, "bad pair (" + element_to_string(p) + "," + element_to_string(q) + ") outside X");
        ++row[p];
    }
    std::vector<Element> out;
    for (const auto& e : x.elements()) {
        auto it = row.find(e);
        long degree = n - (it == row.end() ? 0 : it->second);
        if (4 * degree >= 3 * n) out.push_back(e);
    }
    return FiniteSet(x.ambient(), std::move(out));
}

std::string to_string(BsgBranch branch) { return branch == BsgBranch::Direct ? "direct" : "transposed"; }

namespace {

BsgCertificate run_branch(const FiniteSet& a, const FiniteSet& b_used, const FiniteSet& c, const Rational& eta,
                          BsgBranch branch) {
    BsgExtraction ex = bsg_extract(a, b_used, c, eta, ratio(1, kEpsDen));
    BsgCertificate cert;
    cert.A_prime = bsg_refine(ex.X, ex.bad_pairs);
    cert.eta = eta;
    cert.C = c;
    cert.B_used = b_used;
    cert.X = ex.X;
    cert.threshold = ex.threshold;
    cert.bad_pair_count = static_cast<std::int64_t>(ex.bad_pairs.size());
    cert.measured_doubling = ratio(static_cast<long>(set_algebra(cert.A_prime, cert.A_prime, SetOp::Difference).size()),
                                   isize(cert.A_prime));
    cert.branch = branch;
    return cert;
}

}  // namespace

BsgCertificate bsg_pipeline(const FiniteSet& a, const std::optional<FiniteSet>& b_opt) {
    if (a.empty()) throw Error(ErrorKind::EmptySet, "bsg_pipeline of the empty set");
    const FiniteSet b = b_opt ? *b_opt : a.negated();
    if (b.empty()) throw Error(ErrorKind::EmptySet, "bsg_pipeline needs a nonempty B");
    require_same_group(a.ambient(), b.ambient(), "bsg_pipeline");

    if (a.size() == 1) {
        BsgCertificate cert;
        cert.A = cert.A_prime = cert.X = a;
        cert.B = cert.B_used = b;
        cert.C = set_algebra(a, b, SetOp::Sum);
        cert.eta = Rational(1);
        cert.measured_doubling = Rational(1);
        cert.trivial = true;
        return cert;
    }

    const long na = isize(a);
    const CountFunction f = convolve(a, b);
    const DominantLevel dl = dominant_level(f, Rational(3), default_level_floor(), Rational(na));
    const FiniteSet c = dl.level.set;
    Rational eta = min_on(f, c) / Rational(na);
    eta.canonicalize();
    BsgCertificate best = run_branch(a, b, c, eta, BsgBranch::Direct);

    // <1_B, 1_C∘1_A> = <1_A*1_B, 1_C>: pigeonhole 1_A∘1_C on -B
    const CountFunction g = diff_convolve(a, c).restricted(b.negated());
    if (!g.empty()) {
        const DominantLevel dl2 = dominant_level(g, Rational(1), default_level_floor(), Rational(na));
        const FiniteSet b_prime = dl2.level.set;
        Rational rho = min_on(g, b_prime) / Rational(na);
        rho.canonicalize();
        // 1_A∘1_C = 1_A * 1_{-C}
        BsgCertificate t = run_branch(a, c.negated(), b_prime, rho, BsgBranch::Transposed);
        if (t.measured_doubling < best.measured_doubling) best = std::move(t);
    }
    best.A = a;
    best.B = b;
    return best;
}

std::vector<std::string> verify(const BsgCertificate& cert) {
    std::vector<std::string> fails;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) fails.push_back(what);
    };
    const FiniteSet& a = cert.A;
    check(!cert.A_prime.empty(), "A' is empty");
    check(is_subset(cert.A_prime, cert.X), "A' not inside X");
    check(is_subset(cert.X, a), "X not inside A");
    const long dd = static_cast<long>(set_algebra(cert.A_prime, cert.A_prime, SetOp::Difference).size());
    check(cert.A_prime.empty() || ratio(dd, isize(cert.A_prime)) == cert.measured_doubling, "measured doubling mismatch");
    check(dd <= static_cast<long>(set_algebra(a, a, SetOp::Difference).size()), "|A'-A'| exceeds |A-A|");
    if (cert.trivial) return fails;

    const long na = isize(a), nx = isize(cert.X);
    const CountFunction f = convolve(a, cert.B_used);
    for (const auto& x : cert.C.elements())
        check(at_least_rational(f.at(x)) >= cert.eta * Rational(na), "hypothesis fails at " + element_to_string(x));
    check(Rational(nx) >= cert.eta * Rational(na), "|X| < eta|A|");
    Rational theta = ratio(1, kEpsDen) * cert.eta * cert.eta * Rational(na * na * isize(cert.C)) /
                     Rational(isize(cert.B_used) * isize(cert.B_used));
    theta.canonicalize();
    check(theta == cert.threshold, "bad-pair threshold mismatch");
    const CountFunction r = diff_convolve(a, a);
    const Ambient& amb = a.ambient();
    long bad = 0;
    std::map<Element, long> good_degree;
    for (const auto& p : cert.X.elements())
        for (const auto& q : cert.X.elements()) {
            if (at_least_rational(r.at(amb.sub(p, q))) <= theta) ++bad;
            else ++good_degree[p];
        }
    check(bad == cert.bad_pair_count, "bad pair count mismatch");
    check(kEpsDen * bad <= nx * nx, "more than |X|^2/8 bad pairs");
    for (const auto& p : cert.A_prime.elements())
        check(4 * good_degree[p] >= 3 * nx, "degree below 3|X|/4 at " + element_to_string(p));
    check(Rational(16 * isize(cert.A_prime)) >= cert.eta * Rational(na), "|A'| < eta|A|/16");
    return fails;
}

std::string to_string(ControlOracle oracle) {
    return oracle == ControlOracle::ExhaustiveWindow ? "exhaustive-window" : "candidates";
}

FiniteSet function_image(const ConvexFunctionSpec& f, const FiniteSet& x) {
    if (x.ambient().kind() != AmbientKind::Integers)
        throw Error(ErrorKind::InvalidArgument, "function images need a set of integers");
    if (f.kind() == ConvexFunctionSpec::Kind::NegativeLogarithm) return mult_embed(x).image.negated();
    std::vector<std::int64_t> ys;
    for (auto v : x.scalars()) {
        Rational y = f(Rational(static_cast<long>(v)));
        if (y.get_den() != 1 || !y.get_num().fits_slong_p())
            throw Error(ErrorKind::InvalidArgument, "f(" + std::to_string(v) + ") = " + to_string(y) + " is not a machine integer");
        ys.push_back(y.get_num().get_si());
    }
    return FiniteSet::integers(ys);
}

namespace {

ControlEstimate run_oracle(const FiniteSet& t, const ConvexDecomposeOptions& opts) {
    if (opts.oracle == ControlOracle::Candidates) return control_candidates(t);
    try {
        return control_exhaustive(t, opts.exhaustive);
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("control oracle failed: ") + e.what());
    }
}

}  // namespace

DecompositionCertificate convex_decompose(const FiniteSet& a, const ConvexFunctionSpec& f,
                                          const ConvexDecomposeOptions& opts) {
    if (a.ambient().kind() != AmbientKind::Integers)
        throw Error(ErrorKind::InvalidArgument, "convex_decompose needs a set of integers");
    if (a.empty()) throw Error(ErrorKind::EmptySet, "convex_decompose of the empty set");
    std::vector<Rational> pts;
    for (auto v : a.scalars()) pts.emplace_back(static_cast<long>(v));
    f.check_convex_on(pts);

    DecompositionCertificate cert;
    cert.A = a;
    cert.function = f.describe();
    const long n = isize(a);
    FiniteSet current(a.ambient(), {}), previous(a.ambient(), {});
    while (2 * isize(current) < n) {
        const FiniteSet t = set_minus(a, current);
        const FiniteSet b = run_oracle(t, opts).witness;
        const CountFunction tb = convolve(t, b);
        const FiniteSet s = dominant_level(tb, Rational(3)).level.set;
        const CountFunction sb = diff_convolve(s, b).restricted(t);
        if (sb.empty()) throw Error(ErrorKind::Internal, "1_S∘1_B vanishes on T");
        const FiniteSet t_prime = dominant_level(sb, Rational(1)).level.set;
        previous = current;
        current = set_union(current, t_prime);
        cert.step_sizes.push_back(static_cast<std::int64_t>(t_prime.size()));
    }
    cert.X = current;
    cert.Y = set_minus(a, previous);
    cert.fX = function_image(f, cert.X);
    cert.kappa_fX = control_candidates(cert.fX);
    cert.kappa_Y = run_oracle(cert.Y, opts);
    cert.product_times_size = cert.kappa_fX.value * cert.kappa_Y.value * Rational(n);
    cert.product_times_size.canonicalize();
    return cert;
}

EnergyChain energy_chain(const FiniteSet& a, int k) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "energy_chain needs k >= 1");
    if (a.size() < 2) throw Error(ErrorKind::InvalidArgument, "energy_chain needs |A| >= 2");
    const long na = isize(a);
    EnergyChain out;
    const CountFunction r = diff_convolve(a, a);
    const DominantLevel dl = dominant_level(r, Rational(2), default_level_floor(), Rational(na));
    out.delta = min_on(r, dl.level.set) / Rational(na);
    out.delta.canonicalize();
    out.S_prime = symmetry_set(r, na, out.delta);
    const long ns = isize(out.S_prime);

    out.A.push_back(a);
    for (int i = 0; i < k; ++i) {
        const FiniteSet& prev = i == 0 ? a : out.A[static_cast<std::size_t>(i - 1)];
        const CountFunction c = convolve(out.S_prime, out.A[static_cast<std::size_t>(i)]);
        FiniteSet next = at_least(c, prev, out.delta * ratio(BigInt(ns), pow2(static_cast<unsigned long>(i + 1))));
        if (next.empty()) {
            out.truncated = true;
            return out;
        }
        out.A.push_back(std::move(next));
    }
    const CountFunction last = diff_convolve(out.A[static_cast<std::size_t>(k)], out.A[static_cast<std::size_t>(k - 1)]);
    out.S = at_least(last, out.S_prime, out.delta * ratio(BigInt(na), pow2(static_cast<unsigned long>(k + 1))));
    if (out.S.empty()) {
        out.truncated = true;
        return out;
    }
    std::vector<Quantity> norms;
    for (const auto& ai : out.A) norms.push_back(lp_norm(diff_convolve(ai, out.S), Rational(3, 2)));
    out.selected_i = 1;
    for (int i = 1; i <= k; ++i) {
        out.ratios.push_back(norms[static_cast<std::size_t>(i - 1)] / norms[static_cast<std::size_t>(i)]);
        if (i == 1) continue;
        bool smaller = false;
        try {
            smaller = out.ratios.back() < out.ratios[static_cast<std::size_t>(out.selected_i - 1)];
        } catch (const Error& e) {
            // equal to every refined precision: a tie, kept on the smaller i
            if (e.kind() != ErrorKind::Undecidable) throw;
        }
        if (smaller) out.selected_i = i;
    }
    return out;
}

std::vector<std::string> verify(const EnergyChain& chain, const FiniteSet& a) {
    std::vector<std::string> fails;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) fails.push_back(what);
    };
    const long na = isize(a);
    check(!chain.A.empty() && chain.A.front() == a, "A_0 differs from A");
    check(symmetry_set(a, chain.delta) == chain.S_prime, "S' is not the delta symmetry set");
    const long ns = isize(chain.S_prime);
    for (std::size_t i = 0; i + 1 < chain.A.size(); ++i) {
        const FiniteSet& prev = i == 0 ? a : chain.A[i - 1];
        const CountFunction c = convolve(chain.S_prime, chain.A[i]);
        const Rational bound = chain.delta * ratio(BigInt(ns), pow2(static_cast<unsigned long>(i + 1)));
        check(is_subset(chain.A[i + 1], prev), "A_" + std::to_string(i + 1) + " not inside A_" + std::to_string(i) + "-1");
        for (const auto& x : prev.elements()) {
            bool meets = at_least_rational(c.at(x)) >= bound;
            check(meets == chain.A[i + 1].contains(x),
                  "membership of " + element_to_string(x) + " in A_" + std::to_string(i + 1) + " disagrees with its threshold");
        }
    }
    if (!chain.truncated) {
        const std::size_t k = chain.A.size() - 1;
        const CountFunction last = diff_convolve(chain.A[k], chain.A[k - 1]);
        const Rational bound = chain.delta * ratio(BigInt(na), pow2(static_cast<unsigned long>(k + 1)));
        check(is_subset(chain.S, chain.S_prime), "S not inside S'");
        for (const auto& x : chain.S_prime.elements())
            check((at_least_rational(last.at(x)) >= bound) == chain.S.contains(x),
                  "membership of " + element_to_string(x) + " in S disagrees with its threshold");
    }
    return fails;
}

}  // namespace acw
