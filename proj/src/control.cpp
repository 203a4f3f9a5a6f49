#include "acw/control.hpp"

#include <algorithm>
#include <bit>

#include <omp.h>

#include "acw/decompose.hpp"
#include "acw/error.hpp"

namespace acw {

std::string to_string(ControlMode mode) {
    switch (mode) {
        case ControlMode::ExactFiniteGroup: return "exact-finite-group";
        case ControlMode::ExhaustiveWindowLowerBound: return "exhaustive-window-lower-bound";
        case ControlMode::CandidateLowerBound: return "candidate-lower-bound";
    }
    return "?";
}

BigInt cube_sum(const FiniteSet& a, const FiniteSet& b, const ConvolutionOptions& opts) {
    CountFunction c = convolve(a, b, opts);
    __int128 acc = 0;
    bool fits = true;
    for (auto v : c.values()) {
        __int128 cube = static_cast<__int128>(v) * v * v;
        if (__builtin_add_overflow(acc, cube, &acc)) {
            fits = false;
            break;
        }
    }
    if (fits) {
        // __int128 -> mpz via two 64-bit halves
        const bool neg = acc < 0;
        unsigned __int128 u = neg ? static_cast<unsigned __int128>(-acc) : static_cast<unsigned __int128>(acc);
        BigInt hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~0ull));
        BigInt r = (hi << 64) + lo;
        return neg ? BigInt(-r) : r;
    }
    return power_sum(c, 3);
}

Rational control_ratio(const FiniteSet& a, const FiniteSet& b, const ConvolutionOptions& opts) {
    if (a.empty()) throw Error(ErrorKind::EmptySet, "control ratio with empty A");
    if (b.empty()) throw Error(ErrorKind::EmptySet, "control ratio with empty B");
    require_same_group(a.ambient(), b.ambient(), "control ratio");
    BigInt na(static_cast<unsigned long>(a.size())), nb(static_cast<unsigned long>(b.size()));
    Rational r(cube_sum(a, b, opts), na * na * nb * nb);
    r.canonicalize();
    return r;
}

namespace {

// Subsets B are {0} ∪ {j+1 : bit j of mask}; the universe is Z/n or a width-w
// window of Z with min(B) = 0.
struct Universe {
    bool cyclic = false;
    std::int64_t n = 0;
    std::int64_t width = 0;
    int bits = 0;  // number of free elements (universe size - 1)
    std::vector<std::int64_t> offsets;  // elements of A as conv indices at u = 0
    std::string description;
    ControlMode mode = ControlMode::ExactFiniteGroup;

    std::size_t index(std::int64_t a, std::int64_t u) const {
        return static_cast<std::size_t>(cyclic ? (a + u) % n : a + u);
    }

    FiniteSet witness(std::uint64_t mask, const Ambient& ambient) const {
        std::vector<std::int64_t> xs{0};
        for (int j = 0; j < bits; ++j)
            if (mask >> j & 1) xs.push_back(j + 1);
        if (cyclic) return FiniteSet::cyclic(n, xs);
        std::vector<Element> els;
        for (auto x : xs) els.push_back(element(x));
        return FiniteSet(ambient.with_window(std::max<std::int64_t>(ambient.window(), width)), std::move(els));
    }
};

Universe make_universe(const FiniteSet& a, const ExhaustiveOptions& opts) {
    if (a.empty()) throw Error(ErrorKind::EmptySet, "control of the empty set");
    Universe u;
    const Ambient& amb = a.ambient();
    if (amb.kind() == AmbientKind::Cyclic) {
        if (amb.modulus() > opts.max_modulus)
            throw Error(ErrorKind::UniverseTooLarge, "Z/" + std::to_string(amb.modulus()) + " exceeds the exhaustive limit " +
                                                         std::to_string(opts.max_modulus) + "; use candidates");
        u.cyclic = true;
        u.n = amb.modulus();
        u.bits = static_cast<int>(u.n - 1);
        for (const auto& e : a.elements()) u.offsets.push_back(e[0]);
        u.description = "all nonempty B in Z/" + std::to_string(u.n) + " up to translation";
        u.mode = ControlMode::ExactFiniteGroup;
    } else if (amb.kind() == AmbientKind::Integers) {
        const std::int64_t lo = a.elements().front()[0], hi = a.elements().back()[0];
        const std::int64_t span = checked_sub(hi, lo);
        std::int64_t width = 0;
        if (opts.window) {
            width = checked_add(checked_sub(opts.window->second, opts.window->first), 1);
            if (width < 1) throw Error(ErrorKind::InvalidArgument, "empty search window");
        } else {
            width = checked_add(checked_mul(2, span), 1);
        }
        if (width > 64) throw Error(ErrorKind::UniverseTooLarge, "search window of width " + std::to_string(width));
        u.width = width;
        u.bits = static_cast<int>(width - 1);
        for (const auto& e : a.elements()) u.offsets.push_back(e[0] - lo);
        u.description = "all nonempty B in Z of diameter < " + std::to_string(width) + " (window width " +
                        std::to_string(width) + ") up to translation";
        u.mode = ControlMode::ExhaustiveWindowLowerBound;
    } else {
        throw Error(ErrorKind::UnsupportedOperation, "exhaustive control needs Z/n or an integer window, got " + amb.describe());
    }
    if (u.bits >= 63 || (std::uint64_t{1} << u.bits) > opts.max_subsets)
        throw Error(ErrorKind::UniverseTooLarge, "2^" + std::to_string(u.bits) + " subsets exceed the configured limit");
    return u;
}

struct Best {
    std::int64_t s3 = -1;
    std::int64_t size = 0;
    std::uint64_t mask = 0;
};

// x strictly better than y: larger ratio, then smaller set, then lexicographically smaller.
bool better(const Best& x, const Best& y) {
    if (y.s3 < 0) return x.s3 >= 0;
    if (x.s3 < 0) return false;
    __int128 lhs = static_cast<__int128>(x.s3) * y.size * y.size;
    __int128 rhs = static_cast<__int128>(y.s3) * x.size * x.size;
    if (lhs != rhs) return lhs > rhs;
    if (x.size != y.size) return x.size < y.size;
    std::uint64_t diff = x.mask ^ y.mask;
    if (diff == 0) return false;
    return (x.mask >> std::countr_zero(diff)) & 1;
}

ControlEstimate finish(const FiniteSet& a, const Universe& u, const Best& best) {
    ControlEstimate est;
    const long na = static_cast<long>(a.size());
    est.value = Rational(best.s3, na * na * best.size * best.size);
    est.value.canonicalize();
    est.mode = u.mode;
    est.witness = u.witness(best.mask, a.ambient());
    est.universe = u.description;
    return est;
}

}  // namespace

ControlEstimate control_exhaustive(const FiniteSet& a, const ExhaustiveOptions& opts) {
    const Universe u = make_universe(a, opts);
    const int top = std::min(u.bits, 10);
    const int low = u.bits - top;
    const std::uint64_t chunks = std::uint64_t{1} << top;
    const std::size_t na = u.offsets.size();

    // idx[x * na + i] = counter slot of a_i + x, compressed so a wide A does
    // not cost a span-sized array per chunk
    std::vector<std::size_t> raw(static_cast<std::size_t>(u.bits + 1) * na);
    for (int x = 0; x <= u.bits; ++x)
        for (std::size_t i = 0; i < na; ++i) raw[static_cast<std::size_t>(x) * na + i] = u.index(u.offsets[i], x);
    std::vector<std::size_t> used(raw);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::vector<std::uint32_t> idx(raw.size());
    for (std::size_t t = 0; t < raw.size(); ++t)
        idx[t] = static_cast<std::uint32_t>(std::lower_bound(used.begin(), used.end(), raw[t]) - used.begin());
    const std::size_t conv_len = used.size();

    std::vector<Best> chunk_best(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::uint64_t k = 0; k < chunks; ++k) {
        std::vector<std::int32_t> cnt(conv_len, 0);
        std::int64_t s3 = 0, size = 0;
        auto add = [&](int x) {
            const std::uint32_t* p = &idx[static_cast<std::size_t>(x) * na];
            for (std::size_t i = 0; i < na; ++i) {
                std::int64_t c = cnt[p[i]]++;
                s3 += 3 * c * c + 3 * c + 1;
            }
            ++size;
        };
        auto remove = [&](int x) {
            const std::uint32_t* p = &idx[static_cast<std::size_t>(x) * na];
            for (std::size_t i = 0; i < na; ++i) {
                std::int64_t c = cnt[p[i]]--;
                s3 -= 3 * c * c - 3 * c + 1;
            }
            --size;
        };
        std::uint64_t mask = k << low;
        add(0);
        for (int j = low; j < u.bits; ++j)
            if (mask >> j & 1) add(j + 1);
        Best best{s3, size, mask};
        const std::uint64_t steps = std::uint64_t{1} << low;
        for (std::uint64_t i = 1; i < steps; ++i) {
            const int j = std::countr_zero(i);
            mask ^= std::uint64_t{1} << j;
            if (mask >> j & 1) add(j + 1);
            else remove(j + 1);
            Best cur{s3, size, mask};
            if (better(cur, best)) best = cur;
        }
        chunk_best[k] = best;
    }
    Best best;
    for (const auto& b : chunk_best)
        if (better(b, best)) best = b;
    return finish(a, u, best);
}

ControlEstimate control_exhaustive_reference(const FiniteSet& a, const ExhaustiveOptions& opts) {
    const Universe u = make_universe(a, opts);
    ConvolutionOptions serial;
    serial.method = ConvolutionOptions::Method::Reference;
    std::optional<ControlEstimate> best;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << u.bits); ++mask) {
        FiniteSet b = u.witness(mask, a.ambient());
        Rational r = control_ratio(a, b, serial);
        if (!best || r > best->value || (r == best->value && b.canonical_less(best->witness))) {
            best = ControlEstimate{r, u.mode, b, u.description};
        }
    }
    return *best;
}

std::vector<FiniteSet> default_candidates(const FiniteSet& a) {
    if (a.empty()) throw Error(ErrorKind::EmptySet, "candidates for the empty set");
    std::vector<FiniteSet> out;
    auto push = [&](FiniteSet s) {
        if (s.empty()) return;
        for (const auto& t : out)
            if (t == s) return;
        out.push_back(std::move(s));
    };
    push(a);
    push(a.negated());
    push(set_algebra(a, a, a.ambient().kind() == AmbientKind::Multiplicative ? SetOp::Ratio : SetOp::Difference));
    const Ambient& amb = a.ambient();
    if (amb.kind() == AmbientKind::Integers || amb.kind() == AmbientKind::Cyclic) {
        const std::int64_t n = static_cast<std::int64_t>(a.size());
        auto xs = a.scalars();
        std::int64_t step = 1;
        if (xs.size() >= 2) {
            std::vector<std::int64_t> gaps;
            for (std::size_t i = 1; i < xs.size(); ++i) gaps.push_back(xs[i] - xs[i - 1]);
            std::sort(gaps.begin(), gaps.end());
            step = gaps[(gaps.size() - 1) / 2];
        }
        for (std::int64_t d : {std::int64_t{1}, step}) {
            std::vector<std::int64_t> ap;
            for (std::int64_t i = 0; i < n; ++i) ap.push_back(checked_mul(i, d));
            push(amb.kind() == AmbientKind::Cyclic ? FiniteSet::cyclic(amb.modulus(), ap) : FiniteSet::integers(ap));
        }
    }
    CountFunction r = diff_convolve(a, a);
    const long size = static_cast<long>(a.size());
    for (long j = 0; (1L << j) <= 2 * size; ++j) {
        Rational delta(1, 1L << j);
        push(symmetry_set(r, size, delta));
    }
    return out;
}

ControlEstimate control_candidates(const FiniteSet& a, const std::vector<FiniteSet>& candidates,
                                   const ConvolutionOptions& opts) {
    if (candidates.empty()) throw Error(ErrorKind::InvalidArgument, "candidate list is empty");
    std::optional<ControlEstimate> best;
    for (const auto& b : candidates) {
        Rational r = control_ratio(a, b, opts);
        if (!best || r > best->value || (r == best->value && b.canonical_less(best->witness)))
            best = ControlEstimate{r, ControlMode::CandidateLowerBound, b, ""};
    }
    best->universe = std::to_string(candidates.size()) + " candidate sets";
    return *best;
}

ControlEstimate control_candidates(const FiniteSet& a, const ConvolutionOptions& opts) {
    return control_candidates(a, default_candidates(a), opts);
}

WeakControlReport weak_control(const FiniteSet& a, const ConvolutionOptions& opts) {
    if (a.empty()) throw Error(ErrorKind::EmptySet, "weak control of the empty set");
    WeakControlReport r;
    r.cube_autocorrelation = cube_sum(a, a.negated(), opts);
    BigInt n(static_cast<unsigned long>(a.size()));
    r.implied_kappa_lower = Rational(r.cube_autocorrelation, n * n * n * n);
    r.implied_kappa_lower.canonicalize();
    return r;
}

Quantity holder_upper_bound(const FiniteSet& a, const FiniteSet& s, const Rational& kappa) {
    if (kappa <= 0 || kappa > 1) throw Error(ErrorKind::InvalidArgument, "kappa must lie in (0,1], got " + to_string(kappa));
    return Quantity::power(kappa, Rational(1, 6)) * Quantity::power(Rational(static_cast<long>(a.size())), Rational(5, 6)) *
           Quantity::power(Rational(static_cast<long>(s.size())), Rational(5, 6));
}

}  // namespace acw
