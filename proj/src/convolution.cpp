#include "acw/convolution.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

#include "acw/error.hpp"
#include "acw/kernels.hpp"

namespace acw {

namespace {

// Kronecker layout: element offsets from the per-coordinate minima are packed
// into one index with the first coordinate most significant, so index order
// matches lexicographic element order and sums never carry between coordinates.
struct Layout {
    std::vector<std::int64_t> min_f, min_g;
    std::vector<std::uint64_t> stride, range;
    std::uint64_t length = 0;
};

std::optional<Layout> make_layout(const std::vector<Element>& kf, const std::vector<Element>& kg, std::size_t dim) {
    Layout l;
    l.min_f.assign(dim, INT64_MAX);
    l.min_g.assign(dim, INT64_MAX);
    std::vector<std::int64_t> max_f(dim, INT64_MIN), max_g(dim, INT64_MIN);
    for (const auto& x : kf)
        for (std::size_t i = 0; i < dim; ++i) {
            l.min_f[i] = std::min(l.min_f[i], x[i]);
            max_f[i] = std::max(max_f[i], x[i]);
        }
    for (const auto& x : kg)
        for (std::size_t i = 0; i < dim; ++i) {
            l.min_g[i] = std::min(l.min_g[i], x[i]);
            max_g[i] = std::max(max_g[i], x[i]);
        }
    l.range.resize(dim);
    l.stride.resize(dim);
    const __int128 limit = static_cast<__int128>(1) << 62;
    __int128 total = 1;
    for (std::size_t i = dim; i-- > 0;) {
        __int128 r = static_cast<__int128>(max_f[i]) - l.min_f[i] + static_cast<__int128>(max_g[i]) - l.min_g[i] + 1;
        if (r > limit) return std::nullopt;
        l.stride[i] = static_cast<std::uint64_t>(total);
        total *= r;
        if (total > limit) return std::nullopt;
        l.range[i] = static_cast<std::uint64_t>(r);
    }
    l.length = static_cast<std::uint64_t>(total);
    return l;
}

std::uint64_t encode(const Element& x, const std::vector<std::int64_t>& mins, const Layout& l) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < mins.size(); ++i)
        idx += static_cast<std::uint64_t>(static_cast<__int128>(x[i]) - mins[i]) * l.stride[i];
    return idx;
}

Element decode(std::uint64_t idx, const Layout& l) {
    Element x(l.stride.size());
    for (std::size_t i = 0; i < l.stride.size(); ++i) {
        std::uint64_t o = idx / l.stride[i];
        idx %= l.stride[i];
        x[i] = checked_add(checked_add(static_cast<std::int64_t>(o), l.min_f[i]), l.min_g[i]);
    }
    return x;
}

template <class K>
kernels::Seq<K> run_kernel(const kernels::Seq<K>& a, const kernels::Seq<K>& b, std::uint64_t length,
                           const ConvolutionOptions& opts) {
    using M = ConvolutionOptions::Method;
    switch (opts.method) {
        case M::Reference: return kernels::naive_serial(a, b, length);
        case M::Naive: return kernels::naive_parallel(a, b, length);
        case M::Accelerated: return kernels::ntt(a, b, length);
        case M::Auto: break;
    }
    const std::uint64_t pairs_hint = static_cast<std::uint64_t>(a.size()) * b.size();
    int primes = 0;
    if (pairs_hint >= opts.threshold) primes = kernels::primes_needed(kernels::coefficient_bound(a, b));
    switch (kernels::choose(a.size(), b.size(), length, primes, opts.threshold)) {
        case kernels::Choice::NaiveSerial: return kernels::naive_serial(a, b, length);
        case kernels::Choice::NaiveParallel: return kernels::naive_parallel(a, b, length);
        case kernels::Choice::Ntt: return kernels::ntt(a, b, length);
    }
    return {};
}

// Value adaptors between stored values V and kernel values K.
struct CountAdaptor {
    using V = std::int64_t;
    using K = std::int64_t;
    std::int64_t scale_f = 1, scale_g = 1;
    void prepare(const CountFunction& f, const CountFunction& g) {
        kernels::IntSeq a, b;
        a.val = f.values();
        b.val = g.values();
        if (kernels::coefficient_bound(a, b) >= (BigInt(1) << 62))
            throw Error(ErrorKind::Overflow, "count convolution exceeds 62-bit coefficients");
    }
    K to_kernel_f(const V& v) const { return v; }
    K to_kernel_g(const V& v) const { return v; }
    V from_kernel(const K& k) const { return k; }
};

struct RationalAdaptor {
    using V = Rational;
    using K = BigInt;
    BigInt den_f{1}, den_g{1}, den_out{1};
    void prepare(const DensityFunction& f, const DensityFunction& g) {
        for (const auto& v : f.values()) den_f = lcm(den_f, v.get_den());
        for (const auto& v : g.values()) den_g = lcm(den_g, v.get_den());
        den_out = den_f * den_g;
    }
    K to_kernel_f(const V& v) const { return v.get_num() * (den_f / v.get_den()); }
    K to_kernel_g(const V& v) const { return v.get_num() * (den_g / v.get_den()); }
    V from_kernel(const K& k) const {
        Rational r(k, den_out);
        r.canonicalize();
        return r;
    }
};

Ambient result_ambient(const Ambient& a, const Ambient& b, const ConvolutionOptions& opts) {
    if (a.kind() != AmbientKind::Integers) return a;
    return opts.widen_window ? Ambient::integers(checked_add(a.window(), b.window()))
                             : Ambient::integers(std::max(a.window(), b.window()));
}

template <class Adaptor>
SparseFunction<typename Adaptor::V> convolve_impl(const SparseFunction<typename Adaptor::V>& f,
                                                  const SparseFunction<typename Adaptor::V>& g,
                                                  const ConvolutionOptions& opts) {
    using V = typename Adaptor::V;
    using K = typename Adaptor::K;
    require_same_group(f.ambient(), g.ambient(), "convolution");
    const Ambient amb = result_ambient(f.ambient(), g.ambient(), opts);
    if (f.empty() || g.empty()) return SparseFunction<V>(amb);

    Adaptor ad;
    ad.prepare(f, g);
    const std::size_t dim = amb.dimension();
    std::vector<Element> keys;
    std::vector<V> values;

    if (auto layout = make_layout(f.keys(), g.keys(), dim)) {
        kernels::Seq<K> a, b;
        a.idx.reserve(f.size());
        a.val.reserve(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            a.idx.push_back(encode(f.keys()[i], layout->min_f, *layout));
            a.val.push_back(ad.to_kernel_f(f.values()[i]));
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            b.idx.push_back(encode(g.keys()[i], layout->min_g, *layout));
            b.val.push_back(ad.to_kernel_g(g.values()[i]));
        }
        kernels::Seq<K> c = run_kernel(a, b, layout->length, opts);
        if (amb.kind() == AmbientKind::Cyclic) {
            const std::int64_t n = amb.modulus();
            std::map<std::int64_t, K> folded;
            for (std::size_t i = 0; i < c.size(); ++i) {
                std::int64_t x = decode(c.idx[i], *layout)[0] % n;
                if (x < 0) x += n;
                folded[x] += c.val[i];
            }
            for (auto& [x, v] : folded) {
                if (v == 0) continue;
                keys.push_back(element(x));
                values.push_back(ad.from_kernel(v));
            }
        } else {
            keys.reserve(c.size());
            values.reserve(c.size());
            for (std::size_t i = 0; i < c.size(); ++i) {
                keys.push_back(decode(c.idx[i], *layout));
                values.push_back(ad.from_kernel(c.val[i]));
            }
        }
    } else {
        // Coordinates too spread for an index layout: hash the group elements directly.
        std::unordered_map<Element, K, ElementHash> acc;
        for (std::size_t i = 0; i < f.size(); ++i) {
            K fv = ad.to_kernel_f(f.values()[i]);
            for (std::size_t j = 0; j < g.size(); ++j)
                acc[amb.add(f.keys()[i], g.keys()[j])] += fv * ad.to_kernel_g(g.values()[j]);
        }
        std::vector<Element> ks;
        for (auto& [k, v] : acc)
            if (v != 0) ks.push_back(k);
        std::sort(ks.begin(), ks.end());
        for (auto& k : ks) {
            values.push_back(ad.from_kernel(acc[k]));
            keys.push_back(std::move(k));
        }
    }
    if (amb.kind() == AmbientKind::Integers && !opts.widen_window) {
        for (const auto& k : keys)
            if (!amb.contains(k))
                throw Error(ErrorKind::WindowOverflow,
                            "result element " + element_to_string(k) + " outside " + amb.describe());
    }
    return SparseFunction<V>::from_sorted(amb, std::move(keys), std::move(values));
}

template <class V>
SparseFunction<V> reflect_impl(const SparseFunction<V>& f) {
    std::vector<std::pair<Element, V>> pairs;
    pairs.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) pairs.emplace_back(f.ambient().neg(f.keys()[i]), f.values()[i]);
    return SparseFunction<V>::from_pairs(f.ambient(), std::move(pairs));
}

}  // namespace

DensityFunction convolve(const DensityFunction& f, const DensityFunction& g, const ConvolutionOptions& opts) {
    return convolve_impl<RationalAdaptor>(f, g, opts);
}

CountFunction convolve(const CountFunction& f, const CountFunction& g, const ConvolutionOptions& opts) {
    return convolve_impl<CountAdaptor>(f, g, opts);
}

CountFunction convolve(const FiniteSet& a, const FiniteSet& b, const ConvolutionOptions& opts) {
    return convolve(CountFunction::indicator(a), CountFunction::indicator(b), opts);
}

DensityFunction reflect(const DensityFunction& f) { return reflect_impl(f); }
CountFunction reflect(const CountFunction& f) { return reflect_impl(f); }

DensityFunction diff_convolve(const DensityFunction& f, const DensityFunction& g, const ConvolutionOptions& opts) {
    return convolve(f, reflect(g), opts);
}

CountFunction diff_convolve(const CountFunction& f, const CountFunction& g, const ConvolutionOptions& opts) {
    return convolve(f, reflect(g), opts);
}

CountFunction diff_convolve(const FiniteSet& a, const FiniteSet& b, const ConvolutionOptions& opts) {
    return convolve(CountFunction::indicator(a), CountFunction::indicator(b.negated()), opts);
}

Quantity lp_norm(const DensityFunction& f, const NormOrder& p) { return lp_norm_of_values(f.values(), p); }

Quantity lp_norm(const CountFunction& f, const NormOrder& p) {
    std::vector<Rational> vals;
    vals.reserve(f.size());
    for (auto v : f.values()) vals.emplace_back(static_cast<long>(v));
    return lp_norm_of_values(vals, p);
}

BigInt power_sum(const CountFunction& f, unsigned p) {
    BigInt acc(0);
    for (auto v : f.values()) {
        BigInt a(static_cast<long>(v < 0 ? -v : v));
        acc += acw::pow(a, p);
    }
    return acc;
}

FiniteSet set_algebra(const FiniteSet& a, const FiniteSet& b, SetOp op) {
    require_same_group(a.ambient(), b.ambient(), "set algebra");
    const bool mult = a.ambient().kind() == AmbientKind::Multiplicative;
    const bool additive_op = op == SetOp::Sum || op == SetOp::Difference;
    if (mult == additive_op) {
        throw Error(ErrorKind::UnsupportedOperation,
                    std::string(additive_op ? "sum/difference" : "product/ratio") + " not defined in " +
                        a.ambient().describe());
    }
    const bool forward = op == SetOp::Sum || op == SetOp::Product;
    CountFunction c = forward ? convolve(a, b) : diff_convolve(a, b);
    return c.support();
}

SetStats stats(const FiniteSet& a, const ConvolutionOptions& opts) {
    if (a.empty()) throw Error(ErrorKind::EmptySet, "stats of the empty set");
    SetStats s;
    s.size = static_cast<std::int64_t>(a.size());
    CountFunction diff = diff_convolve(a, a, opts);
    s.diffset_size = static_cast<std::int64_t>(diff.size());
    s.energy = power_sum(diff, 2);
    const Element zero = a.ambient().zero();
    for (std::size_t i = 0; i < diff.size(); ++i)
        if (diff.keys()[i] != zero) s.max_autocorrelation = std::max(s.max_autocorrelation, diff.values()[i]);
    s.sumset_size = static_cast<std::int64_t>(convolve(a, a, opts).size());
    return s;
}

BigInt energy(const FiniteSet& a, const ConvolutionOptions& opts) { return power_sum(diff_convolve(a, a, opts), 2); }

}  // namespace acw
