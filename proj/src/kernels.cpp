#include "acw/kernels.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <type_traits>
#include <unordered_map>

#include <omp.h>

#include "acw/error.hpp"

namespace acw::kernels {

namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 24;

void multiply_add(std::int64_t& acc, std::int64_t a, std::int64_t b) { acc += a * b; }
void multiply_add(BigInt& acc, const BigInt& a, const BigInt& b) {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

template <class V>
Seq<V> from_map(std::unordered_map<std::uint64_t, V>& acc) {
    std::vector<std::uint64_t> keys;
    keys.reserve(acc.size());
    for (auto& [k, v] : acc)
        if (v != 0) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    Seq<V> out;
    out.idx = keys;
    out.val.reserve(keys.size());
    for (auto k : keys) out.val.push_back(std::move(acc[k]));
    return out;
}

template <class V>
void append_dense(Seq<V>& out, std::vector<V>& dense, std::uint64_t offset) {
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0) {
            out.idx.push_back(offset + i);
            out.val.push_back(std::move(dense[i]));
        }
    }
}

template <class V>
Seq<V> naive_serial_impl(const Seq<V>& f, const Seq<V>& g, std::uint64_t length) {
    Seq<V> out;
    if (f.size() == 0 || g.size() == 0) return out;
    if (length <= (std::uint64_t{1} << 16)) {
        std::vector<V> dense(length, V(0));
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) multiply_add(dense[f.idx[i] + g.idx[j]], f.val[i], g.val[j]);
        append_dense(out, dense, 0);
        return out;
    }
    std::unordered_map<std::uint64_t, V> acc;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) multiply_add(acc[f.idx[i] + g.idx[j]], f.val[i], g.val[j]);
    return from_map(acc);
}

template <class V>
Seq<V> naive_parallel_impl(const Seq<V>& f, const Seq<V>& g, std::uint64_t length) {
    Seq<V> out;
    if (f.size() == 0 || g.size() == 0) return out;
    const int threads = omp_get_max_threads();
    if (length > kDenseLimit) {
        // Sparse output: thread-local maps over slices of f, merged afterwards.
        std::vector<std::unordered_map<std::uint64_t, V>> local(static_cast<std::size_t>(threads));
#pragma omp parallel for schedule(dynamic, 16)
        for (std::size_t i = 0; i < f.size(); ++i) {
            auto& acc = local[static_cast<std::size_t>(omp_get_thread_num())];
            for (std::size_t j = 0; j < g.size(); ++j) multiply_add(acc[f.idx[i] + g.idx[j]], f.val[i], g.val[j]);
        }
        auto& merged = local[0];
        for (std::size_t t = 1; t < local.size(); ++t)
            for (auto& [k, v] : local[t]) merged[k] += v;
        return from_map(merged);
    }
    const std::uint64_t min_block = 1024;
    std::uint64_t blocks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(
                                                          static_cast<std::uint64_t>(threads) * 8, (length + min_block - 1) / min_block));
    const std::uint64_t block = (length + blocks - 1) / blocks;
    blocks = (length + block - 1) / block;
    std::vector<Seq<V>> parts(blocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::uint64_t b = 0; b < blocks; ++b) {
        const std::uint64_t lo = b * block;
        const std::uint64_t hi = std::min(length, lo + block);
        std::vector<V> dense(hi - lo, V(0));
        for (std::size_t i = 0; i < f.size(); ++i) {
            const std::uint64_t a = f.idx[i];
            if (a >= hi) break;
            const std::uint64_t from = lo > a ? lo - a : 0;
            const std::uint64_t to = hi - a;
            auto j0 = static_cast<std::size_t>(std::lower_bound(g.idx.begin(), g.idx.end(), from) - g.idx.begin());
            for (std::size_t j = j0; j < g.size() && g.idx[j] < to; ++j)
                multiply_add(dense[a + g.idx[j] - lo], f.val[i], g.val[j]);
        }
        append_dense(parts[b], dense, lo);
    }
    for (auto& p : parts) {
        out.idx.insert(out.idx.end(), p.idx.begin(), p.idx.end());
        out.val.insert(out.val.end(), std::make_move_iterator(p.val.begin()), std::make_move_iterator(p.val.end()));
    }
    return out;
}

// ---------------------------------------------------------------- NTT

constexpr std::array<std::uint32_t, kMaxPrimes> kPrimes = {998244353u, 167772161u, 469762049u, 754974721u,
                                                           1224736769u, 2013265921u, 1811939329u, 2113929217u};

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

std::uint32_t primitive_root(std::uint32_t p) {
    std::vector<std::uint64_t> fac;
    std::uint64_t n = p - 1;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            fac.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) fac.push_back(n);
    for (std::uint32_t g = 2;; ++g) {
        bool ok = std::all_of(fac.begin(), fac.end(), [&](std::uint64_t q) { return pow_mod(g, (p - 1) / q, p) != 1; });
        if (ok) return g;
    }
}

const std::array<std::uint32_t, kMaxPrimes>& roots() {
    static const std::array<std::uint32_t, kMaxPrimes> r = [] {
        std::array<std::uint32_t, kMaxPrimes> out{};
        for (int i = 0; i < kMaxPrimes; ++i) out[i] = primitive_root(kPrimes[i]);
        return out;
    }();
    return r;
}

void transform(std::vector<std::uint32_t>& a, bool inverse, std::uint32_t p, std::uint32_t g) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::uint64_t w = pow_mod(g, (p - 1) / len, p);
        if (inverse) w = pow_mod(w, p - 2, p);
        const std::size_t half = len / 2;
        std::vector<std::uint32_t> tw(half);
        tw[0] = 1;
        for (std::size_t k = 1; k < half; ++k) tw[k] = static_cast<std::uint32_t>(tw[k - 1] * w % p);
#pragma omp parallel for schedule(static) if (n >= (1u << 16))
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                std::uint32_t u = a[i + k];
                std::uint32_t v = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i + k + half]) * tw[k] % p);
                std::uint32_t s = u + v >= p ? u + v - p : u + v;
                a[i + k] = s;
                a[i + k + half] = u >= v ? u - v : u + p - v;
            }
        }
    }
    if (inverse) {
        std::uint64_t inv_n = pow_mod(n, p - 2, p);
#pragma omp parallel for schedule(static) if (n >= (1u << 16))
        for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<std::uint32_t>(a[i] * inv_n % p);
    }
}

std::uint32_t residue(std::int64_t v, std::uint32_t p) {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

std::uint32_t residue(const BigInt& v, std::uint32_t p) {
    return static_cast<std::uint32_t>(mpz_fdiv_ui(v.get_mpz_t(), p));
}

template <class V>
std::vector<std::uint32_t> cyclic_product(const Seq<V>& f, const Seq<V>& g, std::size_t n, int prime) {
    const std::uint32_t p = kPrimes[static_cast<std::size_t>(prime)];
    const std::uint32_t r = roots()[static_cast<std::size_t>(prime)];
    std::vector<std::uint32_t> a(n, 0), b(n, 0);
    for (std::size_t i = 0; i < f.size(); ++i) a[f.idx[i]] = residue(f.val[i], p);
    for (std::size_t i = 0; i < g.size(); ++i) b[g.idx[i]] = residue(g.val[i], p);
    transform(a, false, p, r);
    transform(b, false, p, r);
#pragma omp parallel for schedule(static) if (n >= (1u << 16))
    for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i]) * b[i] % p);
    transform(a, true, p, r);
    return a;
}

// Garner mixed-radix digits: x = d0 + d1 p0 + d2 p0 p1 + ...
struct Garner {
    int k;
    std::array<std::array<std::uint64_t, kMaxPrimes>, kMaxPrimes> inv{};  // inv[i][j] = p_j^-1 mod p_i
    explicit Garner(int primes) : k(primes) {
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < i; ++j) inv[i][j] = pow_mod(kPrimes[j], kPrimes[i] - 2, kPrimes[i]);
    }
    std::array<std::uint64_t, kMaxPrimes> digits(const std::array<std::uint32_t, kMaxPrimes>& res) const {
        std::array<std::uint64_t, kMaxPrimes> d{};
        for (int i = 0; i < k; ++i) {
            const std::uint64_t p = kPrimes[i];
            std::uint64_t x = res[i];
            for (int j = 0; j < i; ++j) {
                x = (x + p - d[j] % p) % p;
                x = x * inv[i][j] % p;
            }
            d[i] = x;
        }
        return d;
    }
};

template <class V>
Seq<V> ntt_impl(const Seq<V>& f, const Seq<V>& g, std::uint64_t length) {
    Seq<V> out;
    if (f.size() == 0 || g.size() == 0) return out;
    const std::uint64_t n = std::bit_ceil(std::max<std::uint64_t>(length, 2));
    if (n > kMaxNttLength) throw Error(ErrorKind::UnsupportedOperation, "transform length exceeds 2^23");
    const int k = primes_needed(coefficient_bound(f, g));
    if (k == 0) throw Error(ErrorKind::UnsupportedOperation, "coefficients too large for the transform");
    std::vector<std::vector<std::uint32_t>> res(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) res[static_cast<std::size_t>(i)] = cyclic_product(f, g, static_cast<std::size_t>(n), i);

    Garner garner(k);
    BigInt modulus(1);
    for (int i = 0; i < k; ++i) modulus *= kPrimes[static_cast<std::size_t>(i)];
    const BigInt half = modulus / 2;
    std::array<std::uint32_t, kMaxPrimes> r{};
    for (std::uint64_t i = 0; i < length; ++i) {
        bool zero = true;
        for (int j = 0; j < k; ++j) {
            r[j] = res[static_cast<std::size_t>(j)][i];
            zero = zero && r[j] == 0;
        }
        if (zero) continue;
        auto d = garner.digits(r);
        if constexpr (std::is_same_v<V, std::int64_t>) {
            if (k <= 4) {
                __int128 x = 0, radix = 1, m = 1;
                for (int j = 0; j < k; ++j) m *= kPrimes[static_cast<std::size_t>(j)];
                for (int j = 0; j < k; ++j) {
                    x += static_cast<__int128>(d[j]) * radix;
                    radix *= kPrimes[static_cast<std::size_t>(j)];
                }
                if (x > m / 2) x -= m;
                out.idx.push_back(i);
                out.val.push_back(static_cast<std::int64_t>(x));
                continue;
            }
        }
        BigInt x(0), radix(1);
        for (int j = 0; j < k; ++j) {
            x += radix * BigInt(static_cast<unsigned long>(d[j]));
            radix *= kPrimes[static_cast<std::size_t>(j)];
        }
        if (x > half) x -= modulus;
        out.idx.push_back(i);
        if constexpr (std::is_same_v<V, std::int64_t>) out.val.push_back(x.get_si());
        else out.val.push_back(x);
    }
    return out;
}

template <class V>
BigInt bound_impl(const Seq<V>& f, const Seq<V>& g) {
    auto norms = [](const Seq<V>& s) {
        BigInt l1(0), linf(0);
        for (const auto& v : s.val) {
            BigInt a(v);
            a = ::abs(a);
            l1 += a;
            if (a > linf) linf = a;
        }
        return std::pair{l1, linf};
    };
    auto [f1, finf] = norms(f);
    auto [g1, ginf] = norms(g);
    BigInt a = f1 * ginf, b = finf * g1;
    return a < b ? a : b;
}

}  // namespace

IntSeq naive_serial(const IntSeq& f, const IntSeq& g, std::uint64_t length) { return naive_serial_impl(f, g, length); }
BigSeq naive_serial(const BigSeq& f, const BigSeq& g, std::uint64_t length) { return naive_serial_impl(f, g, length); }
IntSeq naive_parallel(const IntSeq& f, const IntSeq& g, std::uint64_t length) {
    return naive_parallel_impl(f, g, length);
}
BigSeq naive_parallel(const BigSeq& f, const BigSeq& g, std::uint64_t length) {
    return naive_parallel_impl(f, g, length);
}
IntSeq ntt(const IntSeq& f, const IntSeq& g, std::uint64_t length) { return ntt_impl(f, g, length); }
BigSeq ntt(const BigSeq& f, const BigSeq& g, std::uint64_t length) { return ntt_impl(f, g, length); }

BigInt coefficient_bound(const IntSeq& f, const IntSeq& g) { return bound_impl(f, g); }
BigInt coefficient_bound(const BigSeq& f, const BigSeq& g) { return bound_impl(f, g); }

int primes_needed(const BigInt& bound) {
    BigInt need = 2 * bound + 1;
    BigInt m(1);
    for (int k = 1; k <= kMaxPrimes; ++k) {
        m *= kPrimes[static_cast<std::size_t>(k - 1)];
        if (m > need) return k;
    }
    return 0;
}

Choice choose(std::size_t nf, std::size_t ng, std::uint64_t length, int primes, std::size_t threshold) {
    const double pairs = static_cast<double>(nf) * static_cast<double>(ng);
    if (pairs < static_cast<double>(threshold)) return Choice::NaiveSerial;
    const std::uint64_t n = std::bit_ceil(std::max<std::uint64_t>(length, 2));
    if (primes > 0 && n <= kMaxNttLength) {
        const double cost = 3.0 * static_cast<double>(n) * std::log2(static_cast<double>(n)) * primes;
        if (cost < 8.0 * pairs) return Choice::Ntt;
    }
    return Choice::NaiveParallel;
}

}  // namespace acw::kernels
