#pragma once

// Linear convolution kernels on sparse index sequences. The ambient layer maps
// group elements to nonnegative indices (Kronecker substitution) and calls
// one of these. All kernels are exact and must agree bit for bit.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "acw/numeric.hpp"

namespace acw::kernels {

template <class V>
struct Seq {
    std::vector<std::uint64_t> idx;  // strictly increasing
    std::vector<V> val;              // nonzero
    std::size_t size() const noexcept { return idx.size(); }
};

using IntSeq = Seq<std::int64_t>;
using BigSeq = Seq<BigInt>;

/// Plain double loop. Reference implementation for everything else.
IntSeq naive_serial(const IntSeq& f, const IntSeq& g, std::uint64_t length);
BigSeq naive_serial(const BigSeq& f, const BigSeq& g, std::uint64_t length);

/// OpenMP double loop, partitioned over output blocks (no shared writes).
IntSeq naive_parallel(const IntSeq& f, const IntSeq& g, std::uint64_t length);
BigSeq naive_parallel(const BigSeq& f, const BigSeq& g, std::uint64_t length);

/// Multi-prime number-theoretic transform with CRT reconstruction.
/// Throws UnsupportedOperation if the length or coefficient bound is too large.
IntSeq ntt(const IntSeq& f, const IntSeq& g, std::uint64_t length);
BigSeq ntt(const BigSeq& f, const BigSeq& g, std::uint64_t length);

constexpr std::uint64_t kMaxNttLength = std::uint64_t{1} << 23;
constexpr int kMaxPrimes = 8;

/// Number of NTT primes whose product exceeds 2*bound+1, or 0 if more than kMaxPrimes are needed.
int primes_needed(const BigInt& bound);
/// min(|f|_1 |g|_inf, |f|_inf |g|_1): a bound on every output coefficient.
BigInt coefficient_bound(const IntSeq& f, const IntSeq& g);
BigInt coefficient_bound(const BigSeq& f, const BigSeq& g);

enum class Choice { NaiveSerial, NaiveParallel, Ntt };
/// Automatic selection: naive below `threshold` support pairs, otherwise the
/// transform when the cost model favours it.
Choice choose(std::size_t nf, std::size_t ng, std::uint64_t length, int primes, std::size_t threshold);

}  // namespace acw::kernels
