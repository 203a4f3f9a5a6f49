#pragma once

#include <cstddef>
#include <cstdint>

#include "acw/ambient.hpp"
#include "acw/function.hpp"
#include "acw/numeric.hpp"

namespace acw {

struct ConvolutionOptions {
    enum class Method {
        Auto,         // size/cost based selection
        Reference,    // serial double loop
        Naive,        // parallel double loop
        Accelerated,  // number-theoretic transform
    };
    Method method = Method::Auto;
    /// Integer windows grow to hold the result; when false, a result outside
    /// the larger input window raises WindowOverflow.
    bool widen_window = true;
    /// Support-pair count below which the serial double loop is always used.
    std::size_t threshold = 4096;
};

/// f*g(x) = sum_y f(x-y) g(y)
DensityFunction convolve(const DensityFunction& f, const DensityFunction& g, const ConvolutionOptions& opts = {});
CountFunction convolve(const CountFunction& f, const CountFunction& g, const ConvolutionOptions& opts = {});
/// 1_A * 1_B
CountFunction convolve(const FiniteSet& a, const FiniteSet& b, const ConvolutionOptions& opts = {});

/// f∘g(x) = sum_y f(x+y) g(y)
DensityFunction diff_convolve(const DensityFunction& f, const DensityFunction& g, const ConvolutionOptions& opts = {});
CountFunction diff_convolve(const CountFunction& f, const CountFunction& g, const ConvolutionOptions& opts = {});
/// 1_A ∘ 1_B(x) = #{(a,b) in A x B : a - b = x}
CountFunction diff_convolve(const FiniteSet& a, const FiniteSet& b, const ConvolutionOptions& opts = {});

/// x -> f(-x)
DensityFunction reflect(const DensityFunction& f);
CountFunction reflect(const CountFunction& f);

Quantity lp_norm(const DensityFunction& f, const NormOrder& p);
Quantity lp_norm(const CountFunction& f, const NormOrder& p);
/// sum_x |f(x)|^p for integer p.
BigInt power_sum(const CountFunction& f, unsigned p);

enum class SetOp { Sum, Difference, Product, Ratio };
/// A+B, A-B in additive ambients; AB, A/B in the multiplicative ambient.
FiniteSet set_algebra(const FiniteSet& a, const FiniteSet& b, SetOp op);

struct SetStats {
    std::int64_t size = 0;
    std::int64_t sumset_size = 0;
    std::int64_t diffset_size = 0;
    BigInt energy;
    /// max over x != 0 of 1_A∘1_A(x); 0 for a singleton.
    std::int64_t max_autocorrelation = 0;
};

SetStats stats(const FiniteSet& a, const ConvolutionOptions& opts = {});
/// E(A) = sum_x (1_A∘1_A(x))^2.
BigInt energy(const FiniteSet& a, const ConvolutionOptions& opts = {});

}  // namespace acw
