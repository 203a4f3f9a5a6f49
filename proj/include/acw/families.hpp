#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acw/ambient.hpp"

namespace acw {

/// SplitMix64 (Steele, Lea, Flood 2014). Fixed so that corpora reproduce
/// across implementations from the seed alone.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    /// Uniform on [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v;
        do v = next(); while (v >= limit);
        return v % bound;
    }
    /// Independent stream derived from this one.
    SplitMix64 split() noexcept { return SplitMix64(next()); }

private:
    std::uint64_t state_;
};

enum class Family { Interval, Ap, Geometric, Squares, ConvexFromGaps, RandomSubset, MazurSphere, PerturbedConvex };

std::string to_string(Family family);
/// Throws UnknownSpec.
Family parse_family(const std::string& name);

struct FamilySpec {
    Family family = Family::Interval;
    std::int64_t n = 0;       // length; for squares the largest root
    std::int64_t start = 0;   // interval, ap, geometric, convex_from_gaps
    std::int64_t step = 1;    // ap
    std::int64_t ratio = 2;   // geometric
    std::vector<std::int64_t> gaps;
    std::int64_t universe = 0;  // random_subset draws from [0, universe) or Z/universe
    bool cyclic = false;
    std::uint64_t seed = 0;
    int dimension = 2;        // mazur_sphere
    std::int64_t radius_sq = 0;

    static FamilySpec interval(std::int64_t n, std::int64_t start = 0);
    static FamilySpec ap(std::int64_t start, std::int64_t step, std::int64_t n);
    static FamilySpec geometric(std::int64_t start, std::int64_t ratio, std::int64_t n);
    static FamilySpec squares(std::int64_t n);
    static FamilySpec convex_from_gaps(std::vector<std::int64_t> gaps, std::int64_t start = 0);
    static FamilySpec random_subset(std::int64_t universe, std::int64_t m, std::uint64_t seed, bool cyclic = false);
    static FamilySpec mazur_sphere(int dimension, std::int64_t radius_sq);
    /// 4i^2 + e_i with e_i in {0,1,2} drawn from the seed, i = 1..n.
    static FamilySpec perturbed_convex(std::int64_t n, std::uint64_t seed);

    std::string describe() const;
};

/// Deterministic; validates parameters (InvalidArgument, Overflow).
FiniteSet generate(const FamilySpec& spec);

/// m distinct elements drawn uniformly from a finite universe (Z/n, or the
/// window [-W, W] of Z) by Floyd's algorithm.
FiniteSet random_subset(const Ambient& universe, std::int64_t m, std::uint64_t seed);

/// Strictly increasing consecutive gaps (one-dimensional sets).
bool is_convex(const FiniteSet& a);

struct MultEmbedding {
    std::vector<std::int64_t> primes;
    FiniteSet image;  // in Z^d, d = max(1, primes.size())
};

/// Prime-exponent vectors of a set of positive integers.
MultEmbedding mult_embed(const FiniteSet& a);

struct ExpanderStats {
    std::int64_t shifted_product = 0;      // |A(A+A)|
    std::int64_t difference_product = 0;   // |A(A-A) \ {0}|
    std::int64_t min_translate_product = 0;  // min_a |A(A+a)|
    std::int64_t product_set = 0;          // |AA|
    std::int64_t ratio_set = 0;            // |A/A|
};

ExpanderStats expander_stats(const FiniteSet& a);

}  // namespace acw
