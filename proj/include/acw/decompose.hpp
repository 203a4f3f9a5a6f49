#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acw/ambient.hpp"
#include "acw/control.hpp"
#include "acw/convex_function.hpp"
#include "acw/function.hpp"
#include "acw/numeric.hpp"

namespace acw {

/// Default cutoff below which dyadic levels are discarded, relative to ||f||_inf.
Rational default_level_floor();  // 2^-40

/// {x : f(x) in (low, high]} with high = ||f||_inf 2^-index and low = high / 2.
struct LevelSet {
    int index = 0;
    Rational threshold_low;
    Rational threshold_high;
    FiniteSet set;
};

/// Nonempty dyadic levels of a nonnegative f, down to the first level whose
/// upper threshold is at most floor * ||f||_inf. For a power-of-two floor
/// they partition {x : f(x) > floor ||f||_inf} exactly.
std::vector<LevelSet> level_sets(const DensityFunction& f, const Rational& floor = default_level_floor());
std::vector<LevelSet> level_sets(const CountFunction& f, const Rational& floor = default_level_floor());

struct DominantLevel {
    LevelSet level;
    Rational delta;  // threshold_low / scale
    Quantity score;  // threshold_low^w |set|
};

/// Level maximising threshold_low^w |set|; ties go to the larger threshold.
DominantLevel dominant_level(const DensityFunction& f, const Rational& weight_exponent,
                             const Rational& floor = default_level_floor(), const Rational& scale = Rational(1));
DominantLevel dominant_level(const CountFunction& f, const Rational& weight_exponent,
                             const Rational& floor = default_level_floor(), const Rational& scale = Rational(1));

/// {x : 1_A∘1_A(x) >= delta |A|}, 0 < delta <= 1.
FiniteSet symmetry_set(const FiniteSet& a, const Rational& delta);
/// Same set from a precomputed autocorrelation of a set of the given size.
FiniteSet symmetry_set(const CountFunction& autocorrelation, std::int64_t size, const Rational& delta);

/// Ordered pairs (a, b) of X.
using PairList = std::vector<std::pair<Element, Element>>;

struct BsgExtraction {
    FiniteSet X;
    PairList bad_pairs;
    Element x;          // the chosen point of C
    Rational threshold; // eps eta^2 |A|^2 |C| / |B|^2
};

/// One averaging step: X = x - (B ∩ (x - A)) for the best x in C, with the
/// pairs of X whose difference has at most `threshold` representations in A-A.
BsgExtraction bsg_extract(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const Rational& eta,
                          const Rational& eps);

/// Elements of X adjacent (in the good graph) to at least 3|X|/4 elements.
FiniteSet bsg_refine(const FiniteSet& x, const PairList& bad_pairs);

enum class BsgBranch { Direct, Transposed };
std::string to_string(BsgBranch branch);

struct BsgCertificate {
    FiniteSet A;
    FiniteSet B;
    FiniteSet A_prime;
    Rational eta;
    FiniteSet C;               // set used in the extraction that produced A_prime
    FiniteSet B_used;          // second set of that extraction
    FiniteSet X;
    Rational threshold;
    std::int64_t bad_pair_count = 0;
    Rational measured_doubling;  // |A'-A'| / |A'|
    BsgBranch branch = BsgBranch::Direct;
    bool trivial = false;
};

BsgCertificate bsg_pipeline(const FiniteSet& a, const std::optional<FiniteSet>& b = std::nullopt);

/// Recounts every claim of the certificate from the sets alone. Returns a list
/// of failures (empty when the certificate is valid).
std::vector<std::string> verify(const BsgCertificate& cert);

enum class ControlOracle { ExhaustiveWindow, Candidates };
std::string to_string(ControlOracle oracle);

struct ConvexDecomposeOptions {
    ControlOracle oracle = ControlOracle::Candidates;
    ExhaustiveOptions exhaustive;
};

struct DecompositionCertificate {
    FiniteSet A;
    FiniteSet X;
    FiniteSet Y;
    FiniteSet fX;  // image of X (in Z, or in Z^d for the logarithm)
    ControlEstimate kappa_fX;
    ControlEstimate kappa_Y;
    Rational product_times_size;
    std::vector<std::int64_t> step_sizes;  // |T'| per iteration
    std::string function;
};

/// f(X) as a finite set: integer values for polynomials and tables, the
/// prime-exponent lattice for -log.
FiniteSet function_image(const ConvexFunctionSpec& f, const FiniteSet& x);

DecompositionCertificate convex_decompose(const FiniteSet& a, const ConvexFunctionSpec& f,
                                          const ConvexDecomposeOptions& opts = {});

struct EnergyChain {
    std::vector<FiniteSet> A;  // A_0 .. A_k
    FiniteSet S;
    FiniteSet S_prime;
    Rational delta;
    int selected_i = 0;
    /// ||1_{A_{i-1}}∘1_S||_{3/2} / ||1_{A_i}∘1_S||_{3/2} for i = 1..k (as far as built).
    std::vector<Quantity> ratios;
    bool truncated = false;
};

EnergyChain energy_chain(const FiniteSet& a, int k);

/// Rechecks every membership threshold of the chain exactly.
std::vector<std::string> verify(const EnergyChain& chain, const FiniteSet& a);

}  // namespace acw
