#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acw/ambient.hpp"
#include "acw/convolution.hpp"
#include "acw/numeric.hpp"

namespace acw {

enum class ControlMode { ExactFiniteGroup, ExhaustiveWindowLowerBound, CandidateLowerBound };
std::string to_string(ControlMode mode);

struct ControlEstimate {
    Rational value;
    ControlMode mode = ControlMode::CandidateLowerBound;
    FiniteSet witness;
    std::string universe;
};

struct WeakControlReport {
    BigInt cube_autocorrelation;   // sum_x (1_A∘1_A(x))^3
    Rational implied_kappa_lower;  // cube_autocorrelation / |A|^4
};

/// sum_x (1_A*1_B(x))^3
BigInt cube_sum(const FiniteSet& a, const FiniteSet& b, const ConvolutionOptions& opts = {});
/// sum_x (1_A*1_B(x))^3 / (|A|^2 |B|^2)
Rational control_ratio(const FiniteSet& a, const FiniteSet& b, const ConvolutionOptions& opts = {});

struct ExhaustiveOptions {
    std::int64_t max_modulus = 22;
    std::uint64_t max_subsets = std::uint64_t{1} << 24;
    /// Search window [lo, hi] for integer ambients; defaults to the hull of A
    /// dilated by 2 about its centre. Only its width matters (translation invariance).
    std::optional<std::pair<std::int64_t, std::int64_t>> window;
};

/// Maximises control_ratio over every nonempty B in the universe, up to
/// translation. Exact in Z/n; a labelled lower bound in Z.
ControlEstimate control_exhaustive(const FiniteSet& a, const ExhaustiveOptions& opts = {});
/// Same search, recomputing every ratio from scratch through convolution. Test reference.
ControlEstimate control_exhaustive_reference(const FiniteSet& a, const ExhaustiveOptions& opts = {});

/// A, -A, A-A, length-|A| progressions (step 1 and the median gap), and the
/// distinct symmetry sets S_{2^-j}.
std::vector<FiniteSet> default_candidates(const FiniteSet& a);
ControlEstimate control_candidates(const FiniteSet& a, const std::vector<FiniteSet>& candidates,
                                   const ConvolutionOptions& opts = {});
ControlEstimate control_candidates(const FiniteSet& a, const ConvolutionOptions& opts = {});

WeakControlReport weak_control(const FiniteSet& a, const ConvolutionOptions& opts = {});

/// kappa^{1/6} |A|^{5/6} |S|^{5/6}, the bound for ||1_A∘1_S||_{3/2}.
Quantity holder_upper_bound(const FiniteSet& a, const FiniteSet& s, const Rational& kappa);

}  // namespace acw
