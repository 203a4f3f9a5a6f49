#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "acw/ambient.hpp"
#include "acw/convex_function.hpp"
#include "acw/numeric.hpp"

namespace acw {

using Point = std::pair<Rational, Rational>;

/// Deduplicated, sorted points of Q^2.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::vector<Point> points);
    /// (X+Y) x C for integer sets.
    static PointSet product(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

    const std::vector<Point>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

private:
    std::vector<Point> points_;
};

/// Translates of the graph of a convex f. A shift (s, b) gives the curve
///   Translate: v = f(u - s) + b   (the graph (x, f(x)) moved by (s, b))
///   Sheared:   v = f(u + s) + b   (u -> (u, f(u + z) + b) with z = s)
struct CurveFamily {
    enum class Kind { Translate, Sheared };
    ConvexFunctionSpec base;
    std::vector<std::pair<Rational, Rational>> shifts;
    Kind kind = Kind::Translate;

    std::size_t size() const noexcept { return shifts.size(); }
    /// Abscissa at which curve i evaluates base for the point abscissa u.
    Rational argument(std::size_t i, const Rational& u) const;
};

/// Whether point lies on curve i. Off a polynomial's domain or outside a
/// table's range a point is not incident; a table abscissa inside the range
/// but missing from the table raises OffTable.
bool incident(const CurveFamily& curves, std::size_t i, const Point& p);

/// Exact number of (point, curve) incidences, grouping points by abscissa.
std::int64_t count_incidences(const PointSet& points, const CurveFamily& curves);
/// The plain double loop over points and curves, kept as the test reference.
std::int64_t count_incidences_reference(const PointSet& points, const CurveFamily& curves);

/// I / (ceil((|P||L|)^{2/3}) + |P| + |L|).
Rational st_ratio(const PointSet& points, const CurveFamily& curves);
std::int64_t st_denominator(std::int64_t points, std::int64_t curves);

/// Largest number of common points of two distinct curves: real roots of the
/// difference on [lo, hi] for polynomials, agreements at the probes for tables.
int max_pairwise_intersections(const CurveFamily& curves, const std::vector<Rational>& probes);

struct ConvContWitness {
    std::int64_t incidences = 0;
    std::int64_t solutions = 0;    // <1_A*1_B, 1_C>
    std::int64_t lower_bound = 0;  // |Y| * solutions
    std::int64_t points = 0;
    std::int64_t curves = 0;
    bool holds = false;            // incidences >= lower_bound
};

/// With A = f(X): P = (X+Y) x C and curves (x, f(x)) + (y, b) for y in Y, b in B.
/// Requires C ⊆ A+B (PreconditionViolation otherwise).
ConvContWitness convcont_witness(const FiniteSet& x, const ConvexFunctionSpec& f, const FiniteSet& y,
                                 const FiniteSet& b, const FiniteSet& c);

}  // namespace acw
