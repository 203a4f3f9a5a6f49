#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acw/numeric.hpp"

namespace acw {

/// A strictly convex function of one variable, evaluable exactly at rationals.
/// NegativeLogarithm is x -> -log x; it is never evaluated, callers realise
/// f(X) through the multiplicative embedding instead.
class ConvexFunctionSpec {
public:
    enum class Kind { Polynomial, Table, NegativeLogarithm };

    /// coefficients[i] multiplies x^i. Bounds are optional; positivity of the
    /// second derivative is checked on the stated domain.
    static ConvexFunctionSpec polynomial(std::vector<BigInt> coefficients, std::optional<Rational> lo = std::nullopt,
                                         std::optional<Rational> hi = std::nullopt);
    static ConvexFunctionSpec table(std::map<Rational, Rational> values);
    static ConvexFunctionSpec negative_logarithm();

    Kind kind() const noexcept { return kind_; }
    const std::vector<BigInt>& coefficients() const noexcept { return coefficients_; }
    const std::map<Rational, Rational>& values() const noexcept { return table_; }
    const std::optional<Rational>& domain_lo() const noexcept { return lo_; }
    const std::optional<Rational>& domain_hi() const noexcept { return hi_; }

    bool exact() const noexcept { return kind_ != Kind::NegativeLogarithm; }
    bool in_domain(const Rational& x) const;
    /// Throws OffTable outside a table, InvalidArgument outside a polynomial's
    /// domain, UnsupportedOperation for the logarithm.
    Rational operator()(const Rational& x) const;

    /// Strictly increasing slopes across consecutive sorted points; throws NonConvex.
    void check_convex_on(std::vector<Rational> points) const;

    std::string describe() const;

private:
    Kind kind_ = Kind::Polynomial;
    std::vector<BigInt> coefficients_;
    std::map<Rational, Rational> table_;
    std::optional<Rational> lo_, hi_;
};

/// Number of distinct real roots of p in (lo, hi]; p given low degree first.
/// Missing bounds mean -inf / +inf.
int count_real_roots(const std::vector<Rational>& p, const std::optional<Rational>& lo,
                     const std::optional<Rational>& hi);

}  // namespace acw
