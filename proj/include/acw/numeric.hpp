#pragma once

// Exact numerics: big integers, big rationals, sums of radicals and
// products of rational powers that can be compared without floating point.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace acw {

using BigInt = mpz_class;
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(std::string_view text);
/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);
/// Scientific rendering rounded (half away from zero) to `digits` significant digits.
std::string to_decimal(const Rational& value, int digits = 12);
/// printf("%.12g") rendering used for floating report columns.
std::string to_decimal(double value, int digits = 12);

Rational pow(const Rational& base, long exponent);
BigInt pow(const BigInt& base, unsigned long exponent);
Rational abs(const Rational& value);
BigInt lcm(const BigInt& a, const BigInt& b);
/// Smallest integer m with m^root >= value (value >= 0).
BigInt ceil_root(const BigInt& value, unsigned long root);
double to_double(const Rational& value);
double log_of(const Rational& value);

/// Prime factorisation by trial division plus primality testing of the cofactor.
/// Throws Error(Undecidable) when a large composite cofactor cannot be split.
std::vector<std::pair<BigInt, unsigned long>> factor(const BigInt& n);

/// A finite sum  sum_i c_i * m_i^(1/degree)  with positive rational c_i and
/// degree-th-power-free integer radicands m_i. Nonnegative by construction.
class RootSum {
public:
    explicit RootSum(unsigned long degree = 1);

    unsigned long degree() const noexcept { return degree_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t term_count() const noexcept { return terms_.size(); }
    const std::map<BigInt, Rational>& terms() const noexcept { return terms_; }

    /// Adds |value|^(numerator/degree).
    void add_power(const Rational& value, unsigned long numerator);
    /// Adds coefficient * radicand^(1/degree); radicand must be positive.
    void add_term(const Rational& coefficient, const BigInt& radicand);

    std::optional<Rational> as_rational() const;
    /// Lower and upper rational bounds with error at most (sum c_i) * 2^-bits.
    std::pair<Rational, Rational> bounds(unsigned long bits) const;
    double log_value() const;
    std::string to_string() const;

    bool operator==(const RootSum& other) const;
    bool operator<(const RootSum& other) const;

private:
    unsigned long degree_;
    std::map<BigInt, Rational> terms_;
};

/// A nonnegative real given as an exact product of rational powers of
/// positive rationals and of RootSums. Comparisons are decided exactly: by
/// cross-powering when every factor is a radical, otherwise by rigorous
/// rational interval refinement.
class Quantity {
public:
    using Base = std::variant<Rational, RootSum>;
    struct Factor {
        Base base;
        Rational exponent;
    };

    Quantity();  // one
    static Quantity zero();
    static Quantity of(const Rational& value);
    static Quantity of(const BigInt& value);
    static Quantity power(const Rational& base, const Rational& exponent);
    static Quantity power(const RootSum& base, const Rational& exponent);

    bool is_zero() const noexcept { return zero_; }
    const std::vector<Factor>& factors() const noexcept { return factors_; }

    Quantity operator*(const Quantity& other) const;
    Quantity operator/(const Quantity& other) const;
    Quantity pow(const Rational& exponent) const;
    std::optional<Rational> as_rational() const;

    double log_value() const;  // -inf for zero
    double to_double() const;
    std::string to_string() const;

    friend std::strong_ordering compare(const Quantity& lhs, const Quantity& rhs);
    friend bool operator<=(const Quantity& lhs, const Quantity& rhs) { return compare(lhs, rhs) <= 0; }
    friend bool operator<(const Quantity& lhs, const Quantity& rhs) { return compare(lhs, rhs) < 0; }
    friend bool operator==(const Quantity& lhs, const Quantity& rhs) { return compare(lhs, rhs) == 0; }

private:
    void normalize();

    bool zero_ = false;
    std::vector<Factor> factors_;
};

/// Orientation of a lossless rational p in [1, inf]; infinite() selects the sup norm.
class NormOrder {
public:
    NormOrder(long p) : p_(p), infinite_(false) {}  // NOLINT(google-explicit-constructor)
    NormOrder(const Rational& p) : p_(p), infinite_(false) {}  // NOLINT(google-explicit-constructor)
    static NormOrder infinity() {
        NormOrder order(1);
        order.infinite_ = true;
        return order;
    }
    bool infinite() const noexcept { return infinite_; }
    const Rational& p() const noexcept { return p_; }

private:
    Rational p_;
    bool infinite_;
};

/// ||f||_p as an exact Quantity from the list of |f(x)| values.
Quantity lp_norm_of_values(const std::vector<Rational>& magnitudes, const NormOrder& order);

}  // namespace acw
