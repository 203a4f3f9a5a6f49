#include "acw/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "acw/error.hpp"

namespace acw {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::AmbientMismatch: return "ambient mismatch";
        case ErrorKind::WindowOverflow: return "window overflow";
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::EmptySet: return "empty set";
        case ErrorKind::UnsupportedOperation: return "unsupported operation";
        case ErrorKind::UniverseTooLarge: return "universe too large";
        case ErrorKind::HypothesisViolation: return "hypothesis violation";
        case ErrorKind::PreconditionViolation: return "precondition violation";
        case ErrorKind::Overflow: return "overflow";
        case ErrorKind::Undecidable: return "undecidable";
        case ErrorKind::NonConvex: return "non-convex function";
        case ErrorKind::OffTable: return "off-table evaluation";
        case ErrorKind::UnknownSpec: return "unknown spec";
        case ErrorKind::MissingInput: return "missing input";
        case ErrorKind::ExactFailure: return "exact-mode failure";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Io: return "i/o error";
        case ErrorKind::Internal: return "internal error";
    }
    return "error";
}

Rational make_rational(long num, long den) {
    if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw Error(ErrorKind::Parse, "empty rational");
    Rational r;
    if (r.set_str(s, 10) != 0) throw Error(ErrorKind::Parse, "bad rational '" + s + "'");
    if (r.get_den() == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

std::string to_decimal(const Rational& value, int digits) {
    if (digits < 1) digits = 1;
    if (value == 0) return "0";
    Rational q = abs(value);
    // Estimate e = floor(log10 q) from digit counts, then correct exactly.
    long e = static_cast<long>(q.get_num().get_str().size()) -
             static_cast<long>(q.get_den().get_str().size());
    auto ten_pow = [](long k) {
        BigInt t;
        mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(k));
        return t;
    };
    auto scaled = [&](long exponent) {  // q * 10^-exponent
        Rational r = q;
        if (exponent >= 0) r /= Rational(ten_pow(exponent));
        else r *= Rational(ten_pow(-exponent));
        return r;
    };
    while (scaled(e) >= 10) ++e;
    while (scaled(e) < 1) --e;
    Rational m = scaled(e - (digits - 1)) + Rational(1, 2);
    BigInt mant = m.get_num() / m.get_den();
    if (mant >= ten_pow(digits)) {
        mant /= 10;
        ++e;
    }
    std::string d = mant.get_str();
    std::string out = value < 0 ? "-" : "";
    out += d.substr(0, 1);
    if (d.size() > 1) out += "." + d.substr(1);
    char buf[16];
    std::snprintf(buf, sizeof buf, "e%+03ld", e);
    out += buf;
    return out;
}

std::string to_decimal(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

Rational pow(const Rational& base, long exponent) {
    if (exponent == 0) return Rational(1);
    if (exponent < 0) {
        if (base == 0) throw Error(ErrorKind::InvalidArgument, "zero to a negative power");
        Rational inv = 1 / base;
        return pow(inv, -exponent);
    }
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

BigInt pow(const BigInt& base, unsigned long exponent) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

namespace {

BigInt floor_root(const BigInt& value, unsigned long root) {
    BigInt r;
    mpz_root(r.get_mpz_t(), value.get_mpz_t(), root);
    return r;
}

bool exact_root(const BigInt& value, unsigned long root, BigInt& out) {
    return mpz_root(out.get_mpz_t(), value.get_mpz_t(), root) != 0;
}

double log_of_int(const BigInt& v) {
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

BigInt ceil_root(const BigInt& value, unsigned long root) {
    BigInt r;
    if (exact_root(value, root, r)) return r;
    return r + 1;
}

double to_double(const Rational& value) {
    if (value == 0) return 0.0;
    double l = log_of(value);
    double mag = std::exp(l);
    return value < 0 ? -mag : mag;
}

double log_of(const Rational& value) {
    Rational q = abs(value);
    if (q == 0) return -std::numeric_limits<double>::infinity();
    return log_of_int(q.get_num()) - log_of_int(q.get_den());
}

std::vector<std::pair<BigInt, unsigned long>> factor(const BigInt& n_in) {
    if (n_in <= 0) throw Error(ErrorKind::InvalidArgument, "factor of a nonpositive integer");
    std::vector<std::pair<BigInt, unsigned long>> out;
    BigInt n = n_in;
    auto strip = [&](unsigned long p) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            unsigned long e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++e;
            }
            out.emplace_back(BigInt(p), e);
        }
    };
    constexpr unsigned long kTrialLimit = 1'000'000;
    strip(2);
    for (unsigned long p = 3; p <= kTrialLimit; p += 2) {
        if (n == 1) break;
        if (BigInt(p) * p > n) break;
        strip(p);
    }
    if (n == 1) return out;
    if (n < BigInt(kTrialLimit) * kTrialLimit || mpz_probab_prime_p(n.get_mpz_t(), 40) != 0) {
        out.emplace_back(n, 1);
        std::sort(out.begin(), out.end());
        return out;
    }
    for (unsigned long k = 2; k < 64; ++k) {
        BigInt r;
        if (exact_root(n, k, r)) {
            for (auto& [p, e] : factor(r)) out.emplace_back(p, e * k);
            std::sort(out.begin(), out.end());
            return out;
        }
    }
    throw Error(ErrorKind::Undecidable, "cannot factor cofactor " + n.get_str());
}

// ---------------------------------------------------------------- RootSum

RootSum::RootSum(unsigned long degree) : degree_(degree) {
    if (degree == 0) throw Error(ErrorKind::InvalidArgument, "root degree must be positive");
}

namespace {

// Splits prod p^(e*scale) into k^degree * m with m degree-th-power free; returns (k, m)
// as a rational coefficient (negative exponents land in the coefficient).
void accumulate_power(const std::vector<std::pair<BigInt, unsigned long>>& fac, long scale,
                      unsigned long degree, Rational& coeff, BigInt& radicand) {
    const long d = static_cast<long>(degree);
    for (const auto& [p, e] : fac) {
        long total = static_cast<long>(e) * scale;
        long q = total >= 0 ? total / d : -((-total + d - 1) / d);
        long r = total - q * d;
        if (q > 0) coeff *= Rational(pow(p, static_cast<unsigned long>(q)));
        else if (q < 0) coeff /= Rational(pow(p, static_cast<unsigned long>(-q)));
        if (r > 0) radicand *= pow(p, static_cast<unsigned long>(r));
    }
}

}  // namespace

void RootSum::add_power(const Rational& value, unsigned long numerator) {
    Rational v = abs(value);
    if (v == 0 || numerator == 0) {
        if (numerator == 0 && v != 0) add_term(Rational(1), BigInt(1));
        return;
    }
    Rational coeff(1);
    BigInt radicand(1);
    accumulate_power(factor(v.get_num()), static_cast<long>(numerator), degree_, coeff, radicand);
    accumulate_power(factor(v.get_den()), -static_cast<long>(numerator), degree_, coeff, radicand);
    terms_[radicand] += coeff;
}

void RootSum::add_term(const Rational& coefficient, const BigInt& radicand) {
    if (coefficient < 0 || radicand <= 0) throw Error(ErrorKind::InvalidArgument, "RootSum terms must be positive");
    if (coefficient == 0) return;
    Rational coeff = coefficient;
    BigInt m(1);
    accumulate_power(factor(radicand), 1, degree_, coeff, m);
    terms_[m] += coeff;
}

std::optional<Rational> RootSum::as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_.begin()->first == 1) return terms_.begin()->second;
    return std::nullopt;
}

std::pair<Rational, Rational> RootSum::bounds(unsigned long bits) const {
    Rational lo(0), hi(0);
    BigInt scale = pow(BigInt(2), bits);
    BigInt scale_pow = pow(BigInt(2), bits * degree_);
    for (const auto& [m, c] : terms_) {
        if (m == 1) {
            lo += c;
            hi += c;
            continue;
        }
        BigInt r = floor_root(m * scale_pow, degree_);
        lo += c * Rational(r, scale);
        hi += c * Rational(r + 1, scale);
    }
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

double RootSum::log_value() const {
    if (terms_.empty()) return -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    logs.reserve(terms_.size());
    for (const auto& [m, c] : terms_) logs.push_back(log_of(c) + log_of_int(m) / static_cast<double>(degree_));
    double top = *std::max_element(logs.begin(), logs.end());
    double acc = 0;
    for (double l : logs) acc += std::exp(l - top);
    return top + std::log(acc);
}

std::string RootSum::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += acw::to_string(c);
        if (m != 1) out += "*" + m.get_str() + "^(1/" + std::to_string(degree_) + ")";
    }
    return out;
}

bool RootSum::operator==(const RootSum& other) const {
    return degree_ == other.degree_ && terms_ == other.terms_;
}

bool RootSum::operator<(const RootSum& other) const {
    if (degree_ != other.degree_) return degree_ < other.degree_;
    return std::lexicographical_compare(
        terms_.begin(), terms_.end(), other.terms_.begin(), other.terms_.end(),
        [](const auto& a, const auto& b) { return a.first != b.first ? a.first < b.first : a.second < b.second; });
}

// --------------------------------------------------------------- Quantity

Quantity::Quantity() = default;

Quantity Quantity::zero() {
    Quantity q;
    q.zero_ = true;
    return q;
}

Quantity Quantity::of(const Rational& value) {
    if (value < 0) throw Error(ErrorKind::InvalidArgument, "Quantity must be nonnegative");
    if (value == 0) return zero();
    return power(value, Rational(1));
}

Quantity Quantity::of(const BigInt& value) { return of(Rational(value)); }

Quantity Quantity::power(const Rational& base, const Rational& exponent) {
    if (base < 0) throw Error(ErrorKind::InvalidArgument, "negative base");
    if (base == 0) {
        if (exponent > 0) return zero();
        if (exponent == 0) return Quantity();
        throw Error(ErrorKind::InvalidArgument, "zero to a negative power");
    }
    Quantity q;
    q.factors_.push_back({base, exponent});
    q.normalize();
    return q;
}

Quantity Quantity::power(const RootSum& base, const Rational& exponent) {
    if (base.empty()) {
        if (exponent > 0) return zero();
        if (exponent == 0) return Quantity();
        throw Error(ErrorKind::InvalidArgument, "zero to a negative power");
    }
    Quantity q;
    q.factors_.push_back({base, exponent});
    q.normalize();
    return q;
}

Quantity Quantity::operator*(const Quantity& other) const {
    if (zero_ || other.zero_) return zero();
    Quantity q = *this;
    q.factors_.insert(q.factors_.end(), other.factors_.begin(), other.factors_.end());
    q.normalize();
    return q;
}

Quantity Quantity::operator/(const Quantity& other) const {
    if (other.zero_) throw Error(ErrorKind::InvalidArgument, "division by zero quantity");
    return *this * other.pow(Rational(-1));
}

Quantity Quantity::pow(const Rational& exponent) const {
    if (zero_) {
        if (exponent > 0) return zero();
        if (exponent == 0) return Quantity();
        throw Error(ErrorKind::InvalidArgument, "zero to a negative power");
    }
    Quantity q = *this;
    for (auto& f : q.factors_) f.exponent *= exponent;
    q.normalize();
    return q;
}

void Quantity::normalize() {
    if (zero_) {
        factors_.clear();
        return;
    }
    std::vector<std::pair<Rational, Rational>> rationals;
    std::vector<std::pair<RootSum, Rational>> sums;
    for (auto& f : factors_) {
        if (f.exponent == 0) continue;
        if (auto* r = std::get_if<Rational>(&f.base)) {
            rationals.emplace_back(*r, f.exponent);
            continue;
        }
        const RootSum& rs = std::get<RootSum>(f.base);
        if (rs.term_count() == 1) {
            const auto& [m, c] = *rs.terms().begin();
            rationals.emplace_back(c, f.exponent);
            rationals.emplace_back(Rational(m), f.exponent / Rational(static_cast<long>(rs.degree())));
        } else {
            sums.emplace_back(rs, f.exponent);
        }
    }
    // Pull exact roots out of rational bases, then merge equal bases.
    Rational coefficient(1);
    std::map<Rational, Rational> merged;
    for (auto& [base, e] : rationals) {
        Rational exp = e;
        exp.canonicalize();
        Rational b = base;
        unsigned long w = exp.get_den().get_ui();
        if (w != 1) {
            BigInt rn, rd;
            if (exact_root(b.get_num(), w, rn) && exact_root(b.get_den(), w, rd)) {
                b = Rational(rn, rd);
                exp *= Rational(static_cast<long>(w));
            }
        }
        if (b == 1) continue;
        if (exp.get_den() == 1) {
            coefficient *= acw::pow(b, exp.get_num().get_si());
        } else {
            merged[b] += exp;
        }
    }
    // Merged exponents can become integral (10^{2/3} 10^{1/3}) or expose a root.
    std::map<Rational, Rational> residual;
    for (const auto& [mb, me] : merged) {
        Rational b = mb, e = me;
        e.canonicalize();
        unsigned long w = e.get_den().get_ui();
        BigInt rn, rd;
        if (w != 1 && exact_root(b.get_num(), w, rn) && exact_root(b.get_den(), w, rd)) {
            b = Rational(rn, rd);
            e *= Rational(static_cast<long>(w));
            e.canonicalize();
        }
        if (e == 0 || b == 1) continue;
        if (e.get_den() == 1) coefficient *= acw::pow(b, e.get_num().get_si());
        else residual[b] += e;
    }
    std::sort(sums.begin(), sums.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    factors_.clear();
    if (coefficient != 1) factors_.push_back({coefficient, Rational(1)});
    for (auto& [b, e] : residual) factors_.push_back({b, e});
    for (std::size_t i = 0; i < sums.size();) {
        Rational e = sums[i].second;
        std::size_t j = i + 1;
        while (j < sums.size() && sums[j].first == sums[i].first) e += sums[j++].second;
        if (e != 0) factors_.push_back({sums[i].first, e});
        i = j;
    }
}

std::optional<Rational> Quantity::as_rational() const {
    if (zero_) return Rational(0);
    if (factors_.empty()) return Rational(1);
    if (factors_.size() == 1) {
        const auto& f = factors_.front();
        if (const auto* r = std::get_if<Rational>(&f.base); r && f.exponent.get_den() == 1)
            return acw::pow(*r, f.exponent.get_num().get_si());
    }
    return std::nullopt;
}

double Quantity::log_value() const {
    if (zero_) return -std::numeric_limits<double>::infinity();
    double acc = 0;
    for (const auto& f : factors_) {
        double lb = std::holds_alternative<Rational>(f.base) ? log_of(std::get<Rational>(f.base))
                                                             : std::get<RootSum>(f.base).log_value();
        acc += lb * acw::to_double(f.exponent);
    }
    return acc;
}

double Quantity::to_double() const { return zero_ ? 0.0 : std::exp(log_value()); }

std::string Quantity::to_string() const {
    if (zero_) return "0";
    if (auto r = as_rational()) return acw::to_string(*r);
    std::string out;
    for (const auto& f : factors_) {
        if (!out.empty()) out += " * ";
        std::string base = std::holds_alternative<Rational>(f.base)
                               ? acw::to_string(std::get<Rational>(f.base))
                               : "[" + std::get<RootSum>(f.base).to_string() + "]";
        if (f.exponent == 1) out += base;
        else out += "(" + base + ")^(" + acw::to_string(f.exponent) + ")";
    }
    return out;
}

namespace {

struct Interval {
    Rational lo;
    std::optional<Rational> hi;  // nullopt = unbounded
};

// Bounds of x^(u/w) for x in [lo, hi] (0 <= lo <= hi), at the given precision.
Interval power_bounds(const Rational& lo, const Rational& hi, const Rational& exponent, unsigned long bits) {
    const long u = exponent.get_num().get_si();
    const unsigned long w = exponent.get_den().get_ui();
    auto root_bounds = [&](const Rational& x, bool want_upper) -> Rational {
        // (x^|u|)^(1/w) bounded below/above.
        Rational y = acw::pow(x, u >= 0 ? u : -u);
        if (w == 1) return y;
        const BigInt& s = y.get_num();
        const BigInt& t = y.get_den();
        BigInt scale = pow(BigInt(2), bits);
        BigInt arg = s * pow(t, w - 1) * pow(scale, w);
        BigInt r;
        bool exact = exact_root(arg, w, r);
        if (want_upper && !exact) r += 1;
        Rational out(r, t * scale);
        out.canonicalize();
        return out;
    };
    Interval iv;
    if (u >= 0) {
        iv.lo = root_bounds(lo, false);
        iv.hi = root_bounds(hi, true);
    } else {
        Rational lower_of_root = root_bounds(lo, false);
        Rational upper_of_root = root_bounds(hi, true);
        iv.lo = 1 / upper_of_root;
        if (lower_of_root == 0) iv.hi.reset();
        else iv.hi = 1 / lower_of_root;
    }
    return iv;
}

std::optional<std::strong_ordering> decide_by_intervals(const std::vector<Quantity::Factor>& factors,
                                                        unsigned long bits) {
    Rational lo(1);
    std::optional<Rational> hi = Rational(1);
    for (const auto& f : factors) {
        Interval iv;
        if (const auto* r = std::get_if<Rational>(&f.base)) {
            iv = power_bounds(*r, *r, f.exponent, bits);
        } else {
            auto [blo, bhi] = std::get<RootSum>(f.base).bounds(bits);
            iv = power_bounds(blo, bhi, f.exponent, bits);
        }
        lo *= iv.lo;
        if (hi && iv.hi) *hi *= *iv.hi;
        else hi.reset();
    }
    if (hi && *hi < 1) return std::strong_ordering::less;
    if (lo > 1) return std::strong_ordering::greater;
    return std::nullopt;
}

// Exact decision for products of rational powers: raise to the lcm of the exponent
// denominators. Returns nullopt when the powers would be unreasonably large.
std::optional<std::strong_ordering> decide_exactly(const std::vector<Quantity::Factor>& factors) {
    BigInt L(1);
    for (const auto& f : factors) L = lcm(L, f.exponent.get_den());
    double bits = 0;
    for (const auto& f : factors) {
        const Rational& b = std::get<Rational>(f.base);
        Rational n = f.exponent * Rational(L);
        bits += std::fabs(to_double(n)) * (static_cast<double>(mpz_sizeinbase(b.get_num_mpz_t(), 2)) +
                                           static_cast<double>(mpz_sizeinbase(b.get_den_mpz_t(), 2)));
    }
    if (bits > 1 << 26) return std::nullopt;
    Rational value(1);
    for (const auto& f : factors) {
        Rational n = f.exponent * Rational(L);
        value *= acw::pow(std::get<Rational>(f.base), n.get_num().get_si());
    }
    int c = cmp(value, Rational(1));
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

}  // namespace

std::strong_ordering compare(const Quantity& lhs, const Quantity& rhs) {
    if (lhs.zero_ || rhs.zero_) {
        if (lhs.zero_ && rhs.zero_) return std::strong_ordering::equal;
        return lhs.zero_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    Quantity q = lhs / rhs;
    if (q.factors_.empty()) return std::strong_ordering::equal;
    const bool all_radical = std::all_of(q.factors_.begin(), q.factors_.end(), [](const auto& f) {
        return std::holds_alternative<Rational>(f.base);
    });
    if (all_radical) {
        if (auto exact = decide_exactly(q.factors_)) return *exact;
    }
    for (unsigned long bits = 64; bits <= (1ul << 16); bits *= 2) {
        if (auto decided = decide_by_intervals(q.factors_, bits)) return *decided;
    }
    throw Error(ErrorKind::Undecidable, "comparison not decided at maximum precision: " + q.to_string());
}

Quantity lp_norm_of_values(const std::vector<Rational>& magnitudes, const NormOrder& order) {
    if (order.infinite()) {
        Rational best(0);
        for (const auto& v : magnitudes) best = std::max(best, abs(v));
        return Quantity::of(best);
    }
    Rational p = order.p();
    p.canonicalize();
    if (p < 1) throw Error(ErrorKind::InvalidArgument, "norm order p must be >= 1, got " + to_string(p));
    std::map<Rational, long> counts;
    for (const auto& v : magnitudes)
        if (v != 0) ++counts[abs(v)];
    if (counts.empty()) return Quantity::zero();
    const unsigned long a = p.get_num().get_ui();
    const unsigned long b = p.get_den().get_ui();
    if (b == 1) {
        Rational total(0);
        for (const auto& [v, c] : counts) total += Rational(c) * acw::pow(v, static_cast<long>(a));
        return Quantity::power(total, Rational(1) / p);
    }
    RootSum sum(b);
    for (const auto& [v, c] : counts) {
        RootSum one(b);
        one.add_power(v, a);
        for (const auto& [m, coef] : one.terms()) sum.add_term(coef * c, m);
    }
    return Quantity::power(sum, Rational(1) / p);
}

}  // namespace acw
