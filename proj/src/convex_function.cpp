#include "acw/convex_function.hpp"

#include <algorithm>

#include "acw/error.hpp"

namespace acw {

namespace {

using Poly = std::vector<Rational>;

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Rational eval(const Poly& p, const Rational& x) {
    Rational acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    acc.canonicalize();
    return acc;
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    trim(d);
    return d;
}

Poly remainder(Poly a, const Poly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        Rational q = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[shift + i] -= q * b[i];
            a[shift + i].canonicalize();
        }
        a.pop_back();
        trim(a);
    }
    return a;
}

int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

int sign_at(const Poly& p, const std::optional<Rational>& x, bool at_plus_infinity) {
    if (x) return sign(eval(p, *x));
    int s = sign(p.back());
    if (!at_plus_infinity && (p.size() - 1) % 2 == 1) s = -s;
    return s;
}

int variations(const std::vector<Poly>& chain, const std::optional<Rational>& x, bool plus_inf) {
    int count = 0, last = 0;
    for (const auto& p : chain) {
        int s = sign_at(p, x, plus_inf);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

Poly to_poly(const std::vector<BigInt>& c) {
    Poly p;
    for (const auto& v : c) p.emplace_back(v);
    trim(p);
    return p;
}

}  // namespace

int count_real_roots(const std::vector<Rational>& input, const std::optional<Rational>& lo,
                     const std::optional<Rational>& hi) {
    Poly p = input;
    trim(p);
    if (p.empty()) throw Error(ErrorKind::InvalidArgument, "root count of the zero polynomial");
    if (p.size() == 1) return 0;
    std::vector<Poly> chain{p, derivative(p)};
    while (true) {
        Poly r = remainder(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return variations(chain, lo, false) - variations(chain, hi, true);
}

ConvexFunctionSpec ConvexFunctionSpec::polynomial(std::vector<BigInt> coefficients, std::optional<Rational> lo,
                                                  std::optional<Rational> hi) {
    ConvexFunctionSpec f;
    f.kind_ = Kind::Polynomial;
    while (!coefficients.empty() && coefficients.back() == 0) coefficients.pop_back();
    f.coefficients_ = std::move(coefficients);
    f.lo_ = std::move(lo);
    f.hi_ = std::move(hi);
    if (f.lo_ && f.hi_ && *f.hi_ < *f.lo_) throw Error(ErrorKind::InvalidArgument, "empty polynomial domain");

    Poly second = derivative(derivative(to_poly(f.coefficients_)));
    if (second.empty()) throw Error(ErrorKind::NonConvex, f.describe() + " has zero second derivative");
    bool positive = sign_at(second, f.lo_, false) > 0 && sign_at(second, f.hi_, true) > 0 &&
                    count_real_roots(second, f.lo_, f.hi_) == 0;
    if (!positive) throw Error(ErrorKind::NonConvex, "second derivative of " + f.describe() + " not positive on domain");
    return f;
}

ConvexFunctionSpec ConvexFunctionSpec::table(std::map<Rational, Rational> values) {
    ConvexFunctionSpec f;
    f.kind_ = Kind::Table;
    if (values.size() < 2) throw Error(ErrorKind::InvalidArgument, "table needs at least two points");
    f.table_ = std::move(values);
    f.lo_ = f.table_.begin()->first;
    f.hi_ = f.table_.rbegin()->first;
    std::vector<Rational> xs;
    for (const auto& kv : f.table_) xs.push_back(kv.first);
    f.check_convex_on(std::move(xs));
    return f;
}

ConvexFunctionSpec ConvexFunctionSpec::negative_logarithm() {
    ConvexFunctionSpec f;
    f.kind_ = Kind::NegativeLogarithm;
    f.lo_ = Rational(0);
    return f;
}

bool ConvexFunctionSpec::in_domain(const Rational& x) const {
    switch (kind_) {
        case Kind::Table: return table_.count(x) > 0;
        case Kind::NegativeLogarithm: return x > 0;
        case Kind::Polynomial: return (!lo_ || *lo_ <= x) && (!hi_ || x <= *hi_);
    }
    return false;
}

Rational ConvexFunctionSpec::operator()(const Rational& x) const {
    switch (kind_) {
        case Kind::Table: {
            auto it = table_.find(x);
            if (it == table_.end()) throw Error(ErrorKind::OffTable, "no table value at " + to_string(x));
            return it->second;
        }
        case Kind::NegativeLogarithm:
            throw Error(ErrorKind::UnsupportedOperation, "-log x has no exact rational values");
        case Kind::Polynomial:
            if (!in_domain(x)) throw Error(ErrorKind::InvalidArgument, to_string(x) + " outside polynomial domain");
            return eval(to_poly(coefficients_), x);
    }
    throw Error(ErrorKind::Internal, "unknown function kind");
}

void ConvexFunctionSpec::check_convex_on(std::vector<Rational> points) const {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (kind_ == Kind::NegativeLogarithm) {
        if (!points.empty() && points.front() <= 0)
            throw Error(ErrorKind::NonConvex, "-log x is undefined at " + to_string(points.front()));
        return;
    }
    std::vector<Rational> ys;
    for (const auto& x : points) ys.push_back((*this)(x));
    for (std::size_t i = 2; i < points.size(); ++i) {
        Rational s0 = (ys[i - 1] - ys[i - 2]) / (points[i - 1] - points[i - 2]);
        Rational s1 = (ys[i] - ys[i - 1]) / (points[i] - points[i - 1]);
        if (!(s0 < s1))
            throw Error(ErrorKind::NonConvex, describe() + " fails the second difference test at " + to_string(points[i - 1]));
    }
}

std::string ConvexFunctionSpec::describe() const {
    switch (kind_) {
        case Kind::NegativeLogarithm: return "-log(x)";
        case Kind::Table: return "table[" + std::to_string(table_.size()) + " points]";
        case Kind::Polynomial: {
            std::string out;
            for (std::size_t i = coefficients_.size(); i-- > 0;) {
                if (coefficients_[i] == 0) continue;
                if (!out.empty()) out += coefficients_[i] < 0 ? " - " : " + ";
                else if (coefficients_[i] < 0) out += "-";
                BigInt c = abs(coefficients_[i]);
                if (c != 1 || i == 0) out += to_string(c);
                if (i >= 1) out += "x";
                if (i >= 2) out += "^" + std::to_string(i);
            }
            return out.empty() ? "0" : out;
        }
    }
    return "?";
}

}  // namespace acw
