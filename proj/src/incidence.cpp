#include "acw/incidence.hpp"

#include <algorithm>
#include <climits>
#include <exception>
#include <optional>
#include <set>

#include <omp.h>

#include "acw/error.hpp"

namespace acw {

namespace {

using Poly = std::vector<Rational>;

// coefficients of p(u - s), low degree first
Poly shifted(const std::vector<BigInt>& c, const Rational& s) {
    Poly out(c.size(), Rational(0));
    for (std::size_t k = 0; k < c.size(); ++k) {
        // c_k (u - s)^k = c_k sum_j binom(k, j) u^j (-s)^(k-j)
        BigInt binom = 1;
        for (std::size_t j = 0; j <= k; ++j) {
            if (j > 0) binom = binom * static_cast<unsigned long>(k - j + 1) / static_cast<unsigned long>(j);
            out[j] += Rational(c[k] * binom) * pow(-s, static_cast<long>(k - j));
        }
    }
    for (auto& v : out) v.canonicalize();
    return out;
}

Rational eval(const Poly& p, const Rational& x) {
    Rational acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    acc.canonicalize();
    return acc;
}

}  // namespace

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
    for (auto& [u, v] : points_) {
        u.canonicalize();
        v.canonicalize();
    }
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

PointSet PointSet::product(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    std::vector<Point> pts;
    pts.reserve(xs.size() * ys.size());
    for (const auto& u : xs)
        for (const auto& v : ys) pts.emplace_back(u, v);
    return PointSet(std::move(pts));
}

Rational CurveFamily::argument(std::size_t i, const Rational& u) const {
    Rational a = kind == Kind::Translate ? Rational(u - shifts[i].first) : Rational(u + shifts[i].first);
    a.canonicalize();
    return a;
}

// Value of curve i above u, or nothing off the domain / outside the table range.
static std::optional<Rational> curve_value(const CurveFamily& curves, std::size_t i, const Rational& u) {
    const Rational arg = curves.argument(i, u);
    const ConvexFunctionSpec& f = curves.base;
    switch (f.kind()) {
        case ConvexFunctionSpec::Kind::Table:
            // inside the range a missing abscissa raises OffTable from f()
            if (arg < *f.domain_lo() || arg > *f.domain_hi()) return std::nullopt;
            break;
        case ConvexFunctionSpec::Kind::Polynomial:
            if (!f.in_domain(arg)) return std::nullopt;
            break;
        case ConvexFunctionSpec::Kind::NegativeLogarithm:
            throw Error(ErrorKind::UnsupportedOperation, "incidences need an exactly evaluable curve");
    }
    Rational v = f(arg) + curves.shifts[i].second;
    v.canonicalize();
    return v;
}

bool incident(const CurveFamily& curves, std::size_t i, const Point& p) {
    auto v = curve_value(curves, i, p.first);
    return v && *v == p.second;
}

std::int64_t count_incidences_reference(const PointSet& points, const CurveFamily& curves) {
    std::int64_t count = 0;
    for (const auto& p : points.points())
        for (std::size_t i = 0; i < curves.size(); ++i) count += incident(curves, i, p) ? 1 : 0;
    return count;
}

std::int64_t count_incidences(const PointSet& points, const CurveFamily& curves) {
    if (curves.base.kind() == ConvexFunctionSpec::Kind::NegativeLogarithm)
        throw Error(ErrorKind::UnsupportedOperation, "incidences need an exactly evaluable curve");
    // abscissa -> sorted ordinates (points are sorted, so each run is sorted)
    std::vector<std::pair<Rational, std::vector<Rational>>> columns;
    for (const auto& [u, v] : points.points()) {
        if (columns.empty() || columns.back().first != u) columns.push_back({u, {}});
        columns.back().second.push_back(v);
    }
    std::int64_t total = 0;
    std::exception_ptr failure;
    const auto n = static_cast<std::int64_t>(curves.size());
#pragma omp parallel for reduction(+ : total) schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            const auto ci = static_cast<std::size_t>(i);
            for (const auto& [u, vs] : columns) {
                auto v = curve_value(curves, ci, u);
                if (v && std::binary_search(vs.begin(), vs.end(), *v)) ++total;
            }
        } catch (...) {
#pragma omp critical(acw_incidence_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return total;
}

std::int64_t st_denominator(std::int64_t points, std::int64_t curves) {
    BigInt prod = BigInt(static_cast<long>(points)) * BigInt(static_cast<long>(curves));
    BigInt main = ceil_root(prod * prod, 3);
    BigInt d = main + static_cast<long>(points) + static_cast<long>(curves);
    if (!d.fits_slong_p()) throw Error(ErrorKind::Overflow, "Szemeredi-Trotter denominator overflows");
    return d.get_si();
}

Rational st_ratio(const PointSet& points, const CurveFamily& curves) {
    if (points.empty() || curves.size() == 0) throw Error(ErrorKind::InvalidArgument, "st_ratio needs |P|, |L| >= 1");
    Rational r(static_cast<long>(count_incidences(points, curves)),
               static_cast<long>(st_denominator(static_cast<std::int64_t>(points.size()), static_cast<std::int64_t>(curves.size()))));
    r.canonicalize();
    return r;
}

int max_pairwise_intersections(const CurveFamily& curves, const std::vector<Rational>& probes) {
    if (probes.empty()) return 0;
    const auto [lo_it, hi_it] = std::minmax_element(probes.begin(), probes.end());
    const Rational lo = *lo_it, hi = *hi_it;
    int worst = 0;
    const ConvexFunctionSpec& f = curves.base;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (std::size_t j = i + 1; j < curves.size(); ++j) {
            int common = 0;
            if (f.kind() == ConvexFunctionSpec::Kind::Polynomial) {
                auto si = curves.kind == CurveFamily::Kind::Translate ? curves.shifts[i].first : -curves.shifts[i].first;
                auto sj = curves.kind == CurveFamily::Kind::Translate ? curves.shifts[j].first : -curves.shifts[j].first;
                Poly d = shifted(f.coefficients(), si);
                Poly dj = shifted(f.coefficients(), sj);
                if (d.empty()) d.push_back(Rational(0));
                d.resize(std::max(d.size(), dj.size()), Rational(0));
                for (std::size_t k = 0; k < dj.size(); ++k) d[k] -= dj[k];
                d[0] += curves.shifts[i].second - curves.shifts[j].second;
                for (auto& c : d) c.canonicalize();
                while (!d.empty() && d.back() == 0) d.pop_back();
                if (d.empty()) return INT_MAX;  // coincident curves
                common = count_real_roots(d, lo, hi) + (eval(d, lo) == 0 ? 1 : 0);
            } else {
                for (const auto& u : probes) {
                    if (!f.in_domain(curves.argument(i, u)) || !f.in_domain(curves.argument(j, u))) continue;
                    if (*curve_value(curves, i, u) == *curve_value(curves, j, u)) ++common;
                }
            }
            worst = std::max(worst, common);
        }
    }
    return worst;
}

ConvContWitness convcont_witness(const FiniteSet& x, const ConvexFunctionSpec& f, const FiniteSet& y,
                                 const FiniteSet& b, const FiniteSet& c) {
    for (const auto* s : {&x, &y, &b, &c})
        if (s->ambient().kind() != AmbientKind::Integers)
            throw Error(ErrorKind::InvalidArgument, "convcont_witness works with sets of integers");
    if (!f.exact()) throw Error(ErrorKind::UnsupportedOperation, "convcont_witness needs exact values of f");
    auto rationals = [](const FiniteSet& s) {
        std::vector<Rational> out;
        for (auto v : s.scalars()) out.emplace_back(static_cast<long>(v));
        return out;
    };
    const auto xs = rationals(x), ys = rationals(y), bs = rationals(b), cs = rationals(c);
    std::set<Rational> a;
    for (const auto& v : xs) a.insert(f(v));
    std::set<Rational> cset(cs.begin(), cs.end());

    std::set<Rational> ab;
    ConvContWitness w;
    for (const auto& av : a)
        for (const auto& bv : bs) {
            Rational s = av + bv;
            s.canonicalize();
            ab.insert(s);
            if (cset.count(s)) ++w.solutions;
        }
    for (const auto& cv : cs)
        if (!ab.count(cv)) throw Error(ErrorKind::PreconditionViolation, "C is not inside f(X)+B: " + to_string(cv));

    std::set<Rational> xy;
    for (const auto& u : xs)
        for (const auto& v : ys) {
            Rational s = u + v;
            s.canonicalize();
            xy.insert(s);
        }
    PointSet p = PointSet::product(std::vector<Rational>(xy.begin(), xy.end()), cs);
    CurveFamily l;
    l.base = f;
    l.kind = CurveFamily::Kind::Translate;
    for (const auto& yv : ys)
        for (const auto& bv : bs) l.shifts.emplace_back(yv, bv);

    w.incidences = count_incidences(p, l);
    w.lower_bound = static_cast<std::int64_t>(ys.size()) * w.solutions;
    w.points = static_cast<std::int64_t>(p.size());
    w.curves = static_cast<std::int64_t>(l.size());
    w.holds = w.incidences >= w.lower_bound;
    return w;
}

}  // namespace acw
