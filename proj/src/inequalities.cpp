#include <algorithm>
#include <cmath>
#include <limits>

#include "acw/control.hpp"
#include "acw/convolution.hpp"
#include "acw/decompose.hpp"
#include "acw/error.hpp"
#include "acw/harness.hpp"
#include "harness_internal.hpp"

namespace acw {

namespace {

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Quantity qty(const BigInt& n) { return Quantity::of(n); }
Quantity pw(const BigInt& base, const Rational& e) { return Quantity::power(Rational(base), e); }
Quantity pw(std::int64_t base, const Rational& e) { return Quantity::power(Rational(static_cast<long>(base)), e); }
Quantity pw(const Rational& base, const Rational& e) { return Quantity::power(base, e); }

Rational ratio(std::int64_t a, std::int64_t b) {
    Rational r(static_cast<long>(a), static_cast<long>(b));
    r.canonicalize();
    return r;
}

double log_sum(double a, double b) {
    const double hi = std::max(a, b), lo = std::min(a, b);
    if (hi == -std::numeric_limits<double>::infinity()) return hi;
    return hi + std::log1p(std::exp(lo - hi));
}

// <1_A * 1_B, 1_S>
BigInt inner(const FiniteSet& a, const FiniteSet& b, const FiniteSet& s) {
    CountFunction f = convolve(a, b);
    BigInt total = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (s.contains(f.keys()[i])) total += static_cast<long>(f.values()[i]);
    return total;
}

BigInt cube_autocorrelation(const FiniteSet& x) { return power_sum(diff_convolve(x, x), 3); }

// tau = E(A)/|A|^3
Rational tau_of(const FiniteSet& a) {
    Rational t(energy(a));
    t /= pow(Rational(static_cast<long>(a.size())), 3);
    t.canonicalize();
    return t;
}

struct Sides {
    Side lhs, rhs;
    std::string note;
};

Sides exact(const Quantity& l, const Quantity& r, std::string note = {}) {
    return {Side::of(l), Side::of(r), std::move(note)};
}

std::string kappa_note(const ControlEstimate& k) {
    return "kappa=" + to_string(k.value) + " (" + to_string(k.mode) + ")";
}

// Exact control or PreconditionViolation.
Rational exact_control(const FiniteSet& a, std::int64_t limit) {
    auto k = best_control(a, limit);
    if (k.mode != ControlMode::ExactFiniteGroup)
        throw Error(ErrorKind::PreconditionViolation,
                    "exact control needs a cyclic ambient of order <= " + std::to_string(limit));
    return k.value;
}

// ---- exact mode

Sides cs_energy(const Instance& in) {
    const auto& a = in.set("A");
    auto f = diff_convolve(a, a);
    return exact(qty(power_sum(f, 2)), pw(power_sum(f, 3), q(1, 2)) * pw(power_sum(f, 1), q(1, 2)));
}

Sides hol(const Instance& in) {
    auto f = diff_convolve(in.set("A"), in.set("B"));
    return exact(lp_norm(f, q(3, 2)), lp_norm(f, 3).pow(q(1, 2)) * lp_norm(f, 1).pow(q(1, 2)));
}

// log-convexity of p -> ||f||_p^p with (p, q, r) = (3/2, 2, 3)
Sides hol_interp(const Instance& in) {
    auto f = diff_convolve(in.set("A"), in.set("B"));
    const Rational p = q(3, 2), m = q(2), r = q(3);
    return exact(lp_norm(f, m).pow(m * (r - p)), lp_norm(f, p).pow(p * (r - m)) * lp_norm(f, r).pow(r * (m - p)),
                 "(p,q,r)=(3/2,2,3)");
}

Sides innbound(const Instance& in) {
    const auto &a = in.set("A"), &b = in.set("B"), &s = in.set("S");
    const auto na = static_cast<std::int64_t>(a.size()), nb = static_cast<std::int64_t>(b.size()),
               ns = static_cast<std::int64_t>(s.size());
    BigInt lhs = pow(inner(a, b, s), 8);
    Quantity rhs = pw(na, q(2)) * pw(nb, q(4)) * pw(ns, q(2)) * qty(cube_autocorrelation(a)) *
                   pw(cube_autocorrelation(b), q(2, 3)) * pw(cube_autocorrelation(s), q(1, 3));
    return exact(qty(lhs), rhs);
}

Sides holderbound(const Instance& in, std::int64_t limit) {
    const auto &a = in.set("A"), &s = in.set("S");
    const Rational k = exact_control(a, limit);
    auto f = diff_convolve(a, s);
    return exact(lp_norm(f, q(3, 2)), holder_upper_bound(a, s, k), "kappa=" + to_string(k) + " (exact)");
}

Sides remove(const Instance& in, std::int64_t limit) {
    const auto &a1 = in.set("A1"), &a2 = in.set("A2");
    if (!set_intersection(a1, a2).empty()) throw Error(ErrorKind::PreconditionViolation, "A1 and A2 must be disjoint");
    const Rational k = exact_control(set_union(a1, a2), limit);
    const Rational k1 = exact_control(a1, limit), k2 = exact_control(a2, limit);
    return exact(Quantity::of(k), Quantity::of(k1 + k2),
                 "kappa1=" + to_string(k1) + " kappa2=" + to_string(k2));
}

// ---- fitted mode

Sides auxcont(const Instance& in, std::int64_t limit) {
    const auto &a = in.set("A"), &b = in.set("B");
    auto k = best_control(a, limit);
    const auto na = static_cast<std::int64_t>(a.size()), nb = static_cast<std::int64_t>(b.size());
    Quantity lhs = pw(power_sum(convolve(a, b), 3), q(1, 3));
    // f = 1_B: ||f||_{3/2} = |B|^{2/3}, ||f||_1 = |B|, ||f||_inf = 1
    Quantity main = pw(k.value, q(1, 3)) * pw(na, q(2, 3)) * pw(nb, q(2, 3));
    const double tail = 100 * std::log(to_double(k.value)) + std::log(static_cast<double>(na)) +
                        std::log(static_cast<double>(nb)) / 3;
    return {Side::of(lhs), Side::approx(log_sum(main.log_value(), tail)), kappa_note(k)};
}

Sides diffapp(const Instance& in, std::int64_t limit) {
    const auto& a = in.set("A");
    auto k = best_control(a, limit);
    const auto na = static_cast<std::int64_t>(a.size());
    const Rational big_k = ratio(static_cast<std::int64_t>(set_algebra(a, a, SetOp::Difference).size()), na);
    const Rational delta = 1 / (2 * big_k);
    FiniteSet s = symmetry_set(a, delta);
    Quantity rhs = pw(k.value, q(4, 3)) * pw(big_k, q(5, 3)) * lp_norm(diff_convolve(a, s), q(3, 2));
    return exact(pw(na, q(5, 3)), rhs, kappa_note(k) + " K=" + to_string(big_k) + " |S|=" + std::to_string(s.size()));
}

// delta from the dyadic level carrying the most energy
Rational energy_level_delta(const FiniteSet& a) {
    auto f = diff_convolve(a, a);
    return dominant_level(f, q(2), default_level_floor(), Rational(static_cast<long>(a.size()))).delta;
}

Sides sumapp(const Instance& in, std::int64_t limit) {
    const auto& a = in.set("A");
    auto k = best_control(a, limit);
    const auto na = static_cast<std::int64_t>(a.size());
    const Rational big_k = ratio(static_cast<std::int64_t>(set_algebra(a, a, SetOp::Sum).size()), na);
    const Rational tau = tau_of(a), delta = energy_level_delta(a);
    FiniteSet s = symmetry_set(a, delta);
    Quantity lhs = pw(tau, q(2)) * pw(na, q(5, 3));
    Quantity rhs = pw(k.value, q(4, 3)) * pw(big_k, q(5, 3)) * pw(delta, q(2)) * lp_norm(diff_convolve(a, s), q(3, 2));
    return exact(lhs, rhs, kappa_note(k) + " K=" + to_string(big_k) + " delta=" + to_string(delta));
}

Sides diffbound(const Instance& in, std::int64_t limit) {
    const auto& a = in.set("A");
    auto k = best_control(a, limit);
    const auto na = static_cast<std::int64_t>(a.size());
    const Rational big_k = ratio(static_cast<std::int64_t>(set_algebra(a, a, SetOp::Difference).size()), na);
    const Rational delta = 1 / (2 * big_k), tau = tau_of(a);
    FiniteSet s = symmetry_set(a, delta);
    const auto ns = static_cast<std::int64_t>(s.size());
    Quantity rhs = pw(tau, q(1, 10)) * pw(delta, q(-3, 10)) * pw(k.value, q(17, 60)) * pw(big_k, q(11, 60)) *
                   pw(na, q(31, 30)) * pw(ns, q(19, 30));
    return exact(lp_norm(diff_convolve(a, s), q(3, 2)), rhs,
                 kappa_note(k) + " K=" + to_string(big_k) + " tau=" + to_string(tau));
}

// A1 = A2 = A, S = S' the symmetry set at the energy level, L = 1
Sides key(const Instance& in, std::int64_t limit) {
    const auto& a = in.set("A");
    auto k = best_control(a, limit);
    const auto na = static_cast<std::int64_t>(a.size());
    const Rational delta = energy_level_delta(a);
    FiniteSet s = symmetry_set(a, delta);
    const auto ns = static_cast<std::int64_t>(s.size());
    auto g = diff_convolve(a, s);
    std::int64_t least = std::numeric_limits<std::int64_t>::max();
    for (const auto& x : a.elements()) least = std::min<std::int64_t>(least, static_cast<std::int64_t>(g.at(x)));
    const Rational nu = ratio(least, na);
    Quantity main = pw(nu, q(-8, 7)) * pw(k.value, q(4, 7)) * pw(delta, q(-2, 7)) * pw(na, q(8, 21)) *
                    pw(ns, q(4, 7)) * pw(ns, q(5, 7));
    const double tail = 99 * std::log(to_double(k.value)) + std::log(static_cast<double>(na)) * 4 / 3 +
                        std::log(static_cast<double>(ns)) / 3;
    return {Side::of(lp_norm(g, q(3, 2))), Side::approx(log_sum(main.log_value(), tail)),
            kappa_note(k) + " delta=" + to_string(delta) + " nu=" + to_string(nu)};
}

Sides sp1(const Instance& in, std::int64_t limit) {
    const auto& a = in.set("A");
    if (a.ambient().kind() != AmbientKind::Integers)
        throw Error(ErrorKind::PreconditionViolation, "sp1 needs positive integers");
    for (auto v : a.scalars())
        if (v <= 0) throw Error(ErrorKind::PreconditionViolation, "sp1 needs positive integers");
    auto k = best_control(a, limit);
    const auto na = static_cast<std::int64_t>(a.size());
    const auto st = expander_stats(a);
    const Rational big_k = ratio(static_cast<std::int64_t>(st.product_set), na);
    return exact(Quantity::of(k.value), pw(big_k, q(2)) * pw(na, q(-1)), kappa_note(k) + " K=" + to_string(big_k));
}

Sides convcont(const Instance& in, std::int64_t limit) {
    const auto& a = in.set("A");
    if (!is_convex(a)) throw Error(ErrorKind::PreconditionViolation, "convcont needs a convex set");
    auto k = best_control(a, limit);
    return exact(Quantity::of(k.value), pw(static_cast<std::int64_t>(a.size()), q(-1)), kappa_note(k));
}

}  // namespace

ControlEstimate best_control(const FiniteSet& a, std::int64_t exhaustive_limit) {
    if (a.ambient().kind() == AmbientKind::Cyclic && a.ambient().modulus() <= exhaustive_limit)
        return control_exhaustive(a);
    return control_candidates(a);
}

std::string to_string(AssertionMode mode) {
    switch (mode) {
        case AssertionMode::Exact: return "exact";
        case AssertionMode::Fitted: return "fitted-constant";
        case AssertionMode::Trend: return "trend";
    }
    return "?";
}

const std::vector<InequalitySpec>& inequality_catalog() {
    static const std::vector<InequalitySpec> specs = [] {
        std::vector<InequalitySpec> v{
            {"auxcont", AssertionMode::Fitted, {"A", "B"},
             "||1_A*1_B||_3 <~ kappa^{1/3}|A|^{2/3}||1_B||_{3/2} + kappa^100|A| ||1_B||_1^{1/3}||1_B||_inf^{2/3}"},
            {"convcont", AssertionMode::Fitted, {"A"}, "convex A: kappa <~ |A|^-1"},
            {"cs_energy", AssertionMode::Exact, {"A"}, "E(A) <= (sum (1_A o 1_A)^3)^{1/2} (sum 1_A o 1_A)^{1/2}"},
            {"diffapp", AssertionMode::Fitted, {"A"},
             "|A|^{5/3} << kappa^{4/3}K^{5/3}||1_A o 1_S||_{3/2}, K=|A-A|/|A|, S={1_A o 1_A >= |A|/2K}"},
            {"diffbound", AssertionMode::Fitted, {"A"},
             "||1_A o 1_S||_{3/2} <~ tau^{1/10}delta^{-3/10}kappa^{17/60}K^{11/60}|A|^{31/30}|S|^{19/30}, delta=1/2K"},
            {"diffset_trend", AssertionMode::Trend, {"corpus"}, "slope of log|A-A| against log|A| on convex sets"},
            {"energy_trend", AssertionMode::Trend, {"corpus"}, "slope of log E(A) against log|A| on convex sets"},
            {"hol", AssertionMode::Exact, {"A", "B"}, "||f||_{3/2} <= ||f||_3^{1/2}||f||_1^{1/2}, f = 1_A o 1_B"},
            {"hol_interp", AssertionMode::Exact, {"A", "B"},
             "||f||_q^{q(r-p)} <= ||f||_p^{p(r-q)}||f||_r^{r(q-p)}, p<q<r, f = 1_A o 1_B"},
            {"holderbound", AssertionMode::Exact, {"A", "S"}, "||1_A o 1_S||_{3/2} <= kappa^{1/6}|A|^{5/6}|S|^{5/6}"},
            {"innbound", AssertionMode::Exact, {"A", "B", "S"},
             "<1_A*1_B,1_S>^8 <= |A|^2|B|^4|S|^2 ||1_A o 1_A||_3^3 ||1_B o 1_B||_3^2 ||1_S o 1_S||_3"},
            {"kappa_trend", AssertionMode::Trend, {"corpus"}, "slope of log(kappa|A|) against log|A| on convex sets"},
            {"key", AssertionMode::Fitted, {"A"},
             "||1_A o 1_S||_{3/2} <~ L^{1/7}nu^{-8/7}kappa^{4/7}delta^{-2/7}|A|^{8/21}|S'|^{4/7}|S|^{5/7} + "
             "kappa^99|A|^{4/3}|S|^{1/3}"},
            {"remove", AssertionMode::Exact, {"A1", "A2"}, "kappa(A1 u A2) <= kappa(A1) + kappa(A2), disjoint"},
            {"sp1", AssertionMode::Fitted, {"A"}, "kappa << K^2|A|^-1, K=|AA|/|A|"},
            {"sumapp", AssertionMode::Fitted, {"A"},
             "tau^2|A|^{5/3} <~ kappa^{4/3}K^{5/3}delta^2||1_A o 1_S||_{3/2}, K=|A+A|/|A|"},
            {"sumset_trend", AssertionMode::Trend, {"corpus"}, "slope of log|A+A| against log|A| on convex sets"},
        };
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
        return v;
    }();
    return specs;
}

const InequalitySpec& find_spec(const std::string& id) {
    for (const auto& s : inequality_catalog())
        if (s.id == id) return s;
    throw Error(ErrorKind::UnknownSpec, "unknown inequality '" + id + "'");
}

const FiniteSet& Instance::set(const std::string& name) const {
    auto it = sets.find(name);
    if (it == sets.end()) throw Error(ErrorKind::MissingInput, "instance '" + id + "' has no set " + name);
    return it->second;
}

Side Side::of(const Quantity& x) { return Side{x, x.log_value()}; }
Side Side::approx(double log_value) { return Side{std::nullopt, log_value}; }

std::string Side::exact_string() const {
    if (!exact) return {};
    if (auto r = exact->as_rational()) return to_string(*r);
    return exact->to_string();
}

std::string Side::decimal() const {
    if (exact)
        if (auto r = exact->as_rational()) return to_decimal(*r, 12);
    return to_decimal(std::exp(log_value), 12);
}

InequalityReport eval_inequality(const std::string& spec_id, const Instance& instance) {
    return eval_inequality(spec_id, instance, 18);
}

InequalityReport eval_inequality(const std::string& spec_id, const Instance& instance, std::int64_t limit) {
    const InequalitySpec& spec = find_spec(spec_id);
    if (spec.mode == AssertionMode::Trend)
        throw Error(ErrorKind::UnsupportedOperation, spec_id + " is a trend spec; run it through a suite");
    for (const auto& name : spec.inputs) instance.set(name);

    Sides s;
    if (spec_id == "cs_energy") s = cs_energy(instance);
    else if (spec_id == "hol") s = hol(instance);
    else if (spec_id == "hol_interp") s = hol_interp(instance);
    else if (spec_id == "innbound") s = innbound(instance);
    else if (spec_id == "holderbound") s = holderbound(instance, limit);
    else if (spec_id == "remove") s = remove(instance, limit);
    else if (spec_id == "auxcont") s = auxcont(instance, limit);
    else if (spec_id == "diffapp") s = diffapp(instance, limit);
    else if (spec_id == "sumapp") s = sumapp(instance, limit);
    else if (spec_id == "diffbound") s = diffbound(instance, limit);
    else if (spec_id == "key") s = key(instance, limit);
    else if (spec_id == "sp1") s = sp1(instance, limit);
    else if (spec_id == "convcont") s = convcont(instance, limit);
    else throw Error(ErrorKind::Internal, "no evaluator for " + spec_id);

    InequalityReport r;
    r.spec_id = spec_id;
    r.mode = spec.mode;
    r.instance_id = instance.id;
    r.instance_description = instance.description;
    r.inputs = instance_inputs(instance, spec.inputs);
    r.lhs = s.lhs;
    r.rhs = s.rhs;
    r.note = s.note;
    if (r.lhs.exact && r.rhs.exact && !r.rhs.exact->is_zero()) r.implied_constant_exact = (*r.lhs.exact / *r.rhs.exact).as_rational();
    r.implied_constant = r.implied_constant_exact ? to_double(*r.implied_constant_exact) : std::exp(r.lhs.log_value - r.rhs.log_value);
    if (spec.mode == AssertionMode::Exact) {
        if (!r.lhs.exact || !r.rhs.exact) throw Error(ErrorKind::Internal, "exact spec produced an inexact side");
        r.pass = *r.lhs.exact <= *r.rhs.exact;
    }
    return r;
}

nlohmann::json instance_inputs(const Instance& instance, const std::vector<std::string>& names) {
    nlohmann::json j = nlohmann::json::object();
    nlohmann::json sets = nlohmann::json::object();
    for (const auto& n : names)
        if (instance.sets.count(n)) sets[n] = set_to_json(instance.sets.at(n));
    j["sets"] = sets;
    if (instance.family) j["family"] = instance.family->describe();
    j["seed"] = instance.seed;
    return j;
}

}  // namespace acw
