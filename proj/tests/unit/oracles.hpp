#pragma once

// Brute-force reference computations used as test oracles. These deliberately
// avoid the library's convolution code paths.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "acw/ambient.hpp"
#include "acw/function.hpp"

namespace oracle {

using acw::Element;
using acw::Rational;

inline std::map<Element, Rational> as_map(const acw::DensityFunction& f) {
    std::map<Element, Rational> m;
    for (std::size_t i = 0; i < f.size(); ++i) m[f.keys()[i]] = f.values()[i];
    return m;
}

inline std::map<Element, Rational> as_map(const acw::CountFunction& f) {
    std::map<Element, Rational> m;
    for (std::size_t i = 0; i < f.size(); ++i) m[f.keys()[i]] = Rational(static_cast<long>(f.values()[i]));
    return m;
}

// f*g by summing over every pair (x, y) of support points.
inline std::map<Element, Rational> convolve(const acw::Ambient& amb, const std::map<Element, Rational>& f,
                                            const std::map<Element, Rational>& g, bool difference = false) {
    std::map<Element, Rational> out;
    for (const auto& [x, fx] : f)
        for (const auto& [y, gy] : g) out[difference ? amb.sub(x, y) : amb.add(x, y)] += fx * gy;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

// #{(a,b,c,d) in A^4 : a+b = c+d}
inline long energy_quadruples(const acw::FiniteSet& a) {
    const auto& e = a.elements();
    const auto& amb = a.ambient();
    long count = 0;
    for (const auto& x : e)
        for (const auto& y : e)
            for (const auto& z : e)
                for (const auto& w : e)
                    if (amb.add(x, y) == amb.add(z, w)) ++count;
    return count;
}

// sum_x (1_A*1_B(x))^3 by counting triples of pairs with equal sums.
inline long cube_sum_pairs(const acw::FiniteSet& a, const acw::FiniteSet& b) {
    std::map<Element, long> r;
    for (const auto& x : a.elements())
        for (const auto& y : b.elements()) ++r[a.ambient().add(x, y)];
    long s = 0;
    for (const auto& [k, v] : r) s += v * v * v;
    return s;
}

inline acw::FiniteSet random_cyclic(std::mt19937_64& rng, std::int64_t n, double density = 0.4) {
    std::bernoulli_distribution coin(density);
    std::vector<std::int64_t> xs;
    for (std::int64_t i = 0; i < n; ++i)
        if (coin(rng)) xs.push_back(i);
    if (xs.empty()) xs.push_back(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n)));
    return acw::FiniteSet::cyclic(n, xs);
}

inline acw::FiniteSet random_integers(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi, std::size_t count) {
    std::uniform_int_distribution<std::int64_t> d(lo, hi);
    std::vector<std::int64_t> xs;
    for (std::size_t i = 0; i < count; ++i) xs.push_back(d(rng));
    return acw::FiniteSet::integers(xs);
}

inline Rational random_rational(std::mt19937_64& rng, long span = 20, long den = 7) {
    std::uniform_int_distribution<long> n(-span, span), q(1, den);
    Rational r(n(rng), q(rng));
    r.canonicalize();
    return r;
}

}  // namespace oracle
