#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <utility>
#include <vector>

#include "acw/ambient.hpp"
#include "acw/error.hpp"
#include "acw/numeric.hpp"

namespace acw {

/// Finitely supported function on an ambient, stored as parallel sorted
/// key/value arrays with no zero values.
template <class V>
class SparseFunction {
public:
    SparseFunction() = default;
    explicit SparseFunction(Ambient ambient) : ambient_(std::move(ambient)) {}

    /// Sums duplicate keys and drops zeros.
    static SparseFunction from_pairs(Ambient ambient, std::vector<std::pair<Element, V>> pairs) {
        SparseFunction f(std::move(ambient));
        for (auto& [k, v] : pairs) {
            k = f.ambient_.reduce(std::move(k));
            if (!f.ambient_.contains(k)) {
                if (f.ambient_.kind() == AmbientKind::Integers) f.ambient_ = f.ambient_.widened_to(k);
                else throw Error(ErrorKind::InvalidArgument, "key " + element_to_string(k) + " outside ambient");
            }
        }
        std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < pairs.size();) {
            V acc = pairs[i].second;
            std::size_t j = i + 1;
            while (j < pairs.size() && pairs[j].first == pairs[i].first) acc += pairs[j++].second;
            if constexpr (std::is_same_v<V, Rational>) acc.canonicalize();
            if (acc != 0) {
                f.keys_.push_back(pairs[i].first);
                f.values_.push_back(acc);
            }
            i = j;
        }
        return f;
    }

    /// Trusted construction from sorted, unique keys with nonzero values.
    static SparseFunction from_sorted(Ambient ambient, std::vector<Element> keys, std::vector<V> values) {
        SparseFunction f(std::move(ambient));
        f.keys_ = std::move(keys);
        f.values_ = std::move(values);
        return f;
    }

    static SparseFunction indicator(const FiniteSet& a) {
        return from_sorted(a.ambient(), a.elements(), std::vector<V>(a.size(), V(1)));
    }

    static SparseFunction delta(const Ambient& ambient, const Element& x) {
        return from_pairs(ambient, {{x, V(1)}});
    }

    const Ambient& ambient() const noexcept { return ambient_; }
    const std::vector<Element>& keys() const noexcept { return keys_; }
    const std::vector<V>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return keys_.size(); }
    bool empty() const noexcept { return keys_.empty(); }

    V at(const Element& x) const {
        auto it = std::lower_bound(keys_.begin(), keys_.end(), x);
        if (it == keys_.end() || *it != x) return V(0);
        return values_[static_cast<std::size_t>(it - keys_.begin())];
    }

    V total() const {
        V acc(0);
        for (const auto& v : values_) acc += v;
        return acc;
    }

    V max_value() const {
        if (values_.empty()) return V(0);
        return *std::max_element(values_.begin(), values_.end());
    }

    bool nonnegative() const {
        return std::all_of(values_.begin(), values_.end(), [](const V& v) { return v >= 0; });
    }

    FiniteSet support() const { return FiniteSet(ambient_, keys_); }

    /// Keys whose value satisfies pred.
    FiniteSet where(const std::function<bool(const V&)>& pred) const {
        std::vector<Element> out;
        for (std::size_t i = 0; i < keys_.size(); ++i)
            if (pred(values_[i])) out.push_back(keys_[i]);
        return FiniteSet(ambient_, std::move(out));
    }

    SparseFunction restricted(const FiniteSet& s) const {
        SparseFunction f(ambient_);
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            if (s.contains(keys_[i])) {
                f.keys_.push_back(keys_[i]);
                f.values_.push_back(values_[i]);
            }
        }
        return f;
    }

    template <class F>
    auto map_values(F&& fn) const {
        using W = decltype(fn(std::declval<const V&>()));
        std::vector<Element> ks;
        std::vector<W> vs;
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            W w = fn(values_[i]);
            if (w != 0) {
                ks.push_back(keys_[i]);
                vs.push_back(std::move(w));
            }
        }
        return SparseFunction<W>::from_sorted(ambient_, std::move(ks), std::move(vs));
    }

    bool operator==(const SparseFunction& other) const {
        return ambient_.same_group(other.ambient_) && keys_ == other.keys_ && values_ == other.values_;
    }

private:
    Ambient ambient_;
    std::vector<Element> keys_;
    std::vector<V> values_;
};

using DensityFunction = SparseFunction<Rational>;
using CountFunction = SparseFunction<std::int64_t>;

inline DensityFunction to_density(const CountFunction& f) {
    return f.map_values([](std::int64_t v) { return Rational(static_cast<long>(v)); });
}

/// <f, g> = sum_x f(x) g(x).
template <class V>
V inner(const SparseFunction<V>& f, const SparseFunction<V>& g) {
    require_same_group(f.ambient(), g.ambient(), "inner product");
    V acc(0);
    std::size_t i = 0, j = 0;
    while (i < f.size() && j < g.size()) {
        if (f.keys()[i] < g.keys()[j]) ++i;
        else if (g.keys()[j] < f.keys()[i]) ++j;
        else acc += f.values()[i++] * g.values()[j++];
    }
    return acc;
}

/// <f, 1_S>.
template <class V>
V sum_over(const SparseFunction<V>& f, const FiniteSet& s) {
    V acc(0);
    for (const auto& x : s.elements()) acc += f.at(x);
    return acc;
}

}  // namespace acw
