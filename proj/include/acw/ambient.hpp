#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "acw/numeric.hpp"

namespace acw {

/// Group element: one coordinate for Z and Z/nZ, d coordinates for Z^d,
/// prime-exponent vectors for the multiplicative ambient.
using Element = boost::container::small_vector<std::int64_t, 2>;

struct ElementHash {
    std::size_t operator()(const Element& e) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ e.size();
        for (std::int64_t v : e) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

inline Element element(std::int64_t x) { return Element{x}; }

enum class AmbientKind { Integers, Cyclic, Lattice, Multiplicative };

class Ambient {
public:
    /// Z, with elements constrained to [-window, window].
    static Ambient integers(std::int64_t window = 1);
    static Ambient cyclic(std::int64_t modulus);
    static Ambient lattice(int dimension);
    /// Positive rationals generated by `primes`, stored as exponent vectors.
    static Ambient multiplicative(std::vector<std::int64_t> primes);

    AmbientKind kind() const noexcept { return kind_; }
    std::int64_t window() const noexcept { return window_; }
    std::int64_t modulus() const noexcept { return modulus_; }
    /// Number of coordinates of an element.
    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<std::int64_t>& primes() const noexcept { return primes_; }

    bool one_dimensional() const noexcept { return dimension_ == 1; }
    /// True when both describe the same group (integer windows may differ).
    bool same_group(const Ambient& other) const noexcept;
    bool contains(const Element& x) const noexcept;
    /// Canonical representative (reduction mod n); validates the coordinate count.
    Element reduce(Element x) const;
    Element add(const Element& a, const Element& b) const;
    Element sub(const Element& a, const Element& b) const;
    Element neg(const Element& a) const;
    Element zero() const { return Element(dimension_, 0); }
    bool is_zero(const Element& a) const;

    Ambient with_window(std::int64_t window) const;
    /// Smallest integer window that holds x (Integers only).
    Ambient widened_to(const Element& x) const;

    /// Value of a multiplicative element as a positive rational.
    Rational mult_value(const Element& x) const;

    std::string describe() const;
    bool operator==(const Ambient& other) const noexcept;

private:
    AmbientKind kind_ = AmbientKind::Integers;
    std::int64_t window_ = 1;
    std::int64_t modulus_ = 0;
    std::size_t dimension_ = 1;
    std::vector<std::int64_t> primes_;
};

/// Ensures a and b live in the same group; throws AmbientMismatch otherwise.
void require_same_group(const Ambient& a, const Ambient& b, const char* what);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

class FiniteSet {
public:
    FiniteSet() = default;
    /// Validates membership, reduces, sorts and deduplicates.
    FiniteSet(Ambient ambient, std::vector<Element> elements);

    /// Set of integers with the smallest window that holds them.
    static FiniteSet integers(const std::vector<std::int64_t>& xs);
    static FiniteSet cyclic(std::int64_t n, const std::vector<std::int64_t>& xs);
    static FiniteSet whole(const Ambient& ambient);

    const Ambient& ambient() const noexcept { return ambient_; }
    const std::vector<Element>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    bool contains(const Element& x) const;
    /// Coordinates of a one-dimensional set.
    std::vector<std::int64_t> scalars() const;

    FiniteSet negated() const;
    FiniteSet translated(const Element& t) const;
    FiniteSet with_ambient(const Ambient& ambient) const;

    bool operator==(const FiniteSet& other) const noexcept { return elements_ == other.elements_; }
    bool operator!=(const FiniteSet& other) const noexcept { return !(*this == other); }
    /// Deterministic tie-break order: by size, then lexicographically.
    bool canonical_less(const FiniteSet& other) const noexcept;

private:
    Ambient ambient_;
    std::vector<Element> elements_;
};

FiniteSet set_union(const FiniteSet& a, const FiniteSet& b);
FiniteSet set_intersection(const FiniteSet& a, const FiniteSet& b);
FiniteSet set_minus(const FiniteSet& a, const FiniteSet& b);
bool is_subset(const FiniteSet& a, const FiniteSet& b);

std::string element_to_string(const Element& x);
std::string set_to_string(const FiniteSet& a);

}  // namespace acw
