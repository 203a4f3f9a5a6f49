#include "acw/ambient.hpp"

#include <algorithm>

#include "acw/error.hpp"

namespace acw {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "element addition overflows int64");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "element subtraction overflows int64");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "multiplication overflows int64");
    return r;
}

Ambient Ambient::integers(std::int64_t window) {
    if (window < 1) throw Error(ErrorKind::InvalidArgument, "integer window must be >= 1");
    Ambient a;
    a.kind_ = AmbientKind::Integers;
    a.window_ = window;
    return a;
}

Ambient Ambient::cyclic(std::int64_t modulus) {
    if (modulus < 1) throw Error(ErrorKind::InvalidArgument, "modulus must be >= 1");
    Ambient a;
    a.kind_ = AmbientKind::Cyclic;
    a.modulus_ = modulus;
    return a;
}

Ambient Ambient::lattice(int dimension) {
    if (dimension < 1) throw Error(ErrorKind::InvalidArgument, "lattice dimension must be >= 1");
    Ambient a;
    a.kind_ = AmbientKind::Lattice;
    a.dimension_ = static_cast<std::size_t>(dimension);
    return a;
}

Ambient Ambient::multiplicative(std::vector<std::int64_t> primes) {
    if (primes.empty()) primes.push_back(2);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] < 2 || (i > 0 && primes[i] <= primes[i - 1]))
            throw Error(ErrorKind::InvalidArgument, "multiplicative basis must be increasing primes");
    }
    Ambient a;
    a.kind_ = AmbientKind::Multiplicative;
    a.dimension_ = primes.size();
    a.primes_ = std::move(primes);
    return a;
}

bool Ambient::same_group(const Ambient& other) const noexcept {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case AmbientKind::Integers: return true;
        case AmbientKind::Cyclic: return modulus_ == other.modulus_;
        case AmbientKind::Lattice: return dimension_ == other.dimension_;
        case AmbientKind::Multiplicative: return primes_ == other.primes_;
    }
    return false;
}

bool Ambient::operator==(const Ambient& other) const noexcept {
    return same_group(other) && (kind_ != AmbientKind::Integers || window_ == other.window_);
}

void require_same_group(const Ambient& a, const Ambient& b, const char* what) {
    if (!a.same_group(b))
        throw Error(ErrorKind::AmbientMismatch, std::string(what) + ": " + a.describe() + " vs " + b.describe());
}

bool Ambient::contains(const Element& x) const noexcept {
    if (x.size() != dimension_) return false;
    switch (kind_) {
        case AmbientKind::Integers: return x[0] >= -window_ && x[0] <= window_;
        case AmbientKind::Cyclic: return x[0] >= 0 && x[0] < modulus_;
        default: return true;
    }
}

Element Ambient::reduce(Element x) const {
    if (x.size() != dimension_)
        throw Error(ErrorKind::InvalidArgument, "element has " + std::to_string(x.size()) + " coordinates, ambient " +
                                                    describe() + " expects " + std::to_string(dimension_));
    if (kind_ == AmbientKind::Cyclic) {
        x[0] %= modulus_;
        if (x[0] < 0) x[0] += modulus_;
    }
    return x;
}

Element Ambient::add(const Element& a, const Element& b) const {
    Element r(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) r[i] = checked_add(a[i], b[i]);
    return reduce(std::move(r));
}

Element Ambient::sub(const Element& a, const Element& b) const {
    Element r(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) r[i] = checked_sub(a[i], b[i]);
    return reduce(std::move(r));
}

Element Ambient::neg(const Element& a) const {
    Element r(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) r[i] = checked_sub(0, a[i]);
    return reduce(std::move(r));
}

bool Ambient::is_zero(const Element& a) const {
    return std::all_of(a.begin(), a.end(), [](std::int64_t v) { return v == 0; });
}

Ambient Ambient::with_window(std::int64_t window) const {
    if (kind_ != AmbientKind::Integers) return *this;
    return integers(std::max<std::int64_t>(1, window));
}

Ambient Ambient::widened_to(const Element& x) const {
    if (kind_ != AmbientKind::Integers) return *this;
    std::int64_t m = x[0] == INT64_MIN ? INT64_MAX : (x[0] < 0 ? -x[0] : x[0]);
    return m > window_ ? integers(m) : *this;
}

Rational Ambient::mult_value(const Element& x) const {
    if (kind_ != AmbientKind::Multiplicative) throw Error(ErrorKind::UnsupportedOperation, "not a multiplicative ambient");
    Rational v(1);
    for (std::size_t i = 0; i < dimension_; ++i) v *= acw::pow(Rational(primes_[i]), static_cast<long>(x[i]));
    return v;
}

std::string Ambient::describe() const {
    switch (kind_) {
        case AmbientKind::Integers: return "Z[-" + std::to_string(window_) + "," + std::to_string(window_) + "]";
        case AmbientKind::Cyclic: return "Z/" + std::to_string(modulus_);
        case AmbientKind::Lattice: return "Z^" + std::to_string(dimension_);
        case AmbientKind::Multiplicative: {
            std::string s = "Q+<";
            for (std::size_t i = 0; i < primes_.size(); ++i) s += (i ? "," : "") + std::to_string(primes_[i]);
            return s + ">";
        }
    }
    return "?";
}

FiniteSet::FiniteSet(Ambient ambient, std::vector<Element> elements) : ambient_(std::move(ambient)) {
    for (auto& e : elements) {
        e = ambient_.reduce(std::move(e));
        if (!ambient_.contains(e))
            throw Error(ErrorKind::InvalidArgument, "element " + element_to_string(e) + " outside " + ambient_.describe());
    }
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    elements_ = std::move(elements);
}

FiniteSet FiniteSet::integers(const std::vector<std::int64_t>& xs) {
    std::int64_t w = 1;
    std::vector<Element> els;
    els.reserve(xs.size());
    for (auto x : xs) {
        if (x == INT64_MIN) throw Error(ErrorKind::Overflow, "element out of range");
        w = std::max(w, x < 0 ? -x : x);
        els.push_back(element(x));
    }
    return FiniteSet(Ambient::integers(w), std::move(els));
}

FiniteSet FiniteSet::cyclic(std::int64_t n, const std::vector<std::int64_t>& xs) {
    std::vector<Element> els;
    els.reserve(xs.size());
    for (auto x : xs) els.push_back(element(x));
    return FiniteSet(Ambient::cyclic(n), std::move(els));
}

FiniteSet FiniteSet::whole(const Ambient& ambient) {
    std::vector<Element> els;
    if (ambient.kind() == AmbientKind::Cyclic) {
        for (std::int64_t x = 0; x < ambient.modulus(); ++x) els.push_back(element(x));
    } else if (ambient.kind() == AmbientKind::Integers) {
        for (std::int64_t x = -ambient.window(); x <= ambient.window(); ++x) els.push_back(element(x));
    } else {
        throw Error(ErrorKind::UnsupportedOperation, "whole group of an infinite ambient");
    }
    return FiniteSet(ambient, std::move(els));
}

bool FiniteSet::contains(const Element& x) const {
    return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::vector<std::int64_t> FiniteSet::scalars() const {
    if (!ambient_.one_dimensional()) throw Error(ErrorKind::UnsupportedOperation, "scalars() on a multi-dimensional set");
    std::vector<std::int64_t> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.push_back(e[0]);
    return out;
}

FiniteSet FiniteSet::negated() const {
    std::vector<Element> els;
    els.reserve(elements_.size());
    for (const auto& e : elements_) els.push_back(ambient_.neg(e));
    return FiniteSet(ambient_, std::move(els));
}

FiniteSet FiniteSet::translated(const Element& t) const {
    std::vector<Element> els;
    els.reserve(elements_.size());
    Ambient amb = ambient_;
    for (const auto& e : elements_) {
        els.push_back(ambient_.add(e, t));
        amb = amb.widened_to(els.back());
    }
    return FiniteSet(amb, std::move(els));
}

FiniteSet FiniteSet::with_ambient(const Ambient& ambient) const {
    require_same_group(ambient_, ambient, "with_ambient");
    return FiniteSet(ambient, elements_);
}

bool FiniteSet::canonical_less(const FiniteSet& other) const noexcept {
    if (size() != other.size()) return size() < other.size();
    return elements_ < other.elements_;
}

namespace {

Ambient wider(const Ambient& a, const Ambient& b) {
    if (a.kind() == AmbientKind::Integers) return a.window() >= b.window() ? a : b;
    return a;
}

}  // namespace

FiniteSet set_union(const FiniteSet& a, const FiniteSet& b) {
    require_same_group(a.ambient(), b.ambient(), "union");
    std::vector<Element> out;
    std::set_union(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                   std::back_inserter(out));
    return FiniteSet(wider(a.ambient(), b.ambient()), std::move(out));
}

FiniteSet set_intersection(const FiniteSet& a, const FiniteSet& b) {
    require_same_group(a.ambient(), b.ambient(), "intersection");
    std::vector<Element> out;
    std::set_intersection(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                          std::back_inserter(out));
    return FiniteSet(wider(a.ambient(), b.ambient()), std::move(out));
}

FiniteSet set_minus(const FiniteSet& a, const FiniteSet& b) {
    require_same_group(a.ambient(), b.ambient(), "difference of sets");
    std::vector<Element> out;
    std::set_difference(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                        std::back_inserter(out));
    return FiniteSet(a.ambient(), std::move(out));
}

bool is_subset(const FiniteSet& a, const FiniteSet& b) {
    require_same_group(a.ambient(), b.ambient(), "subset test");
    return std::includes(b.elements().begin(), b.elements().end(), a.elements().begin(), a.elements().end());
}

std::string element_to_string(const Element& x) {
    if (x.size() == 1) return std::to_string(x[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
    return s + ")";
}

std::string set_to_string(const FiniteSet& a) {
    std::string s = "{";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + element_to_string(a.elements()[i]);
    return s + "}";
}

}  // namespace acw
