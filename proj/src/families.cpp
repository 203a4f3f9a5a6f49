#include "acw/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_set>

#include <omp.h>

#include "acw/error.hpp"

namespace acw {

namespace {

const std::vector<std::pair<Family, std::string>> kNames = {
    {Family::Interval, "interval"},           {Family::Ap, "ap"},
    {Family::Geometric, "geometric"},         {Family::Squares, "squares"},
    {Family::ConvexFromGaps, "convex_from_gaps"}, {Family::RandomSubset, "random_subset"},
    {Family::MazurSphere, "mazur_sphere"},    {Family::PerturbedConvex, "perturbed_convex"},
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

std::int64_t isqrt(std::int64_t v) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

void sphere_dfs(int d, int pos, std::int64_t remaining, Element& cur, std::vector<Element>& out) {
    if (pos == d - 1) {
        std::int64_t r = isqrt(remaining);
        if (r * r != remaining) return;
        cur[pos] = r;
        out.push_back(cur);
        if (r != 0) {
            cur[pos] = -r;
            out.push_back(cur);
        }
        return;
    }
    std::int64_t bound = isqrt(remaining);
    for (std::int64_t x = -bound; x <= bound; ++x) {
        cur[pos] = x;
        sphere_dfs(d, pos + 1, remaining - x * x, cur, out);
    }
}

std::vector<Element> mazur(int d, std::int64_t r2) {
    require(d >= 1 && d <= 16, "mazur_sphere dimension must be in [1, 16]");
    require(r2 >= 0 && r2 <= (std::int64_t{1} << 40), "mazur_sphere radius_sq must be in [0, 2^40]");
    std::int64_t bound = isqrt(r2);
    std::int64_t firsts = 2 * bound + 1;
    std::vector<std::vector<Element>> parts(static_cast<std::size_t>(firsts));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < firsts; ++i) {
        std::int64_t x = i - bound;
        Element cur(static_cast<std::size_t>(d), 0);
        cur[0] = x;
        auto& out = parts[static_cast<std::size_t>(i)];
        if (d == 1) {
            if (x * x == r2) out.push_back(cur);
        } else {
            sphere_dfs(d, 1, r2 - x * x, cur, out);
        }
    }
    std::vector<Element> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

// Floyd's sampling of m distinct values from [0, size).
std::vector<std::int64_t> floyd_sample(std::int64_t size, std::int64_t m, std::uint64_t seed) {
    require(m >= 0 && m <= size, "random_subset: m=" + std::to_string(m) + " exceeds universe size " + std::to_string(size));
    SplitMix64 rng(seed);
    std::unordered_set<std::int64_t> chosen;
    for (std::int64_t j = size - m; j < size; ++j) {
        auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::int64_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

template <class T>
std::int64_t count_distinct(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::int64_t>(std::unique(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::string to_string(Family family) {
    for (const auto& [f, name] : kNames)
        if (f == family) return name;
    return "?";
}

Family parse_family(const std::string& name) {
    for (const auto& [f, n] : kNames)
        if (n == name) return f;
    throw Error(ErrorKind::UnknownSpec, "unknown family '" + name + "'");
}

FamilySpec FamilySpec::interval(std::int64_t n, std::int64_t start) {
    FamilySpec s;
    s.family = Family::Interval;
    s.n = n;
    s.start = start;
    return s;
}

FamilySpec FamilySpec::ap(std::int64_t start, std::int64_t step, std::int64_t n) {
    FamilySpec s;
    s.family = Family::Ap;
    s.start = start;
    s.step = step;
    s.n = n;
    return s;
}

FamilySpec FamilySpec::geometric(std::int64_t start, std::int64_t ratio, std::int64_t n) {
    FamilySpec s;
    s.family = Family::Geometric;
    s.start = start;
    s.ratio = ratio;
    s.n = n;
    return s;
}

FamilySpec FamilySpec::squares(std::int64_t n) {
    FamilySpec s;
    s.family = Family::Squares;
    s.n = n;
    return s;
}

FamilySpec FamilySpec::convex_from_gaps(std::vector<std::int64_t> gaps, std::int64_t start) {
    FamilySpec s;
    s.family = Family::ConvexFromGaps;
    s.gaps = std::move(gaps);
    s.start = start;
    s.n = static_cast<std::int64_t>(s.gaps.size()) + 1;
    return s;
}

FamilySpec FamilySpec::random_subset(std::int64_t universe, std::int64_t m, std::uint64_t seed, bool cyclic) {
    FamilySpec s;
    s.family = Family::RandomSubset;
    s.universe = universe;
    s.n = m;
    s.seed = seed;
    s.cyclic = cyclic;
    return s;
}

FamilySpec FamilySpec::mazur_sphere(int dimension, std::int64_t radius_sq) {
    FamilySpec s;
    s.family = Family::MazurSphere;
    s.dimension = dimension;
    s.radius_sq = radius_sq;
    return s;
}

FamilySpec FamilySpec::perturbed_convex(std::int64_t n, std::uint64_t seed) {
    FamilySpec s;
    s.family = Family::PerturbedConvex;
    s.n = n;
    s.seed = seed;
    return s;
}

std::string FamilySpec::describe() const {
    std::string out = to_string(family) + "(";
    switch (family) {
        case Family::Interval: out += "n=" + std::to_string(n) + ",start=" + std::to_string(start); break;
        case Family::Ap:
            out += "start=" + std::to_string(start) + ",step=" + std::to_string(step) + ",n=" + std::to_string(n);
            break;
        case Family::Geometric:
            out += "start=" + std::to_string(start) + ",ratio=" + std::to_string(ratio) + ",n=" + std::to_string(n);
            break;
        case Family::Squares: out += "n=" + std::to_string(n); break;
        case Family::ConvexFromGaps: {
            out += "gaps=[";
            for (std::size_t i = 0; i < gaps.size(); ++i) out += (i ? "," : "") + std::to_string(gaps[i]);
            out += "],start=" + std::to_string(start);
            break;
        }
        case Family::RandomSubset:
            out += std::string(cyclic ? "Z/" : "[0,") + std::to_string(universe) + (cyclic ? "" : ")") +
                   ",m=" + std::to_string(n) + ",seed=" + std::to_string(seed);
            break;
        case Family::MazurSphere:
            out += "d=" + std::to_string(dimension) + ",r2=" + std::to_string(radius_sq);
            break;
        case Family::PerturbedConvex: out += "n=" + std::to_string(n) + ",seed=" + std::to_string(seed); break;
    }
    return out + ")";
}

FiniteSet generate(const FamilySpec& s) {
    std::vector<std::int64_t> xs;
    switch (s.family) {
        case Family::Interval:
        case Family::Ap: {
            require(s.n >= 0, "length must be nonnegative");
            std::int64_t step = s.family == Family::Interval ? 1 : s.step;
            require(step != 0 || s.n <= 1, "ap step must be nonzero");
            for (std::int64_t i = 0; i < s.n; ++i) xs.push_back(checked_add(s.start, checked_mul(i, step)));
            break;
        }
        case Family::Geometric: {
            require(s.n >= 0 && s.start != 0 && s.ratio >= 2, "geometric needs start != 0 and ratio >= 2");
            std::int64_t v = s.start;
            for (std::int64_t i = 0; i < s.n; ++i) {
                xs.push_back(v);
                if (i + 1 < s.n) v = checked_mul(v, s.ratio);
            }
            break;
        }
        case Family::Squares:
            require(s.n >= 0, "squares needs n >= 0");
            for (std::int64_t i = 1; i <= s.n; ++i) xs.push_back(checked_mul(i, i));
            break;
        case Family::ConvexFromGaps: {
            for (std::size_t i = 0; i < s.gaps.size(); ++i) {
                require(s.gaps[i] > 0, "gaps must be positive");
                require(i == 0 || s.gaps[i] > s.gaps[i - 1], "gaps must be strictly increasing");
            }
            std::int64_t v = s.start;
            xs.push_back(v);
            for (std::int64_t g : s.gaps) xs.push_back(v = checked_add(v, g));
            break;
        }
        case Family::RandomSubset: {
            require(s.universe >= 1, "random_subset needs a universe of size >= 1");
            if (s.cyclic) return random_subset(Ambient::cyclic(s.universe), s.n, s.seed);
            xs = floyd_sample(s.universe, s.n, s.seed);
            break;
        }
        case Family::MazurSphere: {
            auto pts = mazur(s.dimension, s.radius_sq);
            return FiniteSet(Ambient::lattice(s.dimension), std::move(pts));
        }
        case Family::PerturbedConvex: {
            require(s.n >= 0 && s.n <= 1000000, "perturbed_convex needs 0 <= n <= 10^6");
            SplitMix64 rng(s.seed);
            for (std::int64_t i = 1; i <= s.n; ++i)
                xs.push_back(4 * i * i + static_cast<std::int64_t>(rng.below(3)));
            break;
        }
    }
    FiniteSet out = FiniteSet::integers(xs);
    if ((s.family == Family::ConvexFromGaps || s.family == Family::PerturbedConvex || s.family == Family::Squares) &&
        !is_convex(out))
        throw Error(ErrorKind::Internal, s.describe() + " produced a non-convex set");
    return out;
}

FiniteSet random_subset(const Ambient& universe, std::int64_t m, std::uint64_t seed) {
    std::int64_t size = 0, offset = 0;
    switch (universe.kind()) {
        case AmbientKind::Cyclic: size = universe.modulus(); break;
        case AmbientKind::Integers:
            size = 2 * universe.window() + 1;
            offset = -universe.window();
            break;
        default: throw Error(ErrorKind::UnsupportedOperation, "random_subset needs a finite one-dimensional universe");
    }
    std::vector<Element> elems;
    for (std::int64_t v : floyd_sample(size, m, seed)) elems.push_back(element(v + offset));
    return FiniteSet(universe, std::move(elems));
}

bool is_convex(const FiniteSet& a) {
    if (!a.ambient().one_dimensional() || a.ambient().kind() == AmbientKind::Cyclic) return false;
    auto xs = a.scalars();
    for (std::size_t i = 2; i < xs.size(); ++i)
        if (!(xs[i] - xs[i - 1] > xs[i - 1] - xs[i - 2])) return false;
    return true;
}

MultEmbedding mult_embed(const FiniteSet& a) {
    if (a.ambient().kind() != AmbientKind::Integers)
        throw Error(ErrorKind::InvalidArgument, "mult_embed needs a set of positive integers");
    auto xs = a.scalars();
    std::vector<std::map<std::int64_t, std::int64_t>> exps;
    std::map<std::int64_t, int> primes;
    for (std::int64_t x : xs) {
        if (x < 1) throw Error(ErrorKind::InvalidArgument, "mult_embed: nonpositive element " + std::to_string(x));
        std::map<std::int64_t, std::int64_t> e;
        for (const auto& [p, k] : factor(BigInt(static_cast<long>(x)))) {
            e[p.get_si()] = static_cast<std::int64_t>(k);
            primes[p.get_si()] = 0;
        }
        exps.push_back(std::move(e));
    }
    MultEmbedding out;
    for (auto& [p, idx] : primes) {
        idx = static_cast<int>(out.primes.size());
        out.primes.push_back(p);
    }
    std::size_t d = std::max<std::size_t>(1, out.primes.size());
    std::vector<Element> elems;
    for (const auto& e : exps) {
        Element v(d, 0);
        for (const auto& [p, k] : e) v[static_cast<std::size_t>(primes[p])] = k;
        elems.push_back(std::move(v));
    }
    out.image = FiniteSet(Ambient::lattice(static_cast<int>(d)), std::move(elems));
    return out;
}

ExpanderStats expander_stats(const FiniteSet& a) {
    if (a.ambient().kind() != AmbientKind::Integers || a.empty())
        throw Error(ErrorKind::InvalidArgument, "expander_stats needs a nonempty set of positive integers");
    auto xs = a.scalars();
    if (xs.front() < 1) throw Error(ErrorKind::InvalidArgument, "expander_stats needs positive elements");
    using I = __int128;
    std::vector<I> sums, diffs;
    for (auto x : xs)
        for (auto y : xs) {
            sums.push_back(static_cast<I>(x) + y);
            if (x != y) diffs.push_back(static_cast<I>(x) - y);
        }
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
    std::sort(diffs.begin(), diffs.end());
    diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());

    ExpanderStats st;
    std::vector<I> buf;
    for (auto x : xs)
        for (I s : sums) buf.push_back(x * s);
    st.shifted_product = count_distinct(std::move(buf));
    buf.clear();
    for (auto x : xs)
        for (I s : diffs) buf.push_back(x * s);
    st.difference_product = count_distinct(std::move(buf));
    st.min_translate_product = std::numeric_limits<std::int64_t>::max();
    for (auto t : xs) {
        buf.clear();
        for (auto x : xs)
            for (auto y : xs) buf.push_back(static_cast<I>(x) * (static_cast<I>(y) + t));
        st.min_translate_product = std::min(st.min_translate_product, count_distinct(std::move(buf)));
    }
    buf.clear();
    std::vector<std::pair<std::int64_t, std::int64_t>> ratios;
    for (auto x : xs)
        for (auto y : xs) {
            buf.push_back(static_cast<I>(x) * y);
            std::int64_t g = gcd64(x, y);
            ratios.emplace_back(x / g, y / g);
        }
    st.product_set = count_distinct(std::move(buf));
    st.ratio_set = count_distinct(std::move(ratios));
    return st;
}

}  // namespace acw
