#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>

#include "acw/control.hpp"
#include "acw/convolution.hpp"
#include "acw/error.hpp"
#include "acw/harness.hpp"
#include "harness_internal.hpp"

namespace acw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Rational ratio_of(const BigInt& num, const BigInt& den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

bool better(const ScoredSet& x, const ScoredSet& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.set.canonical_less(y.set);
}

void archive_insert(std::vector<ScoredSet>& archive, const ScoredSet& s, std::size_t cap) {
    for (const auto& e : archive)
        if (e.set == s.set) return;
    auto pos = std::lower_bound(archive.begin(), archive.end(), s, better);
    if (static_cast<std::size_t>(pos - archive.begin()) >= cap) return;
    archive.insert(pos, s);
    if (archive.size() > cap) archive.pop_back();
}

struct Universe {
    Ambient ambient;
    std::vector<std::int64_t> points;

    FiniteSet make(const std::vector<std::int64_t>& xs) const {
        if (ambient.kind() == AmbientKind::Cyclic) return FiniteSet::cyclic(ambient.modulus(), xs);
        return FiniteSet::integers(xs);
    }
};

std::vector<std::int64_t> random_pick(const Universe& u, std::int64_t m, SplitMix64& rng) {
    auto pool = u.points;
    for (std::int64_t i = 0; i < m; ++i) {
        auto j = static_cast<std::size_t>(i) + rng.below(pool.size() - static_cast<std::size_t>(i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(m));
    std::sort(pool.begin(), pool.end());
    return pool;
}

struct RestartResult {
    std::vector<double> trajectory;
    std::vector<ScoredSet> archive;
    FiniteSet last;
    double last_score = 0;
};

RestartResult climb(Objective objective, const Universe& u, std::vector<std::int64_t> current, std::int64_t steps,
                    SplitMix64 rng, const SearchOptions& opts) {
    std::map<std::vector<std::int64_t>, ScoredSet> memo;
    auto eval = [&](const std::vector<std::int64_t>& xs) -> const ScoredSet& {
        auto it = memo.find(xs);
        if (it == memo.end()) it = memo.emplace(xs, score_set(objective, u.make(xs), opts.exhaustive_limit)).first;
        return it->second;
    };

    RestartResult out;
    ScoredSet best = eval(current);
    archive_insert(out.archive, best, opts.archive_size);
    out.trajectory.push_back(best.score);
    for (std::int64_t step = 1; step < steps; ++step) {
        // swap one member for one non-member
        std::vector<std::int64_t> outside;
        std::set_difference(u.points.begin(), u.points.end(), current.begin(), current.end(), std::back_inserter(outside));
        auto next = current;
        next[rng.below(next.size())] = outside[rng.below(outside.size())];
        std::sort(next.begin(), next.end());
        const ScoredSet& cand = eval(next);
        archive_insert(out.archive, cand, opts.archive_size);
        if (cand.score >= best.score) {
            current = std::move(next);
            best = cand;
            out.trajectory.push_back(best.score);
        }
    }
    out.last = best.set;
    out.last_score = best.score;
    return out;
}

}  // namespace

std::string to_string(Objective objective) {
    switch (objective) {
        case Objective::EnergyVsControl: return "energy_vs_control";
        case Objective::WeakVsFullControl: return "weak_vs_full_control";
        case Objective::DoublingVsControl: return "doubling_vs_control";
    }
    return "?";
}

Objective parse_objective(const std::string& name) {
    for (auto o : {Objective::EnergyVsControl, Objective::WeakVsFullControl, Objective::DoublingVsControl})
        if (to_string(o) == name) return o;
    throw Error(ErrorKind::UnknownSpec, "unknown objective '" + name + "'");
}

ScoredSet score_set(Objective objective, const FiniteSet& a, std::int64_t exhaustive_limit) {
    if (a.empty()) throw Error(ErrorKind::EmptySet, "cannot score the empty set");
    ScoredSet s;
    s.set = a;
    auto k = best_control(a, exhaustive_limit);
    s.kappa = k.value;
    s.kappa_mode = k.mode;
    s.detail["kappa"] = k.value;
    const BigInt n = static_cast<long>(a.size());
    const bool degenerate = k.value == 1;
    const double log_k = to_double(k.value) > 0 ? log_of(k.value) : 0.0;
    switch (objective) {
        case Objective::EnergyVsControl: {
            const Rational tau = ratio_of(energy(a), n * n * n);
            s.detail["tau"] = tau;
            if (degenerate) {
                s.score = kNegInf;
            } else {
                s.exponent = log_of(tau) / log_k;
                s.score = -*s.exponent;
            }
            break;
        }
        case Objective::WeakVsFullControl: {
            const auto weak = weak_control(a);
            s.detail["kappa_weak"] = weak.implied_kappa_lower;
            s.score = degenerate ? kNegInf : log_of(k.value) - log_of(weak.implied_kappa_lower);
            break;
        }
        case Objective::DoublingVsControl: {
            const Rational big_k = ratio_of(BigInt(static_cast<long>(set_algebra(a, a, SetOp::Difference).size())), n);
            s.detail["K"] = big_k;
            if (degenerate) {
                s.score = kNegInf;
            } else {
                s.exponent = log_of(big_k) / -log_k;
                s.score = -*s.exponent;
            }
            break;
        }
    }
    return s;
}

SearchState search_extremal(Objective objective, const Ambient& ambient, std::int64_t iterations, std::uint64_t seed,
                            const SearchOptions& opts) {
    if (iterations <= 0) throw Error(ErrorKind::InvalidArgument, "iterations must be positive");
    if (opts.restart_every <= 0) throw Error(ErrorKind::InvalidArgument, "restart_every must be positive");
    Universe u{ambient, {}};
    if (ambient.kind() == AmbientKind::Cyclic) {
        for (std::int64_t x = 0; x < ambient.modulus(); ++x) u.points.push_back(x);
    } else if (ambient.kind() == AmbientKind::Integers) {
        for (std::int64_t x = 0; x < opts.universe; ++x) u.points.push_back(x);
    } else {
        throw Error(ErrorKind::UnsupportedOperation, "search needs Z or Z/n");
    }
    const auto usize = static_cast<std::int64_t>(u.points.size());
    std::int64_t m = opts.set_size > 0 ? opts.set_size : std::max<std::int64_t>(2, usize / 3);
    std::vector<std::int64_t> start;
    if (opts.start) {
        if (!opts.start->ambient().same_group(ambient) && ambient.kind() != AmbientKind::Integers)
            throw Error(ErrorKind::AmbientMismatch, "start set lives in another ambient");
        start = opts.start->scalars();
        for (auto x : start)
            if (!std::binary_search(u.points.begin(), u.points.end(), x))
                throw Error(ErrorKind::InvalidArgument, "start set leaves the search universe");
        m = static_cast<std::int64_t>(start.size());
    }
    if (m < 1 || m >= usize) throw Error(ErrorKind::InvalidArgument, "universe too small for the set size");

    const std::int64_t restarts = (iterations + opts.restart_every - 1) / opts.restart_every;
    std::vector<std::uint64_t> seeds;
    SplitMix64 root(seed);
    for (std::int64_t r = 0; r < restarts; ++r) seeds.push_back(root.next());

    std::vector<RestartResult> results(static_cast<std::size_t>(restarts));
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t r = 0; r < restarts; ++r) {
        try {
            SplitMix64 rng(seeds[static_cast<std::size_t>(r)]);
            auto init = (r == 0 && opts.start) ? start : random_pick(u, m, rng);
            const std::int64_t steps = std::min(opts.restart_every, iterations - r * opts.restart_every);
            results[static_cast<std::size_t>(r)] = climb(objective, u, init, steps, rng.split(), opts);
        } catch (...) {
#pragma omp critical(acw_search_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    SearchState st{ambient, objective, results.back().last, results.back().last_score, iterations, seed, {}, {}};
    for (auto& r : results) {
        for (const auto& s : r.archive) archive_insert(st.archive, s, opts.archive_size);
        st.trajectories.push_back(std::move(r.trajectory));
    }
    return st;
}

}  // namespace acw
