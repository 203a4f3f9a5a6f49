#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>

#include "acw/convolution.hpp"
#include "acw/error.hpp"
#include "acw/harness.hpp"
#include "harness_internal.hpp"

namespace acw {

namespace {

const std::vector<std::string> kExactSpecs{"cs_energy", "hol", "hol_interp", "innbound", "holderbound", "remove"};
const std::vector<std::string> kFittedSpecs{"auxcont", "diffapp", "sumapp", "diffbound", "key", "sp1", "convcont"};

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 r(seed ^ (index * 0xd1342543de82ef95ull));
    return r.next();
}

// m uniform elements from the hull of A (integers) or the whole group (cyclic).
FiniteSet companion(const FiniteSet& a, std::uint64_t seed) {
    SplitMix64 r(seed);
    if (a.ambient().kind() == AmbientKind::Cyclic) {
        const auto n = a.ambient().modulus();
        const auto m = 1 + static_cast<std::int64_t>(r.below(static_cast<std::uint64_t>(n)));
        return random_subset(a.ambient(), m, r.next());
    }
    auto xs = a.scalars();
    const std::int64_t lo = xs.front(), width = xs.back() - xs.front() + 1;
    const auto m = 1 + static_cast<std::int64_t>(r.below(static_cast<std::uint64_t>(std::min<std::int64_t>(width, 64))));
    auto pick = random_subset(Ambient::cyclic(width), m, r.next()).scalars();
    for (auto& v : pick) v += lo;
    return FiniteSet::integers(pick);
}

struct Context {
    Instance instance;
    bool exhaustive = false;  // kappa computable exactly
    bool positive = false;
    bool convex = false;
};

Context make_context(const FamilySpec& spec, std::size_t index, std::uint64_t seed, std::int64_t limit) {
    Context c;
    FiniteSet a = generate(spec);
    if (a.empty()) throw Error(ErrorKind::EmptySet, "corpus member " + std::to_string(index) + " is empty");
    const bool one_dim = a.ambient().kind() == AmbientKind::Cyclic || a.ambient().kind() == AmbientKind::Integers;
    c.instance.id = "#" + std::to_string(index) + " " + spec.describe();
    c.instance.description = a.ambient().describe() + ", |A|=" + std::to_string(a.size());
    c.instance.family = spec;
    c.instance.seed = mix(seed, index);
    c.exhaustive = a.ambient().kind() == AmbientKind::Cyclic && a.ambient().modulus() <= limit;
    if (one_dim) {
        auto xs = a.scalars();
        c.positive = a.ambient().kind() == AmbientKind::Integers && xs.front() > 0;
        c.convex = is_convex(a);
        SplitMix64 r(c.instance.seed);
        c.instance.sets.emplace("B", companion(a, r.next()));
        c.instance.sets.emplace("S", companion(a, r.next()));
        if (a.size() >= 2) {
            // random split with both halves nonempty
            std::vector<Element> p1, p2;
            for (const auto& x : a.elements()) (r.below(2) ? p1 : p2).push_back(x);
            if (p1.empty()) { p1.push_back(p2.back()); p2.pop_back(); }
            if (p2.empty()) { p2.push_back(p1.back()); p1.pop_back(); }
            c.instance.sets.emplace("A1", FiniteSet(a.ambient(), p1));
            c.instance.sets.emplace("A2", FiniteSet(a.ambient(), p2));
        }
    }
    c.instance.sets.emplace("A", std::move(a));
    return c;
}

bool applicable(const std::string& id, const Context& c) {
    const auto& s = c.instance.sets;
    if (!s.count("B")) return id == "cs_energy";
    if (id == "holderbound") return c.exhaustive;
    if (id == "remove") return c.exhaustive && s.count("A1");
    if (id == "sp1") return c.positive;
    if (id == "convcont") return c.convex;
    return true;
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
    std::exception_ptr error;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(acw_suite_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) sx += xs[i], sy += ys[i];
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxx == 0 ? 0.0 : sxy / sxx;
}

struct TrendBand {
    std::string id;
    std::optional<double> lo, hi;
    std::string source;
};

const std::vector<TrendBand>& trend_bands() {
    static const std::vector<TrendBand> bands{
        {"diffset_trend", 1.55, std::nullopt, "difference-set exponent 6681/4175 minus 0.05 slack"},
        {"energy_trend", 2.0, 2.60, "floor 2 (E >= |A|^2); ceiling 123/50 plus 0.14 slack"},
        {"kappa_trend", -0.25, 0.25, "convex control kappa ~ |A|^-1, so kappa|A| is flat; +-0.25"},
        {"sumset_trend", 30.0 / 19 - 0.15, std::nullopt, "sumset exponent 30/19 minus the default 0.15 band"},
    };
    return bands;
}

std::vector<TrendRow> trend_rows(const std::vector<FamilySpec>& corpus) {
    std::vector<std::optional<TrendRow>> slots(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) {
        FiniteSet a = generate(corpus[i]);
        if (a.empty() || !is_convex(a)) return;
        auto st = stats(a);
        TrendRow row;
        row.family = to_string(corpus[i].family);
        row.param = corpus[i].n;
        row.size = st.size;
        row.energy = st.energy;
        row.sumset = st.sumset_size;
        row.diffset = st.diffset_size;
        row.kappa_lb = control_candidates(a).value;
        slots[i] = std::move(row);
    });
    std::vector<TrendRow> rows;
    for (std::size_t i = 0; i < slots.size(); ++i)
        if (slots[i]) rows.push_back(std::move(*slots[i]));
    // group by family, then size
    std::vector<std::size_t> idx(rows.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        if (rows[x].family != rows[y].family) return rows[x].family < rows[y].family;
        return rows[x].size < rows[y].size;
    });
    std::vector<TrendRow> sorted;
    for (auto i : idx) sorted.push_back(rows[i]);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const auto &p = sorted[i - 1], &c = sorted[i];
        if (p.family != c.family || p.size == c.size) continue;
        const double dx = std::log(static_cast<double>(c.size)) - std::log(static_cast<double>(p.size));
        sorted[i].slope = (std::log(c.energy.get_d()) - std::log(p.energy.get_d())) / dx;
    }
    return sorted;
}

std::vector<TrendReport> trend_reports(const std::vector<TrendRow>& rows) {
    std::vector<TrendReport> out;
    std::size_t begin = 0;
    while (begin < rows.size()) {
        std::size_t end = begin;
        while (end < rows.size() && rows[end].family == rows[begin].family) ++end;
        if (end - begin >= 2) {
            for (const auto& band : trend_bands()) {
                TrendReport t;
                t.spec_id = band.id;
                t.family = rows[begin].family;
                for (std::size_t i = begin; i < end; ++i) {
                    const auto& r = rows[i];
                    double v = 0;
                    if (band.id == "energy_trend") v = std::log(r.energy.get_d());
                    else if (band.id == "kappa_trend") v = std::log(to_double(r.kappa_lb) * static_cast<double>(r.size));
                    else if (band.id == "diffset_trend") v = std::log(static_cast<double>(r.diffset));
                    else v = std::log(static_cast<double>(r.sumset));
                    t.log_sizes.push_back(std::log(static_cast<double>(r.size)));
                    t.log_values.push_back(v);
                }
                t.slope = fit_slope(t.log_sizes, t.log_values);
                t.band_lo = band.lo;
                t.band_hi = band.hi;
                t.band_source = band.source;
                t.pass = (!band.lo || t.slope >= *band.lo) && (!band.hi || t.slope <= *band.hi);
                out.push_back(std::move(t));
            }
        }
        begin = end;
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.spec_id < y.spec_id; });
    return out;
}

}  // namespace

std::string to_string(SuiteKind kind) {
    switch (kind) {
        case SuiteKind::Exact: return "exact";
        case SuiteKind::Fitted: return "fitted";
        case SuiteKind::Trend: return "trend";
        case SuiteKind::All: return "all";
    }
    return "?";
}

SuiteKind parse_suite(const std::string& name) {
    for (auto k : {SuiteKind::Exact, SuiteKind::Fitted, SuiteKind::Trend, SuiteKind::All})
        if (to_string(k) == name) return k;
    throw Error(ErrorKind::UnknownSpec, "unknown suite '" + name + "'");
}

bool ReportBundle::all_pass() const {
    for (const auto& r : reports)
        if (r.pass && !*r.pass) return false;
    for (const auto& t : trends)
        if (t.pass && !*t.pass) return false;
    return true;
}

ReportBundle run_suite(SuiteKind kind, const std::vector<FamilySpec>& corpus, std::uint64_t seed,
                       const SuiteOptions& opts) {
    ReportBundle bundle;
    bundle.suite = to_string(kind);
    bundle.seed = seed;
    if (corpus.empty()) return bundle;

    const bool want_exact = kind == SuiteKind::Exact || kind == SuiteKind::All;
    const bool want_fitted = kind == SuiteKind::Fitted || kind == SuiteKind::All;
    const bool want_trend = kind == SuiteKind::Trend || kind == SuiteKind::All;

    if (want_exact || want_fitted) {
        std::vector<Context> ctx(corpus.size());
        parallel_for(corpus.size(), [&](std::size_t i) { ctx[i] = make_context(corpus[i], i, seed, opts.exhaustive_limit); });

        std::vector<std::string> ids;
        if (want_exact) ids.insert(ids.end(), kExactSpecs.begin(), kExactSpecs.end());
        if (want_fitted) ids.insert(ids.end(), kFittedSpecs.begin(), kFittedSpecs.end());
        std::sort(ids.begin(), ids.end());

        std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (spec, instance)
        for (std::size_t s = 0; s < ids.size(); ++s)
            for (std::size_t i = 0; i < ctx.size(); ++i)
                if (applicable(ids[s], ctx[i])) jobs.emplace_back(s, i);

        bundle.reports.resize(jobs.size());
        parallel_for(jobs.size(), [&](std::size_t j) {
            auto [s, i] = jobs[j];
            InequalityReport r = eval_inequality(ids[s], ctx[i].instance, opts.exhaustive_limit);
            r.instance_index = i;
            bundle.reports[j] = std::move(r);
        });
    }

    if (want_trend) {
        bundle.rows = trend_rows(corpus);
        bundle.trends = trend_reports(bundle.rows);
    }

    if (opts.abort_on_exact_failure)
        for (const auto& r : bundle.reports)
            if (r.mode == AssertionMode::Exact && r.pass && !*r.pass)
                throw Error(ErrorKind::ExactFailure, r.spec_id + " fails on " + r.instance_id + ": lhs " +
                                                         r.lhs.decimal() + " > rhs " + r.rhs.decimal());
    return bundle;
}

std::vector<FamilySpec> random_cyclic_corpus(std::size_t count, const std::vector<std::int64_t>& moduli,
                                             std::uint64_t seed) {
    if (count > 0 && moduli.empty()) throw Error(ErrorKind::InvalidArgument, "no moduli given");
    SplitMix64 r(seed);
    std::vector<FamilySpec> out;
    for (std::size_t i = 0; i < count; ++i) {
        const auto n = moduli[i % moduli.size()];
        const auto m = 1 + static_cast<std::int64_t>(r.below(static_cast<std::uint64_t>(n)));
        out.push_back(FamilySpec::random_subset(n, m, r.next(), true));
    }
    return out;
}

std::vector<FamilySpec> squares_corpus(const std::vector<std::int64_t>& sizes) {
    std::vector<FamilySpec> out;
    for (auto n : sizes) out.push_back(FamilySpec::squares(n));
    return out;
}

std::vector<FamilySpec> fitted_corpus(std::uint64_t seed) {
    SplitMix64 r(seed);
    return {
        FamilySpec::interval(32, 1),
        FamilySpec::ap(3, 5, 24),
        FamilySpec::squares(24),
        FamilySpec::squares(48),
        FamilySpec::perturbed_convex(32, r.next()),
        FamilySpec::geometric(1, 2, 12),
        FamilySpec::random_subset(16, 6, r.next(), true),
        FamilySpec::random_subset(16, 10, r.next(), true),
        FamilySpec::random_subset(96, 24, r.next(), false),
    };
}

}  // namespace acw
