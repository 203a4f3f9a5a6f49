#include <doctest.h>

#include <cmath>
#include <random>

#include <omp.h>

#include "acw/control.hpp"
#include "acw/convolution.hpp"
#include "acw/error.hpp"
#include "acw/harness.hpp"
#include "oracles.hpp"

using namespace acw;

namespace {

Instance make(std::map<std::string, FiniteSet> sets) {
    Instance in;
    in.id = "t";
    in.sets = std::move(sets);
    return in;
}

std::map<Element, long> counts(const FiniteSet& a, const FiniteSet& b) {
    std::map<Element, long> m;
    for (const auto& x : a.elements())
        for (const auto& y : b.elements()) ++m[a.ambient().sub(x, y)];
    return m;
}

double lp(const std::map<Element, long>& f, double p) {
    double s = 0;
    for (const auto& [k, v] : f) s += std::pow(static_cast<double>(v), p);
    return std::pow(s, 1 / p);
}

}  // namespace

TEST_CASE("harness: catalog lookup") {
    CHECK(inequality_catalog().size() == 17);
    CHECK(find_spec("innbound").mode == AssertionMode::Exact);
    CHECK(find_spec("key").mode == AssertionMode::Fitted);
    CHECK(find_spec("energy_trend").mode == AssertionMode::Trend);
    CHECK_THROWS_AS(find_spec("nope"), Error);
    try {
        eval_inequality("nope", make({}));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownSpec);
    }
    try {
        eval_inequality("hol", make({{"A", FiniteSet::integers({0, 1})}}));
        FAIL("expected MissingInput");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingInput);
    }
}

TEST_CASE("harness: innbound on {0,1}") {
    auto s = FiniteSet::integers({0, 1});
    auto r = eval_inequality("innbound", make({{"A", s}, {"B", s}, {"S", s}}));
    // <1_A*1_B, 1_S> = 1 + 2, cube sums 1 + 8 + 1 = 10
    CHECK(r.lhs.exact_string() == "6561");
    CHECK(r.rhs.exact_string() == "25600");
    REQUIRE(r.implied_constant_exact);
    CHECK(*r.implied_constant_exact == Rational(6561, 25600));
    REQUIRE(r.pass);
    CHECK(*r.pass);
}

TEST_CASE("harness: Cauchy-Schwarz energy on a singleton is an equality") {
    auto r = eval_inequality("cs_energy", make({{"A", FiniteSet::integers({5})}}));
    CHECK(r.lhs.exact_string() == "1");
    CHECK(r.rhs.exact_string() == "1");
    CHECK(*r.pass);
}

TEST_CASE("harness: exact specs against brute force") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 40; ++t) {
        const std::int64_t n = 6 + static_cast<std::int64_t>(rng() % 10);
        auto a = oracle::random_cyclic(rng, n), b = oracle::random_cyclic(rng, n), s = oracle::random_cyclic(rng, n);
        if (a.empty() || b.empty() || s.empty()) continue;
        auto in = make({{"A", a}, {"B", b}, {"S", s}});

        auto cs = eval_inequality("cs_energy", in);
        CHECK(cs.lhs.exact_string() == std::to_string(oracle::energy_quadruples(a)));
        CHECK(*cs.pass);

        auto h = eval_inequality("hol", in);
        auto f = counts(a, b);
        CHECK(h.lhs.log_value == doctest::Approx(std::log(lp(f, 1.5))).epsilon(1e-9));
        CHECK(h.rhs.log_value == doctest::Approx(0.5 * std::log(lp(f, 3)) + 0.5 * std::log(lp(f, 1))).epsilon(1e-9));
        CHECK(*h.pass);

        CHECK(*eval_inequality("hol_interp", in).pass);
        CHECK(*eval_inequality("innbound", in).pass);

        auto hb = eval_inequality("holderbound", in);
        const double kappa = to_double(control_exhaustive_reference(a).value);
        CHECK(hb.rhs.log_value ==
              doctest::Approx(std::log(kappa) / 6 + 5.0 / 6 * std::log(double(a.size()) * double(s.size()))).epsilon(1e-9));
        CHECK(*hb.pass);
    }
}

TEST_CASE("harness: remove on {0,1} and {8,9} in Z_16") {
    auto a1 = FiniteSet::cyclic(16, {0, 1}), a2 = FiniteSet::cyclic(16, {8, 9});
    auto r = eval_inequality("remove", make({{"A1", a1}, {"A2", a2}}));
    const Rational k = control_exhaustive_reference(FiniteSet::cyclic(16, {0, 1, 8, 9})).value;
    const Rational k1 = control_exhaustive_reference(a1).value, k2 = control_exhaustive_reference(a2).value;
    CHECK(r.lhs.exact_string() == to_string(k));
    CHECK(r.rhs.exact_string() == to_string(Rational(k1 + k2)));
    CHECK(*r.pass == (k <= k1 + k2));
    CHECK(*r.pass);

    try {
        eval_inequality("remove", make({{"A1", a1}, {"A2", FiniteSet::cyclic(16, {1, 2})}}));
        FAIL("overlap accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PreconditionViolation);
    }
    try {
        eval_inequality("holderbound", make({{"A", FiniteSet::cyclic(40, {1})}, {"S", FiniteSet::cyclic(40, {2})}}));
        FAIL("large group accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PreconditionViolation);
    }
}

TEST_CASE("harness: fitted specs report without a verdict") {
    auto a = FiniteSet::integers({1, 4, 9, 16, 25, 36, 49, 64});
    for (const char* id : {"auxcont", "diffapp", "sumapp", "diffbound", "key", "sp1", "convcont"}) {
        auto r = eval_inequality(id, make({{"A", a}, {"B", FiniteSet::integers({0, 2, 3})}}));
        CHECK_MESSAGE(!r.pass.has_value(), id);
        CHECK(std::isfinite(r.lhs.log_value));
        CHECK(std::isfinite(r.rhs.log_value));
        CHECK(r.implied_constant > 0);
    }
    // diffapp: K = |A-A|/|A|
    auto r = eval_inequality("diffapp", make({{"A", a}}));
    const long dsize = static_cast<long>(set_algebra(a, a, SetOp::Difference).size());
    CHECK(r.note.find("K=" + to_string(Rational(dsize, 8))) != std::string::npos);
    try {
        eval_inequality("convcont", make({{"A", FiniteSet::integers({0, 1, 2})}}));
        FAIL("non-convex accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PreconditionViolation);
    }
}

TEST_CASE("harness: exact suite") {
    auto corpus = random_cyclic_corpus(60, {8, 16, 32}, 5);
    auto bundle = run_suite(SuiteKind::Exact, corpus, 9);
    CHECK(bundle.all_pass());
    std::size_t remove = 0, holder = 0;
    for (const auto& r : bundle.reports) {
        CHECK(r.mode == AssertionMode::Exact);
        REQUIRE(r.pass);
        CHECK(*r.pass);
        remove += r.spec_id == "remove";
        holder += r.spec_id == "holderbound";
    }
    CHECK(holder == 40);  // Z_8 and Z_16 members
    CHECK(remove > 0);
    // sorted by (spec, instance)
    for (std::size_t i = 1; i < bundle.reports.size(); ++i) {
        const auto &p = bundle.reports[i - 1], &c = bundle.reports[i];
        CHECK((p.spec_id < c.spec_id || (p.spec_id == c.spec_id && p.instance_index < c.instance_index)));
    }

    CHECK(run_suite(SuiteKind::All, {}, 1).empty());
}

TEST_CASE("harness: suite determinism across thread counts") {
    auto corpus = random_cyclic_corpus(30, {8, 16}, 2);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = emit_report(run_suite(SuiteKind::Exact, corpus, 4), ReportFormat::Json);
    const auto again = emit_report(run_suite(SuiteKind::Exact, corpus, 4), ReportFormat::Json);
    omp_set_num_threads(4);
    const auto four = emit_report(run_suite(SuiteKind::Exact, corpus, 4), ReportFormat::Json);
    omp_set_num_threads(saved);
    CHECK(one == again);
    CHECK(one == four);
    CHECK(one != emit_report(run_suite(SuiteKind::Exact, corpus, 5), ReportFormat::Json));
}

TEST_CASE("harness: fitted and trend suites") {
    auto fitted = run_suite(SuiteKind::Fitted, fitted_corpus(3), 3);
    CHECK(!fitted.reports.empty());
    for (const auto& r : fitted.reports) CHECK(!r.pass.has_value());

    auto trend = run_suite(SuiteKind::Trend, squares_corpus({16, 32, 64, 128}), 0);
    REQUIRE(trend.rows.size() == 4);
    CHECK(trend.trends.size() == 4);
    CHECK(!trend.rows[0].slope);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& row = trend.rows[i];
        if (row.size <= 64) CHECK(row.energy == BigInt(oracle::energy_quadruples(generate(FamilySpec::squares(row.param)))));
        if (i > 0) {
            const auto& p = trend.rows[i - 1];
            CHECK(*row.slope == doctest::Approx((std::log(row.energy.get_d()) - std::log(p.energy.get_d())) /
                                                std::log(double(row.size) / double(p.size))));
        }
    }
    for (const auto& t : trend.trends) CHECK(t.pass.has_value());

    const auto csv = emit_report(trend, ReportFormat::Csv);
    CHECK(csv.rfind("family,param,size,energy,sumset,diffset,kappa_lb,slope\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv == emit_report(trend, ReportFormat::Csv));
    CHECK_THROWS_AS(emit_report(ReportBundle{}, ReportFormat::Csv), Error);
}

TEST_CASE("harness: json rendering") {
    ReportBundle b;
    auto s = FiniteSet::integers({0, 1});
    b.reports.push_back(eval_inequality("innbound", make({{"A", s}, {"B", s}, {"S", s}})));
    auto j = nlohmann::json::parse(emit_report(b, ReportFormat::Json));
    CHECK(j["schema"] == "acw/1");
    CHECK(j["reports"][0]["lhs"] == "6561");
    CHECK(j["reports"][0]["rhs"] == "25600");
    CHECK(j["reports"][0]["implied_constant"] == "6561/25600");
    CHECK(j["reports"][0]["inputs"]["sets"]["A"]["elements"] == nlohmann::json::array({0, 1}));
    CHECK(emit_report(b, ReportFormat::Json) == emit_report(b, ReportFormat::Json));
    CHECK(parse_format("csv") == ReportFormat::Csv);
    CHECK_THROWS_AS(parse_format("xml"), Error);
    CHECK(parse_suite("all") == SuiteKind::All);
    CHECK_THROWS_AS(parse_suite("bogus"), Error);
}

TEST_CASE("harness: search on Z_12") {
    auto st = search_extremal(Objective::EnergyVsControl, Ambient::cyclic(12), 1000, 7);
    CHECK(st.iteration == 1000);
    REQUIRE(!st.archive.empty());
    CHECK(st.archive.size() <= 10);
    for (std::size_t i = 1; i < st.archive.size(); ++i) CHECK(st.archive[i - 1].score >= st.archive[i].score);
    for (const auto& s : st.archive) CHECK(score_set(Objective::EnergyVsControl, s.set).score == s.score);
    CHECK(score_set(Objective::EnergyVsControl, st.current).score == st.score);
    for (const auto& traj : st.trajectories)
        for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj[i] >= traj[i - 1]);
    CHECK(emit_search(st) == emit_search(search_extremal(Objective::EnergyVsControl, Ambient::cyclic(12), 1000, 7)));
    CHECK_THROWS_AS(search_extremal(Objective::EnergyVsControl, Ambient::cyclic(12), 0, 7), Error);
}

TEST_CASE("harness: search with one iteration returns the initial state") {
    auto ap = FiniteSet::cyclic(12, {0, 2, 4, 6});
    SearchOptions opts;
    opts.start = ap;
    auto st = search_extremal(Objective::EnergyVsControl, Ambient::cyclic(12), 1, 3, opts);
    CHECK(st.current == ap);
    REQUIRE(st.trajectories.size() == 1);
    CHECK(st.trajectories[0].size() == 1);
    // AP baseline: E and kappa computed independently
    auto sc = score_set(Objective::EnergyVsControl, ap);
    const double tau = double(oracle::energy_quadruples(ap)) / 64.0;
    const double kappa = to_double(control_exhaustive_reference(ap).value);
    CHECK(sc.score == doctest::Approx(-std::log(tau) / std::log(kappa)));
    CHECK(st.score == sc.score);
}

TEST_CASE("harness: other objectives") {
    auto a = FiniteSet::cyclic(12, {0, 1, 3, 7});
    auto w = score_set(Objective::WeakVsFullControl, a);
    CHECK(w.score >= 0);  // weak control never exceeds full control
    auto d = score_set(Objective::DoublingVsControl, a);
    Rational k(long(set_algebra(a, a, SetOp::Difference).size()), 4);
    k.canonicalize();
    CHECK(d.detail.at("K") == k);
    CHECK(std::isinf(score_set(Objective::EnergyVsControl, FiniteSet::cyclic(12, {3})).score));
    CHECK(parse_objective("doubling_vs_control") == Objective::DoublingVsControl);
    auto st = search_extremal(Objective::DoublingVsControl, Ambient::integers(), 60, 1, SearchOptions{4, 25, 16});
    CHECK(st.trajectories.size() == 3);
}
