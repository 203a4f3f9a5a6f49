// acw: command-line front end for the additive-combinatorics workbench.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "acw/control.hpp"
#include "acw/convolution.hpp"
#include "acw/decompose.hpp"
#include "acw/error.hpp"
#include "acw/exponents.hpp"
#include "acw/families.hpp"
#include "acw/harness.hpp"
#include "acw/incidence.hpp"
#include "acw/kernels.hpp"

using namespace acw;
using nlohmann::json;

namespace {

struct Global {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
    int threads = 0;
};

// Input set: explicit elements, or a family.
struct SetArgs {
    std::string elements;
    std::int64_t modulus = 0;
    std::string family;
    std::int64_t n = 32;

    void add(CLI::App* app) {
        app->add_option("--set", elements, "comma-separated integers");
        app->add_option("--modulus", modulus, "read --set in Z/modulus (default: Z)");
        app->add_option("--family", family, "interval, squares, geometric, perturbed_convex, random_subset");
        app->add_option("--n", n, "family size");
    }

    FiniteSet build(std::uint64_t seed) const {
        if (!elements.empty()) {
            std::vector<std::int64_t> xs;
            std::stringstream ss(elements);
            for (std::string tok; std::getline(ss, tok, ',');)
                if (!tok.empty()) xs.push_back(std::stoll(tok));
            return modulus > 0 ? FiniteSet::cyclic(modulus, xs) : FiniteSet::integers(xs);
        }
        if (family.empty() || family == "interval") return generate(FamilySpec::interval(n, 1));
        switch (parse_family(family)) {
            case Family::Squares: return generate(FamilySpec::squares(n));
            case Family::Geometric: return generate(FamilySpec::geometric(1, 2, n));
            case Family::PerturbedConvex: return generate(FamilySpec::perturbed_convex(n, seed));
            case Family::RandomSubset:
                return modulus > 0 ? generate(FamilySpec::random_subset(modulus, n, seed, true))
                                   : generate(FamilySpec::random_subset(4 * n, n, seed));
            default: throw Error(ErrorKind::InvalidArgument, "family needs explicit parameters; use --set");
        }
    }
};

void emit(const Global& g, const std::string& text) {
    if (g.out.empty()) std::cout << text;
    else write_file(g.out, text);
}

void emit_json(const Global& g, json j) {
    j["schema"] = "acw/1";
    emit(g, j.dump(2) + "\n");
}

std::vector<std::int64_t> parse_list(const std::string& text) {
    std::vector<std::int64_t> xs;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) xs.push_back(std::stoll(tok));
    return xs;
}

int cmd_compute(const Global& g, const SetArgs& s, std::int64_t limit) {
    FiniteSet a = s.build(g.seed);
    auto st = stats(a);
    json j;
    j["set"] = set_to_json(a);
    j["size"] = st.size;
    j["sumset"] = st.sumset_size;
    j["diffset"] = st.diffset_size;
    j["energy"] = to_string(st.energy);
    const bool exact = a.ambient().kind() == AmbientKind::Cyclic && a.ambient().modulus() <= limit;
    const auto k = exact ? control_exhaustive(a) : control_candidates(a);
    j["kappa"] = to_string(k.value);
    j["kappa_decimal"] = to_decimal(k.value, 12);
    j["kappa_mode"] = to_string(k.mode);
    j["kappa_witness"] = set_to_json(k.witness);
    j["kappa_weak"] = to_string(weak_control(a).implied_kappa_lower);
    emit_json(g, j);
    return 0;
}

int cmd_verify(const Global& g, const std::string& suite, std::size_t count, const std::string& moduli,
               const std::string& sizes, std::int64_t limit) {
    const SuiteKind kind = parse_suite(suite);
    std::vector<FamilySpec> corpus;
    if (kind == SuiteKind::Exact || kind == SuiteKind::All) {
        auto c = random_cyclic_corpus(count, parse_list(moduli), g.seed);
        corpus.insert(corpus.end(), c.begin(), c.end());
    }
    if (kind == SuiteKind::Fitted || kind == SuiteKind::All) {
        auto c = fitted_corpus(g.seed);
        corpus.insert(corpus.end(), c.begin(), c.end());
    }
    if (kind == SuiteKind::Trend || kind == SuiteKind::All) {
        auto c = squares_corpus(parse_list(sizes));
        corpus.insert(corpus.end(), c.begin(), c.end());
    }
    auto bundle = run_suite(kind, corpus, g.seed, SuiteOptions{false, limit});
    emit(g, emit_report(bundle, parse_format(g.format)));
    std::size_t failures = 0;
    for (const auto& r : bundle.reports) failures += r.pass && !*r.pass;
    for (const auto& t : bundle.trends) failures += t.pass && !*t.pass;
    std::fprintf(stderr, "%s suite: %zu reports, %zu trends, %zu failures\n", suite.c_str(), bundle.reports.size(),
                 bundle.trends.size(), failures);
    return bundle.all_pass() ? 0 : 1;
}

int cmd_decompose(const Global& g, const std::string& mode, const SetArgs& s, const std::string& function) {
    json j;
    if (mode == "bsg") {
        FiniteSet a = s.build(g.seed);
        auto cert = bsg_pipeline(a);
        auto fails = verify(cert);
        j["A"] = set_to_json(cert.A);
        j["A_prime"] = set_to_json(cert.A_prime);
        j["X"] = set_to_json(cert.X);
        j["eta"] = to_string(cert.eta);
        j["threshold"] = to_string(cert.threshold);
        j["bad_pairs"] = cert.bad_pair_count;
        j["measured_doubling"] = to_string(cert.measured_doubling);
        j["branch"] = to_string(cert.branch);
        j["trivial"] = cert.trivial;
        j["verify_failures"] = fails;
        emit_json(g, j);
        return fails.empty() ? 0 : 1;
    }
    if (mode != "convex") throw Error(ErrorKind::InvalidArgument, "decompose mode is bsg or convex");
    FiniteSet a = s.build(g.seed);
    auto f = function == "neglog" ? ConvexFunctionSpec::negative_logarithm()
                                  : ConvexFunctionSpec::polynomial({BigInt(0), BigInt(0), BigInt(1)});
    auto cert = convex_decompose(a, f);
    j["function"] = cert.function;
    j["A"] = set_to_json(cert.A);
    j["X"] = set_to_json(cert.X);
    j["Y"] = set_to_json(cert.Y);
    j["kappa_fX"] = to_string(cert.kappa_fX.value);
    j["kappa_fX_mode"] = to_string(cert.kappa_fX.mode);
    j["kappa_Y"] = to_string(cert.kappa_Y.value);
    j["kappa_Y_mode"] = to_string(cert.kappa_Y.mode);
    j["kappa_product_times_size"] = to_string(cert.product_times_size);
    j["kappa_product_times_size_decimal"] = to_decimal(cert.product_times_size, 12);
    j["step_sizes"] = cert.step_sizes;
    emit_json(g, j);
    return 0;
}

// Convex-control witness for X = {1..n} under x^2 with B = Y = {1..m} and C = A + B.
int cmd_incidence(const Global& g, std::int64_t n, std::int64_t m) {
    auto x = generate(FamilySpec::interval(n, 1));
    auto y = generate(FamilySpec::interval(m, 1));
    auto sq = ConvexFunctionSpec::polynomial({BigInt(0), BigInt(0), BigInt(1)});
    auto a = function_image(sq, x);
    auto c = set_algebra(a, y, SetOp::Sum);
    auto w = convcont_witness(x, sq, y, y, c);
    json j;
    j["n"] = n;
    j["m"] = m;
    j["points"] = w.points;
    j["curves"] = w.curves;
    j["incidences"] = w.incidences;
    j["solutions"] = w.solutions;
    j["lower_bound"] = w.lower_bound;
    j["holds"] = w.holds;
    j["st_denominator"] = st_denominator(w.points, w.curves);
    emit_json(g, j);
    return w.holds ? 0 : 1;
}

int cmd_exponents(const Global& g, const std::string& path) {
    auto report = verify_catalog(path);
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"id", c.id}, {"kind", c.kind}, {"expected", c.expected}, {"derived", c.derived}, {"pass", c.pass}});
    emit_json(g, {{"checks", checks}, {"all_pass", report.all_pass()}});
    return report.all_pass() ? 0 : 1;
}

int cmd_search(const Global& g, const std::string& objective, std::int64_t modulus, std::int64_t iterations,
               const SearchOptions& opts) {
    const Ambient amb = modulus > 0 ? Ambient::cyclic(modulus) : Ambient::integers();
    auto st = search_extremal(parse_objective(objective), amb, iterations, g.seed, opts);
    emit(g, emit_search(st));
    return 0;
}

// Serial double loop against the OpenMP double loop and the transform.
int cmd_bench(const Global& g, std::int64_t support, std::int64_t reps) {
    SplitMix64 rng(g.seed);
    kernels::IntSeq f, h;
    std::uint64_t pos = 0;
    for (std::int64_t i = 0; i < support; ++i) {
        pos += 1 + rng.below(4);
        f.idx.push_back(pos);
        f.val.push_back(1 + static_cast<std::int64_t>(rng.below(3)));
    }
    h = f;
    const std::uint64_t len = 2 * pos + 1;
    json rows = json::array();
    auto time = [&](const char* name, auto&& fn) {
        double best = 1e300;
        for (std::int64_t r = 0; r < reps; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            auto out = fn();
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            if (out.size() == 0) return;
        }
        rows.push_back({{"kernel", name}, {"seconds", to_decimal(best, 6)}});
    };
    time("naive_serial", [&] { return kernels::naive_serial(f, h, len); });
    time("naive_parallel", [&] { return kernels::naive_parallel(f, h, len); });
    time("ntt", [&] { return kernels::ntt(f, h, len); });
    emit_json(g, {{"support", support}, {"threads", omp_get_max_threads()}, {"kernels", rows}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"additive-combinatorics workbench"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--out", g.out, "write the report here instead of stdout");
    app.add_option("--format", g.format, "json or csv")->capture_default_str();
    app.add_option("--threads", g.threads, "OpenMP threads (0: runtime default)");

    std::int64_t limit = 16;

    SetArgs compute_set;
    auto* compute = app.add_subcommand("compute", "set statistics and control");
    compute_set.add(compute);
    compute->add_option("--exhaustive-limit", limit, "largest Z/n for exhaustive control");

    std::string suite = "exact", moduli = "8,16,32,64", sizes = "64,128,256,512,1024";
    std::size_t count = 500;
    auto* verify_cmd = app.add_subcommand("verify", "run an inequality suite");
    verify_cmd->add_option("--suite", suite, "exact, fitted, trend or all")->capture_default_str();
    verify_cmd->add_option("--count", count, "random sets in the exact corpus")->capture_default_str();
    verify_cmd->add_option("--moduli", moduli, "moduli for the exact corpus")->capture_default_str();
    verify_cmd->add_option("--sizes", sizes, "squares(N) sizes for the trend corpus")->capture_default_str();
    verify_cmd->add_option("--exhaustive-limit", limit, "largest Z/n for exhaustive control");

    std::string mode = "convex", function = "square";
    SetArgs decompose_set;
    decompose_set.n = 64;
    auto* decompose = app.add_subcommand("decompose", "BSG certificate or convex decomposition");
    decompose->add_option("mode", mode, "bsg or convex")->capture_default_str();
    decompose->add_option("--function", function, "square or neglog")->capture_default_str();
    decompose_set.add(decompose);

    std::int64_t inc_n = 8, inc_m = 4;
    auto* incidence = app.add_subcommand("incidence", "convex-control incidence witness");
    incidence->add_option("--n", inc_n, "X = {1..n}")->capture_default_str();
    incidence->add_option("--m", inc_m, "Y = B = {1..m}")->capture_default_str();

    std::string catalog_path;
    auto* exponents = app.add_subcommand("exponents", "verify the exponent catalog");
    exponents->add_option("--catalog", catalog_path, "catalog file (default: bundled)");

    std::string objective = "energy_vs_control";
    std::int64_t modulus = 12, iterations = 1000;
    SearchOptions sopts;
    auto* search = app.add_subcommand("search", "extremal-set hill climbing");
    search->add_option("--objective", objective)->capture_default_str();
    search->add_option("--modulus", modulus, "search Z/modulus; 0 searches [0, universe) in Z")->capture_default_str();
    search->add_option("--universe", sopts.universe)->capture_default_str();
    search->add_option("--iterations", iterations)->capture_default_str();
    search->add_option("--set-size", sopts.set_size, "0: a third of the universe");
    search->add_option("--restart-every", sopts.restart_every)->capture_default_str();

    std::int64_t support = 20000, reps = 3;
    auto* bench = app.add_subcommand("bench", "time the convolution kernels");
    bench->add_option("--support", support)->capture_default_str();
    bench->add_option("--reps", reps)->capture_default_str();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);
    if (g.threads > 0) omp_set_num_threads(g.threads);

    try {
        if (*compute) return cmd_compute(g, compute_set, limit);
        if (*verify_cmd) return cmd_verify(g, suite, count, moduli, sizes, limit);
        if (*decompose) return cmd_decompose(g, mode, decompose_set, function);
        if (*incidence) return cmd_incidence(g, inc_n, inc_m);
        if (*exponents) return cmd_exponents(g, catalog_path);
        if (*search) return cmd_search(g, objective, modulus, iterations, sopts);
        if (*bench) return cmd_bench(g, support, reps);
    } catch (const Error& e) {
        std::fprintf(stderr, "acw: %s\n", e.what());
        return 2;
    }
    return 0;
}
