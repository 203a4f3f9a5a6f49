#pragma once

// Inequality catalog evaluation, verification suites, extremal search and
// report emission.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acw/ambient.hpp"
#include "acw/control.hpp"
#include "acw/families.hpp"
#include "acw/numeric.hpp"

namespace acw {

enum class AssertionMode { Exact, Fitted, Trend };
std::string to_string(AssertionMode mode);

struct InequalitySpec {
    std::string id;
    AssertionMode mode = AssertionMode::Exact;
    std::vector<std::string> inputs;  // set names, e.g. {"A", "B", "S"}
    std::string statement;            // lhs <= rhs in plain notation
};

/// Every spec, sorted by id.
const std::vector<InequalitySpec>& inequality_catalog();
/// Throws UnknownSpec.
const InequalitySpec& find_spec(const std::string& id);

/// Named sets plus what is needed to regenerate them.
struct Instance {
    std::string id;
    std::string description;
    std::map<std::string, FiniteSet> sets;
    std::optional<FamilySpec> family;
    std::uint64_t seed = 0;

    const FiniteSet& set(const std::string& name) const;  // MissingInput
};

/// A side of an inequality: exact when the expression is a single product of
/// powers, floating otherwise (fitted sums of two terms).
struct Side {
    std::optional<Quantity> exact;
    double log_value = 0;  // natural log; -inf for zero

    static Side of(const Quantity& q);
    static Side approx(double log_value);
    std::string exact_string() const;  // "p/q", a radical form, or "" when inexact
    std::string decimal() const;       // 12 significant digits
};

struct InequalityReport {
    std::string spec_id;
    AssertionMode mode = AssertionMode::Exact;
    std::string instance_id;
    std::size_t instance_index = 0;
    std::string instance_description;
    nlohmann::json inputs;  // serialized sets plus family/seed when known
    Side lhs, rhs;
    /// lhs / rhs. Exact when both sides are exact and the ratio is rational.
    std::optional<Rational> implied_constant_exact;
    double implied_constant = 0;
    std::optional<bool> pass;  // set iff mode != Fitted
    std::string note;          // control mode and derived parameters
};

/// Evaluates one spec on one instance. Exact-mode comparisons are exact.
/// Errors: UnknownSpec, MissingInput, and whatever the evaluators raise.
InequalityReport eval_inequality(const std::string& spec_id, const Instance& instance);

enum class SuiteKind { Exact, Fitted, Trend, All };
std::string to_string(SuiteKind kind);
SuiteKind parse_suite(const std::string& name);  // UnknownSpec

struct TrendReport {
    std::string spec_id;
    std::string family;
    std::vector<double> log_sizes, log_values;
    double slope = 0;
    std::optional<double> band_lo, band_hi;
    std::string band_source;  // why this band
    std::optional<bool> pass;
};

struct TrendRow {
    std::string family;
    std::int64_t param = 0;
    std::int64_t size = 0;
    BigInt energy;
    std::int64_t sumset = 0;
    std::int64_t diffset = 0;
    Rational kappa_lb;
    std::optional<double> slope;  // local log E / log |A| slope against the previous row
};

struct ReportBundle {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<InequalityReport> reports;
    std::vector<TrendReport> trends;
    std::vector<TrendRow> rows;

    bool empty() const noexcept { return reports.empty() && trends.empty() && rows.empty(); }
    /// Every asserting report and trend passes.
    bool all_pass() const;
};

struct SuiteOptions {
    /// Throw ExactFailure after the run if an exact-mode spec fails.
    bool abort_on_exact_failure = true;
    /// Largest cyclic group for which exhaustive control is computed.
    std::int64_t exhaustive_limit = 16;
};

/// Runs every applicable spec on every corpus member. Companion sets (B, S and
/// a split of A) come from the seed and the member index, so the bundle is a
/// function of (corpus, seed) alone.
ReportBundle run_suite(SuiteKind kind, const std::vector<FamilySpec>& corpus, std::uint64_t seed,
                       const SuiteOptions& opts = {});

/// count random subsets of Z_n, n cycling through moduli, sizes uniform in [1, n].
std::vector<FamilySpec> random_cyclic_corpus(std::size_t count, const std::vector<std::int64_t>& moduli,
                                             std::uint64_t seed);
std::vector<FamilySpec> squares_corpus(const std::vector<std::int64_t>& sizes);
/// A small mixed corpus (convex, interval, random, geometric) for the fitted suite.
std::vector<FamilySpec> fitted_corpus(std::uint64_t seed);

// ---- extremal search

enum class Objective { EnergyVsControl, WeakVsFullControl, DoublingVsControl };
std::string to_string(Objective objective);
Objective parse_objective(const std::string& name);  // UnknownSpec

struct ScoredSet {
    FiniteSet set;
    double score = 0;
    Rational kappa;
    ControlMode kappa_mode = ControlMode::CandidateLowerBound;
    /// objective-specific exact ingredients, e.g. tau = E/|A|^3
    std::map<std::string, Rational> detail;
    /// log tau / log kappa style exponent, when defined
    std::optional<double> exponent;
};

/// Deterministic objective value, recomputable from the set alone. Larger is
/// better; degenerate sets (kappa = 1) score -inf.
///   energy_vs_control:   -log(E/|A|^3) / log(kappa)
///   weak_vs_full_control: log(kappa / (sum (1_A o 1_A)^3 / |A|^4))
///   doubling_vs_control: -log(|A-A|/|A|) / log(1/kappa)
ScoredSet score_set(Objective objective, const FiniteSet& a, std::int64_t exhaustive_limit = 18);

struct SearchOptions {
    std::int64_t set_size = 0;        // 0: a third of the universe, at least 2
    std::int64_t restart_every = 250;  // iterations per hill-climb
    std::int64_t universe = 32;        // integer ambients search [0, universe)
    std::optional<FiniteSet> start;    // first trajectory starts here
    std::size_t archive_size = 10;
    std::int64_t exhaustive_limit = 18;
};

struct SearchState {
    Ambient ambient;
    Objective objective = Objective::EnergyVsControl;
    FiniteSet current;
    double score = 0;
    std::int64_t iteration = 0;
    std::uint64_t seed = 0;
    std::vector<ScoredSet> archive;  // best first, distinct sets
    /// accepted scores along each hill-climb, one vector per restart
    std::vector<std::vector<double>> trajectories;
};

/// Hill climbing over single-element swaps with random restarts. Errors:
/// InvalidArgument for iterations <= 0 or a universe too small for the set size.
SearchState search_extremal(Objective objective, const Ambient& ambient, std::int64_t iterations,
                            std::uint64_t seed, const SearchOptions& opts = {});

// ---- emission

enum class ReportFormat { Json, Csv };
ReportFormat parse_format(const std::string& name);  // UnknownSpec

nlohmann::json set_to_json(const FiniteSet& a);
nlohmann::json to_json(const ReportBundle& bundle);
nlohmann::json to_json(const SearchState& state);

/// Byte-deterministic rendering. CSV carries the trend rows and needs a
/// nonempty bundle (InvalidArgument).
std::string emit_report(const ReportBundle& bundle, ReportFormat format);
std::string emit_search(const SearchState& state);
/// Writes text to path (Io on failure).
void write_file(const std::string& path, const std::string& text);

}  // namespace acw
