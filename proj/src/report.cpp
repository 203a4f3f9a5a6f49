#include <cmath>
#include <fstream>
#include <sstream>

#include "acw/error.hpp"
#include "acw/harness.hpp"

namespace acw {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "acw/1";

std::string dec(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return to_decimal(x, 12);
}

json opt_dec(const std::optional<double>& x) { return x ? json(dec(*x)) : json(nullptr); }

json dec_array(const std::vector<double>& xs) {
    json a = json::array();
    for (double x : xs) a.push_back(dec(x));
    return a;
}

// exact form when there is one, else the decimal
std::string side_text(const Side& s) { return s.exact ? s.exact_string() : s.decimal(); }

json report_json(const InequalityReport& r) {
    json j;
    j["spec"] = r.spec_id;
    j["mode"] = to_string(r.mode);
    j["instance"] = r.instance_id;
    j["instance_index"] = r.instance_index;
    j["description"] = r.instance_description;
    j["inputs"] = r.inputs;
    j["lhs"] = side_text(r.lhs);
    j["rhs"] = side_text(r.rhs);
    j["lhs_exact"] = r.lhs.exact.has_value();
    j["rhs_exact"] = r.rhs.exact.has_value();
    j["lhs_decimal"] = r.lhs.decimal();
    j["rhs_decimal"] = r.rhs.decimal();
    j["implied_constant"] = r.implied_constant_exact ? to_string(*r.implied_constant_exact) : dec(r.implied_constant);
    j["implied_constant_decimal"] =
        r.implied_constant_exact ? to_decimal(*r.implied_constant_exact, 12) : dec(r.implied_constant);
    j["pass"] = r.pass ? json(*r.pass) : json(nullptr);
    j["note"] = r.note;
    return j;
}

json trend_json(const TrendReport& t) {
    json j;
    j["spec"] = t.spec_id;
    j["family"] = t.family;
    j["log_sizes"] = dec_array(t.log_sizes);
    j["log_values"] = dec_array(t.log_values);
    j["slope"] = dec(t.slope);
    j["band_lo"] = opt_dec(t.band_lo);
    j["band_hi"] = opt_dec(t.band_hi);
    j["band_source"] = t.band_source;
    j["pass"] = t.pass ? json(*t.pass) : json(nullptr);
    return j;
}

json row_json(const TrendRow& r) {
    json j;
    j["family"] = r.family;
    j["param"] = r.param;
    j["size"] = r.size;
    j["energy"] = to_string(r.energy);
    j["sumset"] = r.sumset;
    j["diffset"] = r.diffset;
    j["kappa_lb"] = to_string(r.kappa_lb);
    j["kappa_lb_decimal"] = to_decimal(r.kappa_lb, 12);
    j["slope"] = opt_dec(r.slope);
    return j;
}

json scored_json(const ScoredSet& s) {
    json j;
    j["set"] = set_to_json(s.set);
    j["score"] = dec(s.score);
    j["kappa"] = to_string(s.kappa);
    j["kappa_mode"] = to_string(s.kappa_mode);
    json d = json::object();
    for (const auto& [k, v] : s.detail) d[k] = to_string(v);
    j["detail"] = d;
    j["exponent"] = opt_dec(s.exponent);
    return j;
}

}  // namespace

ReportFormat parse_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw Error(ErrorKind::UnknownSpec, "unknown format '" + name + "'");
}

json set_to_json(const FiniteSet& a) {
    json j;
    j["ambient"] = a.ambient().describe();
    json elems = json::array();
    for (const auto& x : a.elements()) {
        if (x.size() == 1) {
            elems.push_back(x[0]);
        } else {
            json v = json::array();
            for (auto c : x) v.push_back(c);
            elems.push_back(v);
        }
    }
    j["elements"] = elems;
    return j;
}

json to_json(const ReportBundle& bundle) {
    json j;
    j["schema"] = kSchema;
    j["suite"] = bundle.suite;
    j["seed"] = bundle.seed;
    j["all_pass"] = bundle.all_pass();
    json reports = json::array(), trends = json::array(), rows = json::array();
    for (const auto& r : bundle.reports) reports.push_back(report_json(r));
    for (const auto& t : bundle.trends) trends.push_back(trend_json(t));
    for (const auto& r : bundle.rows) rows.push_back(row_json(r));
    j["reports"] = reports;
    j["trends"] = trends;
    j["rows"] = rows;
    return j;
}

json to_json(const SearchState& state) {
    json j;
    j["schema"] = kSchema;
    j["objective"] = to_string(state.objective);
    j["ambient"] = state.ambient.describe();
    j["seed"] = state.seed;
    j["iteration"] = state.iteration;
    j["current"] = set_to_json(state.current);
    j["score"] = dec(state.score);
    json archive = json::array();
    for (const auto& s : state.archive) archive.push_back(scored_json(s));
    j["archive"] = archive;
    json traj = json::array();
    for (const auto& t : state.trajectories) traj.push_back(dec_array(t));
    j["trajectories"] = traj;
    return j;
}

std::string emit_report(const ReportBundle& bundle, ReportFormat format) {
    if (format == ReportFormat::Json) return to_json(bundle).dump(2) + "\n";
    if (bundle.empty()) throw Error(ErrorKind::InvalidArgument, "csv needs a nonempty bundle");
    std::ostringstream out;
    out << "family,param,size,energy,sumset,diffset,kappa_lb,slope\n";
    for (const auto& r : bundle.rows)
        out << r.family << ',' << r.param << ',' << r.size << ',' << to_string(r.energy) << ',' << r.sumset << ','
            << r.diffset << ',' << to_string(r.kappa_lb) << ',' << (r.slope ? dec(*r.slope) : "") << '\n';
    return out.str();
}

std::string emit_search(const SearchState& state) { return to_json(state).dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
    f << text;
    if (!f.flush()) throw Error(ErrorKind::Io, "cannot write " + path);
}

}  // namespace acw
