#include "acw/exponents.hpp"

#include <algorithm>
#include <fstream>

#include "acw/error.hpp"

namespace acw {

namespace {

using Vec = std::map<std::string, Rational>;

struct Row {
    Vec v;
    Loss loss;
};

void prune(Vec& v) {
    for (auto it = v.begin(); it != v.end();) {
        it->second.canonicalize();
        it = it->second == 0 ? v.erase(it) : std::next(it);
    }
}

Vec scaled(const Vec& v, const Rational& c) {
    Vec out;
    for (const auto& [s, e] : v) out[s] = e * c;
    prune(out);
    return out;
}

void check_symbols(const Vec& v) {
    for (const auto& kv : v)
        if (!is_registered(kv.first)) throw Error(ErrorKind::InvalidArgument, "unregistered symbol '" + kv.first + "'");
}

// Scaled so the first coefficient in registry order is +-1; the ray of the row.
Vec ray(const Vec& v) {
    for (const auto& s : symbol_registry()) {
        auto it = v.find(s);
        if (it != v.end()) return scaled(v, 1 / abs(it->second));
    }
    return v;
}

Rational rat(const nlohmann::json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return make_rational(j.get<long>());
    throw Error(ErrorKind::Parse, "exponent must be an integer or a \"p/q\" string, got " + j.dump());
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string exponents_string(const Vec& v) {
    if (v.empty()) return "1";
    std::string out;
    for (const auto& s : symbol_registry()) {
        auto it = v.find(s);
        if (it == v.end()) continue;
        if (!out.empty()) out += ' ';
        out += s;
        if (it->second != 1) out += "^(" + acw::to_string(it->second) + ")";
    }
    return out;
}

}  // namespace

std::string to_string(Loss loss) {
    switch (loss) {
        case Loss::Absolute: return "absolute";
        case Loss::Polylog: return "polylog";
        case Loss::TwoPowerOk: return "two-power-Ok";
        case Loss::Eps: return "eps";
    }
    return "?";
}

Loss parse_loss(const std::string& text) {
    if (text == "absolute") return Loss::Absolute;
    if (text == "polylog") return Loss::Polylog;
    if (text == "two-power-Ok" || text == "2^O(k)") return Loss::TwoPowerOk;
    if (text == "eps" || text == "eps-loss") return Loss::Eps;
    throw Error(ErrorKind::Parse, "unknown loss marker '" + text + "'");
}

Loss combine(Loss a, Loss b) noexcept { return std::max(a, b); }

const std::vector<std::string>& symbol_registry() {
    static const std::vector<std::string> symbols{"tau", "kappa", "delta", "K", "N",      "S", "Sp",
                                                  "H",   "nu",    "L",     "eta", "lambda", "P", "x"};
    return symbols;
}

bool is_registered(const std::string& symbol) {
    const auto& r = symbol_registry();
    return std::find(r.begin(), r.end(), symbol) != r.end();
}

ExponentExpression::ExponentExpression(std::map<std::string, Rational> exponents, Loss loss)
    : exponents_(std::move(exponents)), loss_(loss) {
    prune(exponents_);
    check_symbols(exponents_);
}

Rational ExponentExpression::exponent(const std::string& symbol) const {
    auto it = exponents_.find(symbol);
    return it == exponents_.end() ? Rational(0) : it->second;
}

ExponentExpression ExponentExpression::operator*(const ExponentExpression& other) const {
    Vec v = exponents_;
    for (const auto& [s, e] : other.exponents_) v[s] += e;
    return ExponentExpression(std::move(v), combine(loss_, other.loss_));
}

ExponentExpression ExponentExpression::inverse() const { return pow(Rational(-1)); }

ExponentExpression ExponentExpression::pow(const Rational& power) const {
    return ExponentExpression(scaled(exponents_, power), loss_);
}

ExponentExpression ExponentExpression::substitute(const std::string& symbol, const ExponentExpression& value) const {
    auto it = exponents_.find(symbol);
    if (it == exponents_.end()) return *this;
    Vec rest = exponents_;
    rest.erase(symbol);
    return ExponentExpression(std::move(rest), loss_) * value.pow(it->second);
}

std::string ExponentExpression::to_string() const { return exponents_string(exponents_); }

bool ExponentExpression::operator==(const ExponentExpression& other) const {
    return exponents_ == other.exponents_ && loss_ == other.loss_;
}

ExponentExpression Relation::normal() const {
    ExponentExpression m = dir == Direction::LessEq ? lhs * rhs.inverse() : rhs * lhs.inverse();
    m.set_loss(loss());
    return m;
}

Loss Relation::loss() const noexcept { return combine(lhs.loss(), rhs.loss()); }

std::string Relation::to_string() const {
    std::string out = lhs.to_string() + (dir == Direction::LessEq ? " <= " : " >= ") + rhs.to_string();
    if (loss() != Loss::Absolute) out += " [" + acw::to_string(loss()) + "]";
    return out;
}

Relation chain_eliminate(const InequalityChain& chain) {
    if (chain.steps.empty()) throw Error(ErrorKind::InvalidArgument, "empty chain");
    std::vector<Row> rows;
    for (const auto& r : chain.steps) {
        auto m = r.normal();
        rows.push_back({m.exponents(), m.loss()});
    }
    for (const auto& sym : chain.eliminate) {
        if (!is_registered(sym)) throw Error(ErrorKind::InvalidArgument, "unregistered symbol '" + sym + "'");
        std::vector<Row> pos, neg, next;
        for (auto& r : rows) {
            auto it = r.v.find(sym);
            if (it == r.v.end()) next.push_back(std::move(r));
            else (it->second > 0 ? pos : neg).push_back(std::move(r));
        }
        if (pos.empty() || neg.empty())
            throw Error(ErrorKind::InvalidArgument, "cannot eliminate '" + sym + "': it never appears with both signs");
        for (const auto& p : pos)
            for (const auto& n : neg) {
                const Rational cp = p.v.at(sym), cn = -n.v.at(sym);
                Vec v = scaled(p.v, cn);
                for (const auto& [s, e] : scaled(n.v, cp)) v[s] += e;
                prune(v);
                next.push_back({std::move(v), combine(p.loss, n.loss)});
            }
        rows = std::move(next);
    }
    // distinct nontrivial rays
    std::map<Vec, Loss> rays;
    for (const auto& r : rows) {
        if (r.v.empty()) continue;
        Vec k = ray(r.v);
        auto [it, fresh] = rays.emplace(k, r.loss);
        if (!fresh) it->second = std::min(it->second, r.loss);
    }
    if (rays.empty()) throw Error(ErrorKind::ExactFailure, "chain is underdetermined: nothing survives elimination");
    if (rays.size() > 1) {
        std::string list;
        for (const auto& kv : rays) list += " {" + exponents_string(kv.first) + " <= 1}";
        throw Error(ErrorKind::ExactFailure, "chain leaves several independent relations:" + list);
    }
    const auto& [v, loss] = *rays.begin();
    if (v.size() > 2)
        throw Error(ErrorKind::ExactFailure, "chain leaves more than two symbols: " + exponents_string(v) + " <= 1");

    std::string subject;
    if (chain.solve_for) {
        if (!v.count(*chain.solve_for))
            throw Error(ErrorKind::ExactFailure, "'" + *chain.solve_for + "' does not survive elimination");
        subject = *chain.solve_for;
    } else {
        for (const auto& s : symbol_registry())
            if (v.count(s)) {
                subject = s;
                break;
            }
    }
    Vec unit = scaled(v, 1 / abs(v.at(subject)));
    Relation out;
    out.lhs = ExponentExpression({{subject, unit.at(subject)}}, loss);
    unit.erase(subject);
    out.rhs = ExponentExpression(unit, loss).inverse();
    out.dir = Direction::LessEq;
    return out;
}

namespace {

// (var exponent, rest exponent, rest symbol) for a two-symbol monomial.
struct Split {
    Rational a, b;
    std::string base;
};

Split split(const ExponentExpression& e, const std::string& var) {
    Split s{e.exponent(var), Rational(0), {}};
    for (const auto& [sym, x] : e.exponents()) {
        if (sym == var) continue;
        if (!s.base.empty())
            throw Error(ErrorKind::InvalidArgument, "balance needs one base symbol besides '" + var + "': " + e.to_string());
        s.base = sym;
        s.b = x;
    }
    return s;
}

}  // namespace

Rational balance(const ExponentExpression& e1, const ExponentExpression& e2, const std::string& var) {
    auto s1 = split(e1, var), s2 = split(e2, var);
    if (!s1.base.empty() && !s2.base.empty() && s1.base != s2.base)
        throw Error(ErrorKind::InvalidArgument, "expressions use different base symbols");
    if (s1.a * s2.a >= 0)
        throw Error(ErrorKind::InvalidArgument, "'" + var + "' must carry exponents of opposite sign (no crossing)");
    Rational t = (s2.b - s1.b) / (s1.a - s2.a);
    t.canonicalize();
    return t;
}

Rational balanced_exponent(const ExponentExpression& e1, const ExponentExpression& e2, const std::string& var,
                           const std::string& base) {
    for (const auto* e : {&e1, &e2})
        for (const auto& kv : e->exponents())
            if (kv.first != var && kv.first != base)
                throw Error(ErrorKind::InvalidArgument, "unexpected symbol '" + kv.first + "' in " + e->to_string());
    const Rational t = balance(e1, e2, var);
    Rational x = e1.exponent(base) + e1.exponent(var) * t;
    x.canonicalize();
    return x;
}

Rational sum_product_c(const Rational& a) {
    if (a <= 0) throw Error(ErrorKind::InvalidArgument, "control exponent must be positive");
    Rational half = a / 2, other = 29 * a / (83 * a + 2);
    half.canonicalize();
    other.canonicalize();
    return std::max(half, other);
}

Rational sum_product_c_by_chain(const Rational& a) {
    if (a <= 0) throw Error(ErrorKind::InvalidArgument, "control exponent must be positive");
    // P = |A+A|:  P >= (K^{83/2} N^{-29/2})^{-a} N  and  P <= K N
    InequalityChain c;
    Relation lower;
    lower.lhs = ExponentExpression({{"P", Rational(1)}}, Loss::Polylog);
    lower.rhs = ExponentExpression({{"K", -Rational(83, 2) * a}, {"N", Rational(29, 2) * a + 1}});
    lower.dir = Direction::GreaterEq;
    Relation upper;
    upper.lhs = ExponentExpression({{"P", Rational(1)}});
    upper.rhs = ExponentExpression({{"K", Rational(1)}, {"N", Rational(1)}});
    c.steps = {lower, upper};
    c.eliminate = {"P"};
    c.solve_for = "K";
    Relation r = chain_eliminate(c);
    // K^{-1} <= N^{-c}
    if (r.lhs.exponent("K") != -1) throw Error(ErrorKind::Internal, "unexpected orientation " + r.to_string());
    Rational out = -r.rhs.exponent("N");
    out.canonicalize();
    return out;
}

Rational sum_product_crossover() {
    // a/2 = 29a/(83a+2)  <=>  83a + 2 = 58
    Rational a(58 - 2, 83);
    a.canonicalize();
    return a;
}

bool CatalogReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CatalogCheck& c) { return c.pass; });
}

void CatalogReport::require_pass() const {
    for (const auto& c : checks)
        if (!c.pass)
            throw Error(ErrorKind::ExactFailure,
                        c.kind + " '" + c.id + "': expected " + c.expected + ", derived " + c.derived);
}

ExponentExpression parse_expression(const nlohmann::json& j, Loss loss) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "expression must be an object of exponents: " + j.dump());
    std::map<std::string, Rational> e;
    for (const auto& [k, v] : j.items()) {
        if (!is_registered(k)) throw Error(ErrorKind::Parse, "unregistered symbol '" + k + "'");
        e[k] = rat(v);
    }
    return ExponentExpression(std::move(e), loss);
}

Relation parse_relation(const nlohmann::json& j) {
    Loss loss = j.contains("loss") ? parse_loss(j.at("loss").get<std::string>()) : Loss::Absolute;
    Relation r;
    r.lhs = parse_expression(field(j, "lhs"), loss);
    r.rhs = parse_expression(field(j, "rhs"), loss);
    const std::string rel = j.value("rel", "<=");
    if (rel == "<=") r.dir = Direction::LessEq;
    else if (rel == ">=") r.dir = Direction::GreaterEq;
    else throw Error(ErrorKind::Parse, "relation must be <= or >=, got '" + rel + "'");
    return r;
}

namespace {

InequalityChain parse_chain_with(const nlohmann::json& j, const std::map<std::string, Relation>& derived) {
    InequalityChain c;
    for (const auto& step : field(j, "steps")) {
        if (step.contains("use")) {
            const auto id = step.at("use").get<std::string>();
            auto it = derived.find(id);
            if (it == derived.end()) throw Error(ErrorKind::Parse, "step uses unknown or later chain '" + id + "'");
            c.steps.push_back(it->second);
        } else {
            c.steps.push_back(parse_relation(step));
        }
    }
    if (j.contains("eliminate"))
        for (const auto& s : j.at("eliminate")) c.eliminate.push_back(s.get<std::string>());
    if (j.contains("solve_for")) c.solve_for = j.at("solve_for").get<std::string>();
    return c;
}

CatalogCheck relation_check(const std::string& id, const Relation& expected, const Relation& got, bool check_loss) {
    CatalogCheck c{id, "chain", expected.to_string(), got.to_string(), false};
    c.pass = expected.lhs.exponents() == got.lhs.exponents() && expected.rhs.exponents() == got.rhs.exponents() &&
             expected.dir == got.dir && (!check_loss || expected.loss() == got.loss());
    return c;
}

CatalogCheck value_check(const std::string& id, const std::string& kind, const Rational& expected,
                         const Rational& got) {
    return {id, kind, to_string(expected), to_string(got), expected == got};
}

}  // namespace

InequalityChain parse_chain(const nlohmann::json& j) { return parse_chain_with(j, {}); }

CatalogReport verify_catalog_json(const nlohmann::json& catalog) {
    CatalogReport report;
    std::map<std::string, Relation> derived;
    try {
        for (const auto& entry : catalog.value("chains", nlohmann::json::array())) {
            const auto id = field(entry, "id").get<std::string>();
            Relation got = chain_eliminate(parse_chain_with(entry, derived));
            derived[id] = got;
            const auto& expect = field(entry, "expect");
            report.checks.push_back(relation_check(id, parse_relation(expect), got, expect.contains("loss")));
        }
        for (const auto& entry : catalog.value("balances", nlohmann::json::array())) {
            const auto id = field(entry, "id").get<std::string>();
            auto e1 = parse_expression(field(entry, "e1")), e2 = parse_expression(field(entry, "e2"));
            const auto var = field(entry, "var").get<std::string>();
            if (entry.contains("expect_var"))
                report.checks.push_back(value_check(id + " (" + var + ")", "balance", rat(entry.at("expect_var")),
                                                    balance(e1, e2, var)));
            if (entry.contains("base"))
                report.checks.push_back(value_check(id, "balance", rat(field(entry, "expect")),
                                                    balanced_exponent(e1, e2, var, entry.at("base").get<std::string>())));
        }
        for (const auto& entry : catalog.value("sum_product", nlohmann::json::array())) {
            const auto id = field(entry, "id").get<std::string>();
            Rational a;
            if (entry.contains("a_from")) {
                const auto from = entry.at("a_from").get<std::string>();
                auto it = derived.find(from);
                if (it == derived.end()) throw Error(ErrorKind::Parse, "unknown chain '" + from + "'");
                a = it->second.rhs.exponent(entry.value("a_symbol", "kappa"));
            } else {
                a = rat(field(entry, "a"));
            }
            if (entry.contains("expect_a")) report.checks.push_back(value_check(id + " a", "sum_product", rat(entry.at("expect_a")), a));
            const Rational by_formula = sum_product_c(a);
            Rational by_chain = std::max(Rational(a / 2), sum_product_c_by_chain(a));
            by_chain.canonicalize();
            report.checks.push_back(value_check(id + " chain=formula", "sum_product", by_formula, by_chain));
            if (entry.contains("expect_c"))
                report.checks.push_back(value_check(id + " c", "sum_product", rat(entry.at("expect_c")), by_formula));
            Rational one_plus = by_formula + 1;
            one_plus.canonicalize();
            report.checks.push_back(value_check(id, "sum_product", rat(field(entry, "expect")), one_plus));
        }
        if (catalog.contains("crossover"))
            report.checks.push_back(
                value_check("crossover", "crossover", rat(field(catalog.at("crossover"), "expect")), sum_product_crossover()));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("exponent catalog: ") + e.what());
    }
    return report;
}

std::string default_catalog_path() {
#ifdef ACW_DATA_DIR
    return std::string(ACW_DATA_DIR) + "/exponent_catalog.json";
#else
    return "data/exponent_catalog.json";
#endif
}

CatalogReport verify_catalog(const std::string& path) {
    const std::string file = path.empty() ? default_catalog_path() : path;
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + file);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, file + ": " + e.what());
    }
    return verify_catalog_json(j);
}

}  // namespace acw
