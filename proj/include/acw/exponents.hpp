#pragma once

// Bookkeeping for chains of monomial inequalities between positive
// quantities. Implied constants are never numbers here: only a qualitative
// loss marker travels with each relation.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acw/numeric.hpp"

namespace acw {

enum class Loss { Absolute, Polylog, TwoPowerOk, Eps };

std::string to_string(Loss loss);
Loss parse_loss(const std::string& text);
/// Losses compose by taking the worse one.
Loss combine(Loss a, Loss b) noexcept;

/// Symbols a relation may mention: tau, kappa, delta, K, N (=|A|), S, Sp,
/// H, nu, L, eta, lambda, P, x.
const std::vector<std::string>& symbol_registry();
bool is_registered(const std::string& symbol);

/// A monomial  prod symbol^exponent  with a loss marker. Zero exponents are
/// not stored.
class ExponentExpression {
public:
    ExponentExpression() = default;
    ExponentExpression(std::map<std::string, Rational> exponents, Loss loss = Loss::Absolute);

    const std::map<std::string, Rational>& exponents() const noexcept { return exponents_; }
    Rational exponent(const std::string& symbol) const;
    Loss loss() const noexcept { return loss_; }
    void set_loss(Loss loss) noexcept { loss_ = loss; }

    bool is_one() const noexcept { return exponents_.empty(); }
    ExponentExpression operator*(const ExponentExpression& other) const;
    ExponentExpression inverse() const;
    ExponentExpression pow(const Rational& power) const;
    /// Replaces symbol by the given expression raised to the symbol's exponent.
    ExponentExpression substitute(const std::string& symbol, const ExponentExpression& value) const;

    std::string to_string() const;  // e.g. "tau^(50/7) kappa^(-27/7)"
    bool operator==(const ExponentExpression& other) const;

private:
    std::map<std::string, Rational> exponents_;
    Loss loss_ = Loss::Absolute;
};

enum class Direction { LessEq, GreaterEq };

/// lhs <= rhs (or >=), up to the loss marker.
struct Relation {
    ExponentExpression lhs, rhs;
    Direction dir = Direction::LessEq;

    /// The equivalent  m <= 1  monomial.
    ExponentExpression normal() const;
    Loss loss() const noexcept;
    std::string to_string() const;
};

struct InequalityChain {
    std::vector<Relation> steps;
    std::vector<std::string> eliminate;  // in order
    /// Symbol the final relation is solved for; its exponent is scaled to +-1.
    std::optional<std::string> solve_for;
};

/// Fourier-Motzkin elimination over log-linear inequalities. The surviving
/// relation is rescaled so that solve_for (or the first symbol) has exponent
/// +-1 on the left and everything else sits on the right.
/// Errors: InvalidArgument for an empty chain, an unregistered symbol or a
/// symbol that never appears with both signs; ExactFailure when the plan
/// leaves no relation, several independent ones, or more than two symbols.
Relation chain_eliminate(const InequalityChain& chain);

/// Exponent t of var (var = base^t) at which the two expressions agree,
/// treating every other symbol as base. Requires opposite-sign var exponents.
Rational balance(const ExponentExpression& e1, const ExponentExpression& e2, const std::string& var);
/// Common base exponent of both expressions at the balancing point.
Rational balanced_exponent(const ExponentExpression& e1, const ExponentExpression& e2, const std::string& var,
                           const std::string& base);

/// Sum-product exponent from a control exponent a: max(a/2, 29a/(83a+2)).
Rational sum_product_c(const Rational& a);
/// Derives 29a/(83a+2) by eliminating |A+A| from the two bounds on it.
Rational sum_product_c_by_chain(const Rational& a);
/// The a > 0 at which the two branches of sum_product_c meet.
Rational sum_product_crossover();

struct CatalogCheck {
    std::string id;
    std::string kind;  // chain, balance, sum_product, crossover
    std::string expected;
    std::string derived;
    bool pass = false;
};

struct CatalogReport {
    std::vector<CatalogCheck> checks;
    bool all_pass() const;
    /// Throws ExactFailure naming the first mismatch.
    void require_pass() const;
};

/// Chain file format: see data/exponent_catalog.json.
InequalityChain parse_chain(const nlohmann::json& j);
Relation parse_relation(const nlohmann::json& j);
ExponentExpression parse_expression(const nlohmann::json& j, Loss loss = Loss::Absolute);

CatalogReport verify_catalog_json(const nlohmann::json& catalog);
/// Loads the catalog file (default: the installed data directory).
/// Missing file: Io; malformed JSON or entries: Parse.
CatalogReport verify_catalog(const std::string& path = {});
std::string default_catalog_path();

}  // namespace acw
