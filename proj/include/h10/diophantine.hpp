#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace h10 {

using BigInt = boost::multiprecision::cpp_int;

using Exponents = std::vector<std::uint32_t>;

struct Term {
    BigInt coefficient;
    Exponents exponents;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Candidate solution (x_1, ..., x_k); read as occupation numbers when it
/// comes from a Fock state.
using EvaluationPoint = std::vector<std::uint64_t>;

/// Multivariate polynomial with integer coefficients in canonical form:
/// unique exponent tuples, no zero coefficients, graded lexicographic order
/// (highest total degree first).
class Polynomial {
public:
    /// Canonicalizes `terms`: merges equal exponent tuples, drops zero
    /// coefficients and sorts. Throws DimensionError when a tuple length
    /// differs from the number of variables, ConfigError when there are no
    /// variables.
    Polynomial(std::vector<std::string> variables, std::vector<Term> terms);

    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t arity() const noexcept { return variables_.size(); }
    std::uint32_t degree() const noexcept;

    /// Renders in the input grammar, e.g. `x^2 + 3*x*y - 2`. The zero
    /// polynomial prints as `0*x`, which keeps its variables on re-parse.
    std::string to_string() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<std::string> variables_;
    std::vector<Term> terms_;
};

/// Grammar:
///   expr   := ["+"|"-"] term (("+"|"-") term)*
///   term   := factor ("*" factor)*
///   factor := base ("^" nat)?
///   base   := nat | ident | "(" expr ")"
/// Variables are ordered by first appearance in the text.
Polynomial parse_polynomial(std::string_view text);

BigInt evaluate(const Polynomial& p, const EvaluationPoint& at);
BigInt evaluate_squared(const Polynomial& p, const EvaluationPoint& at);

struct BruteForceResult {
    BigInt min_value;
    std::vector<EvaluationPoint> argmin; // lexicographic order
    std::uint64_t bound = 0;
};

inline constexpr std::uint64_t kDefaultSearchGuard = 100'000'000;

/// Exhaustive scan of [0, bound]^k for the minimum of D^2. Throws GuardError
/// when (bound+1)^k exceeds `max_points`.
BruteForceResult brute_force_minimum(const Polynomial& p, std::uint64_t bound,
                                     std::uint64_t max_points = kDefaultSearchGuard);

} // namespace h10
