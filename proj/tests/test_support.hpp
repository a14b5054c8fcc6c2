// Test-only helpers: the corpus loader and oracles that do not share code
// paths with the library routines they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "h10/diophantine.hpp"

namespace h10::test {

struct CorpusEntry {
    std::string text;
    std::uint64_t cutoff;
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<CorpusEntry> load_corpus(const std::string& path = H10_CORPUS_FILE) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus " + path);
    std::vector<CorpusEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto semi = line.find(';');
        out.push_back({trim(line.substr(0, semi)), std::stoull(trim(line.substr(semi + 1)))});
    }
    return out;
}

/// Normalized truncated coherent state e^{-|a|^2/2} sum_n a^n / sqrt(n!) |n>.
inline Eigen::VectorXcd coherent_state(std::complex<double> alpha, std::size_t cutoff) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(cutoff + 1));
    std::complex<double> term = std::exp(-std::norm(alpha) / 2.0);
    for (std::size_t n = 0; n <= cutoff; ++n) {
        if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
        v[static_cast<Eigen::Index>(n)] = term;
    }
    return v / v.norm();
}

inline BigInt binomial(unsigned n, unsigned k) {
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// ---------------------------------------------------------------- expression trees

/// Random expression over the grammar, evaluated directly with exact
/// arithmetic. Serves as the oracle for parse + canonicalize + evaluate.
struct Expr {
    enum Kind { Num, Var, Add, Sub, Mul, Pow } kind;
    std::uint64_t value = 0; // Num literal, Var index, Pow exponent
    std::unique_ptr<Expr> lhs, rhs;

    std::string render(const std::vector<std::string>& names) const {
        switch (kind) {
            case Num: return std::to_string(value);
            case Var: return names[value];
            case Add: return "(" + lhs->render(names) + " + " + rhs->render(names) + ")";
            case Sub: return "(" + lhs->render(names) + " - " + rhs->render(names) + ")";
            case Mul: return lhs->render(names) + "*" + rhs->render(names);
            case Pow: return "(" + lhs->render(names) + ")^" + std::to_string(value);
        }
        return "";
    }

    BigInt eval(const std::vector<std::uint64_t>& at) const {
        switch (kind) {
            case Num: return BigInt(value);
            case Var: return BigInt(at[value]);
            case Add: return lhs->eval(at) + rhs->eval(at);
            case Sub: return lhs->eval(at) - rhs->eval(at);
            case Mul: return lhs->eval(at) * rhs->eval(at);
            case Pow: {
                BigInt r = 1;
                const BigInt b = lhs->eval(at);
                for (std::uint64_t i = 0; i < value; ++i) r *= b;
                return r;
            }
        }
        return 0;
    }
};

inline std::unique_ptr<Expr> random_expr(std::mt19937_64& rng, std::size_t vars, int depth) {
    auto e = std::make_unique<Expr>();
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
    switch (pick(rng)) {
        case 0:
            e->kind = Expr::Num;
            e->value = rng() % 7;
            break;
        case 1:
            e->kind = Expr::Var;
            e->value = rng() % vars;
            break;
        case 2: e->kind = Expr::Add; break;
        case 3: e->kind = Expr::Sub; break;
        case 4: e->kind = Expr::Mul; break;
        default:
            e->kind = Expr::Pow;
            e->value = rng() % 4;
            e->lhs = random_expr(rng, vars, depth - 2);
            return e;
    }
    if (e->kind == Expr::Add || e->kind == Expr::Sub || e->kind == Expr::Mul) {
        e->lhs = random_expr(rng, vars, depth - 1);
        e->rhs = random_expr(rng, vars, depth - 1);
    }
    return e;
}

} // namespace h10::test
