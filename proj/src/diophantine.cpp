#include "h10/diophantine.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "h10/error.hpp"

namespace h10 {

namespace {

std::uint32_t total_degree(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

// Graded lexicographic, descending.
bool grlex_before(const Exponents& a, const Exponents& b) {
    const auto da = total_degree(a);
    const auto db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
}

using TermMap = std::map<Exponents, BigInt>;

void add_into(TermMap& acc, const Exponents& e, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = acc.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) acc.erase(it);
    }
}

TermMap multiply(const TermMap& a, const TermMap& b) {
    TermMap out;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            Exponents e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            add_into(out, e, ca * cb);
        }
    }
    return out;
}

TermMap constant(std::size_t k, const BigInt& c) {
    TermMap m;
    add_into(m, Exponents(k, 0), c);
    return m;
}

// ---------------------------------------------------------------- lexer

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(c)) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
            continue;
        }
        if (std::isalpha(c)) {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
            continue;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            default:
                throw ParseError(std::string("unexpected character '") + s[i] + "'", start);
        }
        out.push_back({kind, std::string(1, s[i]), start});
        ++i;
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

// ---------------------------------------------------------------- parser

constexpr std::uint32_t kMaxExponent = 64;

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<std::string> vars)
        : toks_(std::move(tokens)), vars_(std::move(vars)) {}

    TermMap parse() {
        TermMap result = expr();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return result;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }

    TermMap expr() {
        TermMap acc;
        BigInt sign = 1;
        if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            sign = take().kind == Tok::Minus ? -1 : 1;
        }
        for (;;) {
            for (const auto& [e, c] : term()) add_into(acc, e, sign * c);
            if (peek().kind == Tok::Plus) {
                sign = 1;
            } else if (peek().kind == Tok::Minus) {
                sign = -1;
            } else {
                return acc;
            }
            take();
        }
    }

    TermMap term() {
        TermMap acc = factor();
        while (peek().kind == Tok::Star) {
            take();
            acc = multiply(acc, factor());
        }
        return acc;
    }

    TermMap factor() {
        TermMap b = base();
        if (peek().kind != Tok::Caret) return b;
        take();
        if (peek().kind != Tok::Number) fail("exponent must be a non-negative integer literal");
        const Token& t = take();
        if (t.text.size() > 3 || std::stoul(t.text) > kMaxExponent) {
            throw ParseError("exponent exceeds " + std::to_string(kMaxExponent), t.pos);
        }
        auto n = static_cast<std::uint32_t>(std::stoul(t.text));
        TermMap result = constant(vars_.size(), 1);
        for (std::uint32_t i = 0; i < n; ++i) result = multiply(result, b);
        return result;
    }

    TermMap base() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number: {
                take();
                return constant(vars_.size(), BigInt(t.text));
            }
            case Tok::Ident: {
                take();
                const auto idx = static_cast<std::size_t>(
                    std::find(vars_.begin(), vars_.end(), t.text) - vars_.begin());
                Exponents e(vars_.size(), 0);
                e[idx] = 1;
                TermMap m;
                m.emplace(std::move(e), 1);
                return m;
            }
            case Tok::LParen: {
                take();
                TermMap inner = expr();
                if (peek().kind != Tok::RParen) fail("expected ')'");
                take();
                return inner;
            }
            case Tok::End:
                fail("unexpected end of input");
            default:
                fail("unexpected '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    std::vector<std::string> vars_;
    std::size_t pos_ = 0;
};

} // namespace

Polynomial::Polynomial(std::vector<std::string> variables, std::vector<Term> terms)
    : variables_(std::move(variables)) {
    if (variables_.empty()) throw ConfigError("polynomial must have at least one variable");
    TermMap merged;
    for (auto& t : terms) {
        if (t.exponents.size() != variables_.size()) {
            throw DimensionError("term has " + std::to_string(t.exponents.size()) +
                                 " exponents, expected " + std::to_string(variables_.size()));
        }
        add_into(merged, t.exponents, t.coefficient);
    }
    terms_.reserve(merged.size());
    for (auto& [e, c] : merged) terms_.push_back({c, e});
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return grlex_before(a.exponents, b.exponents); });
}

std::uint32_t Polynomial::degree() const noexcept {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, total_degree(t.exponents));
    return d;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) {
        std::string out = "0";
        for (const auto& v : variables_) out += "*" + v;
        return out;
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        const bool negative = t.coefficient < 0;
        const BigInt magnitude = negative ? BigInt(-t.coefficient) : t.coefficient;
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;

        std::vector<std::string> factors;
        for (std::size_t i = 0; i < variables_.size(); ++i) {
            const auto e = t.exponents[i];
            if (e == 0) continue;
            factors.push_back(e == 1 ? variables_[i] : variables_[i] + "^" + std::to_string(e));
        }
        if (magnitude != 1 || factors.empty()) factors.insert(factors.begin(), magnitude.str());
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) os << '*';
            os << factors[i];
        }
    }
    // Keep constants parseable: the grammar needs at least one variable.
    if (degree() == 0) {
        os << " + 0";
        for (const auto& v : variables_) os << '*' << v;
    }
    return os.str();
}

Polynomial parse_polynomial(std::string_view text) {
    auto tokens = tokenize(text);
    if (tokens.size() == 1) throw ParseError("empty input", 0);

    std::vector<std::string> vars;
    for (const auto& t : tokens) {
        if (t.kind == Tok::Ident && std::find(vars.begin(), vars.end(), t.text) == vars.end()) {
            vars.push_back(t.text);
        }
    }
    if (vars.empty()) throw ParseError("polynomial has no variables", 0);

    const std::size_t k = vars.size();
    TermMap map = Parser(std::move(tokens), vars).parse();
    std::vector<Term> terms;
    terms.reserve(map.size());
    for (auto& [e, c] : map) {
        Exponents padded = e;
        padded.resize(k, 0);
        terms.push_back({c, std::move(padded)});
    }
    return Polynomial(std::move(vars), std::move(terms));
}

BigInt evaluate(const Polynomial& p, const EvaluationPoint& at) {
    if (at.size() != p.arity()) {
        throw DimensionError("evaluation point has " + std::to_string(at.size()) +
                             " coordinates, polynomial has " + std::to_string(p.arity()) +
                             " variables");
    }
    BigInt sum = 0;
    for (const auto& t : p.terms()) {
        BigInt value = t.coefficient;
        for (std::size_t i = 0; i < at.size(); ++i) {
            if (t.exponents[i] != 0) value *= boost::multiprecision::pow(BigInt(at[i]), t.exponents[i]);
        }
        sum += value;
    }
    return sum;
}

BigInt evaluate_squared(const Polynomial& p, const EvaluationPoint& at) {
    const BigInt v = evaluate(p, at);
    return v * v;
}

BruteForceResult brute_force_minimum(const Polynomial& p, std::uint64_t bound,
                                     std::uint64_t max_points) {
    const std::size_t k = p.arity();
    // (bound+1)^k with early exit so it cannot overflow.
    std::uint64_t points = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (bound + 1 == 0 || points > max_points / (bound + 1)) {
            throw GuardError("search space (" + std::to_string(bound) + "+1)^" +
                             std::to_string(k) + " exceeds guard of " +
                             std::to_string(max_points) + " points");
        }
        points *= bound + 1;
    }

    BruteForceResult result;
    result.bound = bound;
    EvaluationPoint point(k, 0);
    bool have = false;
    for (std::uint64_t n = 0; n < points; ++n) {
        const BigInt value = evaluate_squared(p, point);
        if (!have || value < result.min_value) {
            result.min_value = value;
            result.argmin.clear();
            have = true;
        }
        if (value == result.min_value) result.argmin.push_back(point);

        // Odometer increment, last coordinate fastest: yields lexicographic order.
        for (std::size_t i = k; i-- > 0;) {
            if (point[i] < bound) {
                ++point[i];
                break;
            }
            point[i] = 0;
        }
    }
    return result;
}

} // namespace h10
