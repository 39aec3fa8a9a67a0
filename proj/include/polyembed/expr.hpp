/*
   Copyright 2026 The polyembed Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef POLYEMBED_EXPR_HPP
#define POLYEMBED_EXPR_HPP

/*
 * Tokens and the arithmetic-expression sub-grammar shared by problem files,
 * minimal polynomials and serialized certificates:
 *
 *   expr  := term (('+' | '-') term)*
 *   term  := unary (('*' | '/') unary)*
 *   unary := '-' unary | power
 *   power := atom ('^' ['-'] INT)?
 *   atom  := INT | NAME | '(' expr ')'
 */

#include <cctype>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "mpoly.hpp"
#include "rational.hpp"

namespace polyembed {

class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, std::vector<std::string> expected, std::string found)
        : Error(ErrorKind::ParseError, message(line, column, expected, found)),
          line_(line),
          column_(column),
          expected_(std::move(expected)),
          found_(std::move(found)) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::vector<std::string>& expected() const { return expected_; }
    const std::string& found() const { return found_; }

    /// "expected one of ..., found ..." without the position prefix.
    std::string brief() const { return text(expected_, found_); }

private:
    static std::string text(const std::vector<std::string>& expected, const std::string& found) {
        std::string out = expected.size() == 1 ? "expected " : "expected one of ";
        for (std::size_t i = 0; i < expected.size(); ++i) out += (i ? ", " : "") + expected[i];
        return out + ", found " + found;
    }
    static std::string message(int line, int column, const std::vector<std::string>& expected, const std::string& found) {
        return std::to_string(line) + ":" + std::to_string(column) + ": " + text(expected, found);
    }

    int line_, column_;
    std::vector<std::string> expected_;
    std::string found_;
};

/// Unknown identifier, with its position.
class NameError : public Error {
public:
    NameError(int line, int column, const std::string& name, const std::string& what)
        : Error(ErrorKind::UndefinedName, std::to_string(line) + ":" + std::to_string(column) + ": " + what + " '" + name + "'"),
          line_(line),
          column_(column),
          brief_(what + " '" + name + "'") {}
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& brief() const { return brief_; }

private:
    int line_, column_;
    std::string brief_;
};

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Name, Int, String, Symbol, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1, col = 1;

    std::string describe() const {
        switch (kind) {
            case Tok::End: return "end of line";
            case Tok::String: return "string \"" + text + "\"";
            default: return "'" + text + "'";
        }
    }
};

/// Tokenizes one line; '#' starts a comment.
inline std::vector<Token> tokenize(const std::string& src, int line = 1) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto col = [&](std::size_t at) { return static_cast<int>(at) + 1; };
    while (i < src.size()) {
        const unsigned char ch = static_cast<unsigned char>(src[i]);
        if (std::isspace(ch)) {
            ++i;
            continue;
        }
        if (ch == '#') break;
        const std::size_t start = i;
        if (std::isalpha(ch) || ch == '_') {
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
            out.push_back({Tok::Name, src.substr(start, i - start), line, col(start)});
        } else if (std::isdigit(ch)) {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            out.push_back({Tok::Int, src.substr(start, i - start), line, col(start)});
        } else if (ch == '"') {
            ++i;
            while (i < src.size() && src[i] != '"') ++i;
            if (i == src.size()) throw SyntaxError(line, col(start), {"closing '\"'"}, "end of line");
            out.push_back({Tok::String, src.substr(start + 1, i - start - 1), line, col(start)});
            ++i;
        } else if (ch == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::Symbol, "->", line, col(start)});
            i += 2;
        } else if (std::string("+-*/^()[]{},=").find(static_cast<char>(ch)) != std::string::npos) {
            out.push_back({Tok::Symbol, std::string(1, static_cast<char>(ch)), line, col(start)});
            ++i;
        } else {
            // one UTF-8 code point, for the diagnostic
            std::size_t len = 1;
            if (ch >= 0xF0) len = 4;
            else if (ch >= 0xE0) len = 3;
            else if (ch >= 0xC0) len = 2;
            throw SyntaxError(line, col(start), {"name", "number", "operator"}, "'" + src.substr(start, len) + "'");
        }
    }
    out.push_back({Tok::End, "", line, col(src.size())});
    return out;
}

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek() const { return toks_[pos_]; }
    Token next() {
        Token t = toks_[pos_];
        if (t.kind != Tok::End) ++pos_;
        return t;
    }
    bool at_symbol(const std::string& s) const { return peek().kind == Tok::Symbol && peek().text == s; }
    bool at_keyword(const std::string& s) const { return peek().kind == Tok::Name && peek().text == s; }
    bool at_end() const { return peek().kind == Tok::End; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw SyntaxError(peek().line, peek().col, std::move(expected), peek().describe());
    }
    Token expect_symbol(const std::string& s) {
        if (!at_symbol(s)) fail({"'" + s + "'"});
        return next();
    }
    Token expect_keyword(const std::string& s) {
        if (!at_keyword(s)) fail({"'" + s + "'"});
        return next();
    }
    Token expect_name(const std::string& what = "name") {
        if (peek().kind != Tok::Name) fail({what});
        return next();
    }
    void expect_end() {
        if (!at_end()) fail({"end of line"});
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Expressions

struct Expr {
    enum class Op { Num, Name, Add, Sub, Mul, Div, Pow, Neg };
    Op op = Op::Num;
    Rational num;
    std::string name;
    long exponent = 0;
    std::vector<Expr> kids;
    int line = 1, col = 1;
};

namespace detail {

constexpr int kMaxNesting = 200;
constexpr long kMaxExponent = 100000;

inline Expr parse_expr(TokenStream& ts, int depth);

inline Expr parse_atom(TokenStream& ts, int depth) {
    const Token& t = ts.peek();
    Expr e;
    e.line = t.line;
    e.col = t.col;
    if (t.kind == Tok::Int) {
        e.op = Expr::Op::Num;
        e.num = Rational(Integer(ts.next().text));
        return e;
    }
    if (t.kind == Tok::Name) {
        e.op = Expr::Op::Name;
        e.name = ts.next().text;
        return e;
    }
    if (ts.at_symbol("(")) {
        ts.next();
        Expr inner = parse_expr(ts, depth + 1);
        ts.expect_symbol(")");
        return inner;
    }
    ts.fail({"number", "name", "'('", "'-'"});
}

inline Expr parse_power(TokenStream& ts, int depth) {
    Expr base = parse_atom(ts, depth);
    if (!ts.at_symbol("^")) return base;
    Token caret = ts.next();
    bool neg = false;
    if (ts.at_symbol("-")) {
        ts.next();
        neg = true;
    }
    if (ts.peek().kind != Tok::Int) ts.fail({"integer exponent"});
    Token n = ts.next();
    if (n.text.size() > 6 || std::stol(n.text) > kMaxExponent)
        throw SyntaxError(n.line, n.col, {"exponent at most " + std::to_string(kMaxExponent)}, "'" + n.text + "'");
    Expr e;
    e.op = Expr::Op::Pow;
    e.exponent = neg ? -std::stol(n.text) : std::stol(n.text);
    e.line = caret.line;
    e.col = caret.col;
    e.kids.push_back(std::move(base));
    return e;
}

inline Expr parse_unary(TokenStream& ts, int depth) {
    if (depth > kMaxNesting) ts.fail({"shallower nesting"});
    if (ts.at_symbol("-")) {
        Token m = ts.next();
        Expr e;
        e.op = Expr::Op::Neg;
        e.line = m.line;
        e.col = m.col;
        e.kids.push_back(parse_unary(ts, depth + 1));
        return e;
    }
    return parse_power(ts, depth);
}

inline Expr binary(Expr::Op op, Expr a, Expr b, const Token& at) {
    Expr e;
    e.op = op;
    e.line = at.line;
    e.col = at.col;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
}

inline Expr parse_term(TokenStream& ts, int depth) {
    Expr acc = parse_unary(ts, depth);
    while (ts.at_symbol("*") || ts.at_symbol("/")) {
        Token op = ts.next();
        acc = binary(op.text == "*" ? Expr::Op::Mul : Expr::Op::Div, std::move(acc), parse_unary(ts, depth), op);
    }
    return acc;
}

inline Expr parse_expr(TokenStream& ts, int depth) {
    if (depth > kMaxNesting) ts.fail({"shallower nesting"});
    Expr acc = parse_term(ts, depth);
    while (ts.at_symbol("+") || ts.at_symbol("-")) {
        Token op = ts.next();
        acc = binary(op.text == "+" ? Expr::Op::Add : Expr::Op::Sub, std::move(acc), parse_term(ts, depth), op);
    }
    return acc;
}

}  // namespace detail

inline Expr parse_expression(TokenStream& ts) { return detail::parse_expr(ts, 0); }

/// Parses a whole string as one expression.
inline Expr parse_expression(const std::string& text) {
    TokenStream ts(tokenize(text));
    Expr e = parse_expression(ts);
    ts.expect_end();
    return e;
}

/*
 * Folds an expression into any ring type T. `leaf` resolves names, `num`
 * embeds rationals and `div` divides (it decides what is invertible).
 */
template <class T>
struct ExprAlgebra {
    std::function<T(const Expr&)> leaf;
    std::function<T(const Rational&)> num;
    std::function<T(const T&, const T&, const Expr&)> div;
};

template <class T>
T fold(const Expr& e, const ExprAlgebra<T>& alg) {
    switch (e.op) {
        case Expr::Op::Num: return alg.num(e.num);
        case Expr::Op::Name: return alg.leaf(e);
        case Expr::Op::Add: return fold(e.kids[0], alg) + fold(e.kids[1], alg);
        case Expr::Op::Sub: return fold(e.kids[0], alg) - fold(e.kids[1], alg);
        case Expr::Op::Mul: return fold(e.kids[0], alg) * fold(e.kids[1], alg);
        case Expr::Op::Div: return alg.div(fold(e.kids[0], alg), fold(e.kids[1], alg), e);
        case Expr::Op::Neg: return alg.num(Rational(0)) - fold(e.kids[0], alg);
        case Expr::Op::Pow: {
            T base = fold(e.kids[0], alg);
            long k = e.exponent < 0 ? -e.exponent : e.exponent;
            T out = alg.num(Rational(1));
            while (k) {
                if (k & 1) out = out * base;
                k >>= 1;
                if (k) base = base * base;
            }
            return e.exponent < 0 ? alg.div(alg.num(Rational(1)), out, e) : out;
        }
    }
    return alg.num(Rational(0));
}

namespace detail {

inline Error divide_by_zero(const Expr& at) {
    return Error(ErrorKind::PreconditionFailed, std::to_string(at.line) + ":" + std::to_string(at.col) + ": division by zero");
}

/// Generator of the node of `t` named `name`, lifted into t.
inline std::optional<FieldElement> tower_name(const TowerPtr& t, const std::string& name) {
    for (TowerPtr n = t; n && n->kind() != StepKind::Base; n = n->parent())
        if (n->name() == name) return t->lift(n->generator());
    return std::nullopt;
}

}  // namespace detail

/// Element of the tower; names are its generators.
inline FieldElement eval_field(const Expr& e, const TowerPtr& t) {
    ExprAlgebra<FieldElement> alg;
    alg.num = [&](const Rational& q) { return t->from_rational(q); };
    alg.leaf = [&](const Expr& x) {
        if (auto g = detail::tower_name(t, x.name)) return *g;
        throw NameError(x.line, x.col, x.name, "undefined name");
    };
    alg.div = [](const FieldElement& a, const FieldElement& b, const Expr& at) {
        if (b.is_zero()) throw detail::divide_by_zero(at);
        return a * b.inverse();
    };
    return fold(e, alg);
}

/// Polynomial in `var` over the tower; division only by nonzero constants.
inline KPoly eval_kpoly(const Expr& e, const TowerPtr& t, const std::string& var) {
    ExprAlgebra<KPoly> alg;
    alg.num = [&](const Rational& q) { return KPoly::constant(t->from_rational(q)); };
    alg.leaf = [&](const Expr& x) {
        if (x.name == var) return KPoly::monomial(t->one(), 1);
        if (auto g = detail::tower_name(t, x.name)) return KPoly::constant(*g);
        throw NameError(x.line, x.col, x.name, "undefined name");
    };
    alg.div = [&](const KPoly& a, const KPoly& b, const Expr& at) {
        if (b.is_zero()) throw detail::divide_by_zero(at);
        if (b.degree() > 0)
            throw Error(ErrorKind::PreconditionFailed,
                        std::to_string(at.line) + ":" + std::to_string(at.col) + ": division by a non-constant polynomial");
        return a.scaled(b.lead().inverse());
    };
    return fold(e, alg);
}

/// Polynomial over Q in the named variables; division only by nonzero constants.
inline MPoly eval_mpoly(const Expr& e, const std::vector<std::string>& vars) {
    const int n = static_cast<int>(vars.size());
    ExprAlgebra<MPoly> alg;
    alg.num = [&](const Rational& q) { return MPoly::constant(n, q); };
    alg.leaf = [&](const Expr& x) {
        for (int i = 0; i < n; ++i)
            if (vars[static_cast<std::size_t>(i)] == x.name) return MPoly::variable(n, i);
        throw NameError(x.line, x.col, x.name, "undefined name");
    };
    alg.div = [&](const MPoly& a, const MPoly& b, const Expr& at) {
        if (b.is_zero()) throw detail::divide_by_zero(at);
        if (!b.is_constant())
            throw Error(ErrorKind::PreconditionFailed,
                        std::to_string(at.line) + ":" + std::to_string(at.col) + ": division by a non-constant polynomial");
        return a.scaled(Rational(1) / b.constant_value());
    };
    return fold(e, alg);
}

}  // namespace polyembed

#endif  // POLYEMBED_EXPR_HPP
