#pragma once

// Recursive-descent parser for rational-function expressions:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')? atom ('^' uint)?
//   atom   := int | var | '(' expr ')'

#include "azumaya/exact/ratfunc.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace azumaya {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column), message_(msg) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::size_t line_, column_;
    std::string message_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { integer, variable, neg, add, sub, mul, div, pow, group };
    Kind kind = Kind::integer;
    mpz_class value;        // integer
    char var = 't';         // variable: 't', 's' or 'l'
    unsigned exponent = 0;  // pow
    ExprPtr lhs, rhs;       // unary nodes use lhs
    std::size_t line = 1, column = 1;
};

namespace detail {

class ExprParser {
public:
    ExprParser(const std::string& src, const std::set<char>& allowed) : s_(src), allowed_(allowed) {}

    ExprPtr parse() {
        skip();
        if (pos_ >= s_.size()) fail("empty expression");
        auto e = expr();
        skip();
        if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
        return e;
    }

private:
    const std::string& s_;
    const std::set<char>& allowed_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
    int depth_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    std::shared_ptr<Expr> node(Expr::Kind k) const {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->line = line_;
        e->column = col_;
        return e;
    }
    ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b, std::size_t line, std::size_t col) const {
        auto e = node(k);
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        e->line = line;
        e->column = col;
        return e;
    }

    ExprPtr expr() {
        auto e = term();
        while (peek('+') || peek('-')) {
            auto k = s_[pos_] == '+' ? Expr::Kind::add : Expr::Kind::sub;
            std::size_t l = line_, c = col_;
            advance();
            e = binary(k, e, term(), l, c);
        }
        return e;
    }

    ExprPtr term() {
        auto e = factor();
        while (peek('*') || peek('/')) {
            auto k = s_[pos_] == '*' ? Expr::Kind::mul : Expr::Kind::div;
            std::size_t l = line_, c = col_;
            advance();
            e = binary(k, e, factor(), l, c);
        }
        return e;
    }

    ExprPtr factor() {
        std::shared_ptr<Expr> neg;
        if (peek('-')) {
            neg = node(Expr::Kind::neg);
            advance();
        }
        ExprPtr e = atom();
        if (peek('^')) {
            auto p = node(Expr::Kind::pow);
            advance();
            skip();
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("expected a nonnegative integer exponent");
            std::string digits;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                digits += s_[pos_];
                advance();
            }
            if (digits.size() > 4 || std::stoul(digits) > 1000) fail("exponent too large");
            p->exponent = static_cast<unsigned>(std::stoul(digits));
            p->lhs = e;
            e = p;
        }
        if (neg) {
            neg->lhs = e;
            return neg;
        }
        return e;
    }

    ExprPtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char ch = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            auto e = node(Expr::Kind::integer);
            std::string digits;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                digits += s_[pos_];
                advance();
            }
            e->value = mpz_class(digits, 10);
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            auto e = node(Expr::Kind::variable);
            std::string name;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
                name += s_[pos_];
                advance();
            }
            if (name == "lambda") name = "l";
            if (name != "t" && name != "s" && name != "l") {
                line_ = e->line;
                col_ = e->column;
                fail("unknown variable '" + name + "'");
            }
            if (!allowed_.count(name[0])) {
                line_ = e->line;
                col_ = e->column;
                fail("variable '" + name + "' not allowed here");
            }
            e->var = name[0];
            return e;
        }
        if (ch == '(') {
            if (++depth_ > 200) fail("nesting too deep");
            auto e = node(Expr::Kind::group);
            advance();
            e->lhs = expr();
            if (!peek(')')) fail("expected ')'");
            advance();
            --depth_;
            return e;
        }
        fail(std::string("unexpected '") + ch + "'");
    }
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& src, const std::set<char>& allowed = {'t'}) {
    return detail::ExprParser(src, allowed).parse();
}

/// Value of the expression in Q(t), with s replaced by `s_value`.
inline RatFunc to_ratfunc(const Expr& e, const std::optional<Rat>& s_value = std::nullopt) {
    using K = Expr::Kind;
    switch (e.kind) {
    case K::integer: return RatFunc(Rat(e.value));
    case K::variable:
        if (e.var == 't') return RatFunc::var();
        if (e.var == 's' && s_value) return RatFunc(*s_value);
        throw ParseError(e.line, e.column, std::string("variable '") + e.var + "' has no value here");
    case K::neg: return -to_ratfunc(*e.lhs, s_value);
    case K::group: return to_ratfunc(*e.lhs, s_value);
    case K::pow: {
        RatFunc b = to_ratfunc(*e.lhs, s_value), out(Rat(1));
        for (unsigned i = 0; i < e.exponent; ++i) out *= b;
        return out;
    }
    case K::add: return to_ratfunc(*e.lhs, s_value) + to_ratfunc(*e.rhs, s_value);
    case K::sub: return to_ratfunc(*e.lhs, s_value) - to_ratfunc(*e.rhs, s_value);
    case K::mul: return to_ratfunc(*e.lhs, s_value) * to_ratfunc(*e.rhs, s_value);
    case K::div: {
        RatFunc d = to_ratfunc(*e.rhs, s_value);
        if (d.is_zero()) throw ParseError(e.line, e.column, "division by zero polynomial");
        return to_ratfunc(*e.lhs, s_value) / d;
    }
    }
    throw std::logic_error("unreachable");
}

inline bool mentions(const Expr& e, char var) {
    if (e.kind == Expr::Kind::variable) return e.var == var;
    return (e.lhs && mentions(*e.lhs, var)) || (e.rhs && mentions(*e.rhs, var));
}

inline RatFunc parse_ratfunc(const std::string& src, const std::set<char>& allowed = {'t'}) {
    return to_ratfunc(*parse_expr(src, allowed));
}

/// Text of the expression, reparsing to the same tree.
inline std::string expr_str(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
    case K::integer: return e.value.get_str();
    case K::variable: return std::string(1, e.var);
    case K::neg: return "-" + expr_str(*e.lhs);
    case K::group: return "(" + expr_str(*e.lhs) + ")";
    case K::pow: return expr_str(*e.lhs) + "^" + std::to_string(e.exponent);
    case K::add: return expr_str(*e.lhs) + " + " + expr_str(*e.rhs);
    case K::sub: return expr_str(*e.lhs) + " - " + expr_str(*e.rhs);
    case K::mul: return expr_str(*e.lhs) + "*" + expr_str(*e.rhs);
    case K::div: return expr_str(*e.lhs) + "/" + expr_str(*e.rhs);
    }
    throw std::logic_error("unreachable");
}

}  // namespace azumaya
