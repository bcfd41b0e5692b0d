#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "jetcal/jet.hpp"

namespace jetcal {
namespace detail {

enum class Tok : unsigned char {
    End, Newline, Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Equals
};

struct Token {
    Tok type{Tok::End};
    std::string text;
    Rational number{0};
    bool integral{false};  // Number with no fractional part
    int line{1}, col{1};
};

class Lexer {
    std::string_view src_;
    std::size_t pos_{0};
    int line_{1}, col_{1};

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char take() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size()) {
            char c = peek();
            if (c == '#') {  // comment to end of line
                while (pos_ < src_.size() && peek() != '\n') take();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                take();
                continue;
            }
            break;
        }
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= src_.size()) return t;
        char c = take();
        switch (c) {
            case '\n': t.type = Tok::Newline; return t;
            case '+': t.type = Tok::Plus; return t;
            case '-': t.type = Tok::Minus; return t;
            case '*': t.type = Tok::Star; return t;
            case '/': t.type = Tok::Slash; return t;
            case '^': t.type = Tok::Caret; return t;
            case '(': t.type = Tok::LParen; return t;
            case ')': t.type = Tok::RParen; return t;
            case '=': t.type = Tok::Equals; return t;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            t.type = Tok::Number;
            std::string digits(1, c);
            while (std::isdigit(static_cast<unsigned char>(peek()))) digits += take();
            std::string frac;
            if (peek() == '.') {
                take();
                while (std::isdigit(static_cast<unsigned char>(peek()))) frac += take();
                if (frac.empty())
                    throw SyntaxError(t.line, t.col, "digits expected after decimal point");
            }
            // Decimal literals convert exactly: 0.25 becomes 1/4.  Leading
            // zeros must be stripped or the big-integer constructor would
            // read the string as an octal literal.
            std::string mantissa = digits + frac;
            mantissa.erase(0, std::min(mantissa.find_first_not_of('0'), mantissa.size() - 1));
            Integer num(mantissa);
            Integer den(1);
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            t.number = Rational(num, den);
            t.integral = frac.empty();
            t.text = digits + (frac.empty() ? "" : "." + frac);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.type = Tok::Ident;
            std::string id(1, c);
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') id += take();
            while (peek() == '\'') {
                id += take();  // primes become part of the identifier: y1', y1''
            }
            t.text = std::move(id);
            return t;
        }
        throw SyntaxError(t.line, t.col, std::string("unexpected character '") + c + "'");
    }
};

// Pratt-style expression parser over one statement. `m` bounds coordinate
// indices; pass 0 to defer the bound (used only internally).
class ExprParser {
    Lexer& lex_;
    Token cur_;
    int m_;

    void advance() { cur_ = lex_.next(); }

    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(cur_.line, cur_.col, msg);
    }

    Var resolve_var(const Token& t) const {
        const std::string& id = t.text;
        std::size_t primes = 0;
        while (primes < id.size() && id[id.size() - 1 - primes] == '\'') ++primes;
        std::string base = id.substr(0, id.size() - primes);
        if (base == "x") {
            if (primes) throw SyntaxError(t.line, t.col, "x cannot carry primes");
            return Var::x();
        }
        if (base.size() < 2 || (base[0] != 'y' && base[0] != 'p' && base[0] != 'q'))
            throw SyntaxError(t.line, t.col, "unknown variable '" + id + "'");
        for (std::size_t i = 1; i < base.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(base[i])))
                throw SyntaxError(t.line, t.col, "unknown variable '" + id + "'");
        int idx = 0;
        try {
            idx = std::stoi(base.substr(1));
        } catch (const std::out_of_range&) {
            throw IndexOutOfRange("coordinate index overflow in '" + id + "'");
        }
        if (primes) {
            if (base[0] != 'y')
                throw SyntaxError(t.line, t.col, "primes are only defined on y variables");
            if (primes > 2)
                throw SyntaxError(t.line, t.col,
                                  "y" + std::to_string(idx) + "''' is what the system defines, "
                                  "not a coordinate");
        }
        if (idx < 1)
            throw IndexOutOfRange("coordinate index must start at 1: '" + id + "' at " +
                                  std::to_string(t.line) + ":" + std::to_string(t.col));
        if (m_ > 0 && idx > m_)
            throw IndexOutOfRange("'" + base + "' exceeds system dimension m = " +
                                  std::to_string(m_) + " at " + std::to_string(t.line) + ":" +
                                  std::to_string(t.col));
        switch (base[0]) {
            case 'y': return primes == 0 ? Var::y(idx) : (primes == 1 ? Var::p(idx) : Var::q(idx));
            case 'p': return Var::p(idx);
            default:  return Var::q(idx);
        }
    }

    Expr primary() {
        Token t = cur_;
        switch (t.type) {
            case Tok::Number:
                advance();
                return Expr::constant(t.number);
            case Tok::LParen: {
                advance();
                Expr e = expression(0);
                if (cur_.type != Tok::RParen) fail("expected ')'");
                advance();
                return e;
            }
            case Tok::Minus:
                advance();
                return -expression(27);  // binds below ^, above * and /
            case Tok::Ident: {
                advance();
                if (cur_.type == Tok::LParen) {
                    Fn fn;
                    if (t.text == "sin") fn = Fn::sin;
                    else if (t.text == "cos") fn = Fn::cos;
                    else if (t.text == "exp") fn = Fn::exp;
                    else if (t.text == "ln") fn = Fn::ln;
                    else
                        throw UnknownFunction("unknown function '" + t.text + "' at " +
                                              std::to_string(t.line) + ":" +
                                              std::to_string(t.col));
                    advance();
                    Expr arg = expression(0);
                    if (cur_.type != Tok::RParen) fail("expected ')'");
                    advance();
                    return Expr::apply(fn, arg);
                }
                return Expr::variable(resolve_var(t));
            }
            default:
                fail("expected a number, variable, function call, or '('");
        }
    }

    long long integer_exponent() {
        bool negate = false;
        if (cur_.type == Tok::Minus) {
            negate = true;
            advance();
        }
        if (cur_.type != Tok::Number || !cur_.integral)
            fail("exponent must be an integer literal");
        const Rational& r = cur_.number;
        long long v = numerator(r).convert_to<long long>();
        advance();
        return negate ? -v : v;
    }

    static int lbp(Tok t) {
        switch (t) {
            case Tok::Plus:
            case Tok::Minus: return 10;
            case Tok::Star:
            case Tok::Slash: return 20;
            case Tok::Caret: return 30;
            default: return 0;
        }
    }

public:
    ExprParser(Lexer& lex, int m) : lex_(lex), m_(m) { advance(); }

    const Token& current() const { return cur_; }

    Expr expression(int rbp) {
        Expr left = primary();
        while (lbp(cur_.type) > rbp) {
            Tok op = cur_.type;
            Token opTok = cur_;
            advance();
            switch (op) {
                case Tok::Plus:  left = left + expression(10); break;
                case Tok::Minus: left = left - expression(10); break;
                case Tok::Star:  left = left * expression(20); break;
                case Tok::Slash: {
                    Expr rhs = expression(20);
                    try {
                        left = left / rhs;
                    } catch (const DivisionByZeroExpr&) {
                        throw DivisionByZeroExpr("division by zero at " +
                                                 std::to_string(opTok.line) + ":" +
                                                 std::to_string(opTok.col));
                    }
                    break;
                }
                case Tok::Caret: left = Expr::pow(left, integer_exponent()); break;
                default: break;
            }
        }
        return left;
    }
};

}  // namespace detail

// Parse a single expression (no statements). Coordinate indices are checked
// against m.
inline Expr parse_expression(std::string_view text, int m) {
    detail::Lexer lex(text);
    detail::ExprParser p(lex, m);
    Expr e = p.expression(0);
    detail::Token t = p.current();
    while (t.type == detail::Tok::Newline) t = lex.next();
    if (t.type != detail::Tok::End)
        throw SyntaxError(t.line, t.col, "unexpected trailing input");
    return e;
}

// Parse the system description language:
//   m = 2
//   f1 = 3*q1*(p1*q1 + p2*q2)/(1 + p1^2 + p2^2)
//   f2 = ...
// '#' starts a comment; y1' and y1'' may be written for p1 and q1.
inline OdeSystem parse_system(std::string_view text) {
    detail::Lexer lex(text);
    detail::Token t = lex.next();
    auto skip_newlines = [&] {
        while (t.type == detail::Tok::Newline) t = lex.next();
    };

    skip_newlines();
    if (t.type != detail::Tok::Ident || t.text != "m")
        throw SyntaxError(t.line, t.col, "the first statement must define m");
    t = lex.next();
    if (t.type != detail::Tok::Equals) throw SyntaxError(t.line, t.col, "expected '=' after m");
    t = lex.next();
    if (t.type != detail::Tok::Number || !t.integral)
        throw SyntaxError(t.line, t.col, "m must be an integer literal");
    const long long m_ll = numerator(t.number).convert_to<long long>();
    if (m_ll < 2)
        throw DimensionTooSmall("m = " + std::to_string(m_ll) + " is below the minimum of 2");
    if (m_ll > 64) throw SyntaxError(t.line, t.col, "m is unreasonably large");
    const int m = static_cast<int>(m_ll);
    t = lex.next();
    if (t.type != detail::Tok::Newline && t.type != detail::Tok::End)
        throw SyntaxError(t.line, t.col, "unexpected trailing input after m");

    std::vector<std::optional<Expr>> defs(static_cast<std::size_t>(m));
    while (true) {
        if (t.type == detail::Tok::Newline) {
            t = lex.next();
            continue;
        }
        if (t.type == detail::Tok::End) break;
        if (t.type != detail::Tok::Ident || t.text.size() < 2 || t.text[0] != 'f')
            throw SyntaxError(t.line, t.col, "expected a definition f<i> = <expression>");
        for (std::size_t i = 1; i < t.text.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t.text[i])))
                throw SyntaxError(t.line, t.col, "expected a definition f<i> = <expression>");
        int idx = 0;
        try {
            idx = std::stoi(t.text.substr(1));
        } catch (const std::out_of_range&) {
            throw IndexOutOfRange("equation index overflow in '" + t.text + "'");
        }
        if (idx < 1 || idx > m)
            throw IndexOutOfRange("f" + std::to_string(idx) + " is outside 1.." +
                                  std::to_string(m) + " at " + std::to_string(t.line) + ":" +
                                  std::to_string(t.col));
        if (defs[static_cast<std::size_t>(idx - 1)])
            throw SyntaxError(t.line, t.col, "duplicate definition of f" + std::to_string(idx));
        detail::Token eq = lex.next();
        if (eq.type != detail::Tok::Equals) throw SyntaxError(eq.line, eq.col, "expected '='");
        detail::ExprParser p(lex, m);
        defs[static_cast<std::size_t>(idx - 1)] = p.expression(0);
        t = p.current();
        if (t.type != detail::Tok::Newline && t.type != detail::Tok::End)
            throw SyntaxError(t.line, t.col, "unexpected trailing input");
        if (t.type == detail::Tok::Newline) t = lex.next();
    }

    std::vector<Expr> rhs;
    for (int i = 1; i <= m; ++i) {
        if (!defs[static_cast<std::size_t>(i - 1)])
            throw SyntaxError(t.line, t.col, "missing definition for f" + std::to_string(i));
        rhs.push_back(*defs[static_cast<std::size_t>(i - 1)]);
    }
    return OdeSystem(m, std::move(rhs));
}

}  // namespace jetcal
