#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "jetcal/errors.hpp"
#include "jetcal/numbers.hpp"
#include "jetcal/var.hpp"

namespace jetcal {

enum class Fn : unsigned char { sin, cos, exp, ln };

inline const char* fn_name(Fn f) {
    switch (f) {
        case Fn::sin: return "sin";
        case Fn::cos: return "cos";
        case Fn::exp: return "exp";
        case Fn::ln:  return "ln";
    }
    return "?";
}

// Immutable expression tree. Construction goes through the factory
// functions below, which fold constants and flatten nested sums and
// products; deep canonicalization is the job of normalize() in
// rational_form.hpp, not of the tree.
class Expr {
public:
    enum class Kind : unsigned char { Const, Variable, Sum, Product, IntPow, Apply };

private:
    struct Node {
        Kind kind{Kind::Const};
        Rational value{0};        // Const
        Var var{};                // Variable
        Fn fn{Fn::sin};           // Apply
        long long exponent{0};    // IntPow, never 0
        std::vector<Expr> kids;   // Sum/Product operands; IntPow base; Apply argument
    };
    std::shared_ptr<const Node> node_;

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Expr make(Node&& n) { return Expr(std::make_shared<const Node>(std::move(n))); }

public:
    Expr() : Expr(constant(Rational(0))) {}

    Kind kind() const { return node_->kind; }
    const Rational& value() const { return node_->value; }
    Var var() const { return node_->var; }
    Fn fn() const { return node_->fn; }
    long long exponent() const { return node_->exponent; }
    const std::vector<Expr>& operands() const { return node_->kids; }
    // Stable identity of the underlying node, used for memoization.
    const void* id() const { return node_.get(); }

    bool is_const() const { return kind() == Kind::Const; }
    bool is_const(long long v) const { return is_const() && value() == v; }

    static Expr constant(Rational r) {
        Node n;
        n.kind = Kind::Const;
        n.value = std::move(r);
        return make(std::move(n));
    }

    static Expr integer(long long v) { return constant(Rational(v)); }

    static Expr variable(Var v) {
        Node n;
        n.kind = Kind::Variable;
        n.var = v;
        return make(std::move(n));
    }

    static Expr sum(std::vector<Expr> terms) {
        std::vector<Expr> flat;
        Rational acc(0);
        for (auto& t : terms) {
            if (t.kind() == Kind::Sum) {
                for (const auto& k : t.operands()) {
                    if (k.is_const()) acc += k.value();
                    else flat.push_back(k);
                }
            } else if (t.is_const()) {
                acc += t.value();
            } else {
                flat.push_back(std::move(t));
            }
        }
        if (acc != 0) flat.push_back(constant(acc));
        if (flat.empty()) return integer(0);
        if (flat.size() == 1) return flat.front();
        Node n;
        n.kind = Kind::Sum;
        n.kids = std::move(flat);
        return make(std::move(n));
    }

    static Expr product(std::vector<Expr> factors) {
        std::vector<Expr> flat;
        Rational acc(1);
        for (auto& t : factors) {
            if (t.kind() == Kind::Product) {
                for (const auto& k : t.operands()) {
                    if (k.is_const()) acc *= k.value();
                    else flat.push_back(k);
                }
            } else if (t.is_const()) {
                acc *= t.value();
            } else {
                flat.push_back(std::move(t));
            }
        }
        if (acc == 0) return integer(0);
        if (acc != 1) flat.insert(flat.begin(), constant(acc));
        if (flat.empty()) return integer(1);
        if (flat.size() == 1) return flat.front();
        Node n;
        n.kind = Kind::Product;
        n.kids = std::move(flat);
        return make(std::move(n));
    }

    static Expr pow(Expr base, long long e) {
        if (e == 0) return integer(1);
        if (e == 1) return base;
        if (base.is_const()) {
            if (base.value() == 0) {
                if (e < 0) throw DivisionByZeroExpr("constant zero raised to a negative power");
                return integer(0);
            }
            return constant(rational_pow(base.value(), e));
        }
        if (base.kind() == Kind::IntPow) {
            // (b^k)^e = b^(k*e); fine for integer exponents.
            return pow(base.operands().front(), base.exponent() * e);
        }
        Node n;
        n.kind = Kind::IntPow;
        n.exponent = e;
        n.kids.push_back(std::move(base));
        return make(std::move(n));
    }

    static Expr apply(Fn f, Expr arg) {
        Node n;
        n.kind = Kind::Apply;
        n.fn = f;
        n.kids.push_back(std::move(arg));
        return make(std::move(n));
    }
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
inline Expr operator-(const Expr& a) { return Expr::product({Expr::integer(-1), a}); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, Expr::pow(b, -1)}); }
inline Expr operator*(const Rational& c, const Expr& e) { return Expr::product({Expr::constant(c), e}); }
inline Expr operator*(long long c, const Expr& e) { return Expr::product({Expr::integer(c), e}); }
inline Expr operator+(const Expr& e, const Rational& c) { return e + Expr::constant(c); }
inline Expr operator+(const Rational& c, const Expr& e) { return Expr::constant(c) + e; }
inline Expr operator-(const Expr& e, const Rational& c) { return e - Expr::constant(c); }
inline Expr operator-(const Rational& c, const Expr& e) { return Expr::constant(c) - e; }

inline Expr pow(const Expr& base, long long e) { return Expr::pow(base, e); }

inline Expr sin(const Expr& e) { return Expr::apply(Fn::sin, e); }
inline Expr cos(const Expr& e) { return Expr::apply(Fn::cos, e); }
inline Expr exp(const Expr& e) { return Expr::apply(Fn::exp, e); }
inline Expr ln(const Expr& e) { return Expr::apply(Fn::ln, e); }

// Total structural order; gives atoms (variables, then function applications)
// a canonical ordering and makes tree equality decidable.
inline int structural_compare(const Expr& a, const Expr& b) {
    if (a.id() == b.id()) return 0;
    auto rank = [](Expr::Kind k) {
        switch (k) {
            case Expr::Kind::Const:    return 0;
            case Expr::Kind::Variable: return 1;
            case Expr::Kind::Apply:    return 2;
            case Expr::Kind::IntPow:   return 3;
            case Expr::Kind::Product:  return 4;
            case Expr::Kind::Sum:      return 5;
        }
        return 6;
    };
    if (rank(a.kind()) != rank(b.kind())) return rank(a.kind()) < rank(b.kind()) ? -1 : 1;
    switch (a.kind()) {
        case Expr::Kind::Const: {
            if (a.value() == b.value()) return 0;
            return a.value() < b.value() ? -1 : 1;
        }
        case Expr::Kind::Variable: {
            if (a.var() == b.var()) return 0;
            return a.var() < b.var() ? -1 : 1;
        }
        case Expr::Kind::Apply: {
            if (a.fn() != b.fn()) return static_cast<int>(a.fn()) < static_cast<int>(b.fn()) ? -1 : 1;
            return structural_compare(a.operands().front(), b.operands().front());
        }
        case Expr::Kind::IntPow: {
            int c = structural_compare(a.operands().front(), b.operands().front());
            if (c != 0) return c;
            if (a.exponent() == b.exponent()) return 0;
            return a.exponent() < b.exponent() ? -1 : 1;
        }
        case Expr::Kind::Product:
        case Expr::Kind::Sum: {
            const auto& ka = a.operands();
            const auto& kb = b.operands();
            const std::size_t n = std::min(ka.size(), kb.size());
            for (std::size_t i = 0; i < n; ++i) {
                int c = structural_compare(ka[i], kb[i]);
                if (c != 0) return c;
            }
            if (ka.size() == kb.size()) return 0;
            return ka.size() < kb.size() ? -1 : 1;
        }
    }
    return 0;
}

inline bool operator==(const Expr& a, const Expr& b) { return structural_compare(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

// --- differentiation ---------------------------------------------------

inline Expr diff(const Expr& e, Var v) {
    switch (e.kind()) {
        case Expr::Kind::Const:
            return Expr::integer(0);
        case Expr::Kind::Variable:
            return Expr::integer(e.var() == v ? 1 : 0);
        case Expr::Kind::Sum: {
            std::vector<Expr> terms;
            terms.reserve(e.operands().size());
            for (const auto& k : e.operands()) terms.push_back(diff(k, v));
            return Expr::sum(std::move(terms));
        }
        case Expr::Kind::Product: {
            // Leibniz over the full factor list.
            const auto& ks = e.operands();
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < ks.size(); ++i) {
                std::vector<Expr> factors = ks;
                factors[i] = diff(ks[i], v);
                terms.push_back(Expr::product(std::move(factors)));
            }
            return Expr::sum(std::move(terms));
        }
        case Expr::Kind::IntPow: {
            const Expr& b = e.operands().front();
            const long long n = e.exponent();
            return Expr::product(
                {Expr::integer(n), Expr::pow(b, n - 1), diff(b, v)});
        }
        case Expr::Kind::Apply: {
            const Expr& u = e.operands().front();
            Expr du = diff(u, v);
            switch (e.fn()) {
                case Fn::sin: return cos(u) * du;
                case Fn::cos: return -(sin(u) * du);
                case Fn::exp: return exp(u) * du;
                case Fn::ln:  return du * Expr::pow(u, -1);
            }
            return Expr::integer(0);
        }
    }
    return Expr::integer(0);
}

// --- substitution -------------------------------------------------------

// Simultaneous substitution of variables by expressions. There are no
// binders in this language, so capture cannot occur.
inline Expr substitute(const Expr& e, const std::map<Var, Expr>& repl) {
    switch (e.kind()) {
        case Expr::Kind::Const:
            return e;
        case Expr::Kind::Variable: {
            auto it = repl.find(e.var());
            return it == repl.end() ? e : it->second;
        }
        case Expr::Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) kids.push_back(substitute(k, repl));
            return Expr::sum(std::move(kids));
        }
        case Expr::Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) kids.push_back(substitute(k, repl));
            return Expr::product(std::move(kids));
        }
        case Expr::Kind::IntPow:
            return Expr::pow(substitute(e.operands().front(), repl), e.exponent());
        case Expr::Kind::Apply:
            return Expr::apply(e.fn(), substitute(e.operands().front(), repl));
    }
    return e;
}

// --- numeric evaluation ---------------------------------------------------

namespace detail {
inline double ipow(double base, long long n) {
    const bool inv = n < 0;
    unsigned long long k = static_cast<unsigned long long>(inv ? -n : n);
    double r = 1.0, b = base;
    while (k) {
        if (k & 1ull) r *= b;
        b *= b;
        k >>= 1;
    }
    return inv ? 1.0 / r : r;
}
}  // namespace detail

inline double eval_at(const Expr& e, const JetPoint& pt) {
    switch (e.kind()) {
        case Expr::Kind::Const:
            return to_double(e.value());
        case Expr::Kind::Variable:
            return pt.value(e.var());
        case Expr::Kind::Sum: {
            double s = 0.0;
            for (const auto& k : e.operands()) s += eval_at(k, pt);
            return s;
        }
        case Expr::Kind::Product: {
            double s = 1.0;
            for (const auto& k : e.operands()) s *= eval_at(k, pt);
            return s;
        }
        case Expr::Kind::IntPow: {
            const double b = eval_at(e.operands().front(), pt);
            if (e.exponent() < 0 && std::abs(b) < 1e-12)
                throw EvalSingular("denominator within 1e-12 of zero");
            return detail::ipow(b, e.exponent());
        }
        case Expr::Kind::Apply: {
            const double u = eval_at(e.operands().front(), pt);
            switch (e.fn()) {
                case Fn::sin: return std::sin(u);
                case Fn::cos: return std::cos(u);
                case Fn::exp: return std::exp(u);
                case Fn::ln:
                    if (u < 1e-12) throw EvalSingular("ln argument not positive");
                    return std::log(u);
            }
            return 0.0;
        }
    }
    return 0.0;
}

// --- small structural queries ---------------------------------------------

inline void collect_variables(const Expr& e, std::vector<Var>& out) {
    switch (e.kind()) {
        case Expr::Kind::Const:
            return;
        case Expr::Kind::Variable:
            out.push_back(e.var());
            return;
        default:
            for (const auto& k : e.operands()) collect_variables(k, out);
    }
}

inline int max_coordinate_index(const Expr& e) {
    std::vector<Var> vs;
    collect_variables(e, vs);
    int mx = 0;
    for (const auto& v : vs) mx = std::max(mx, v.index);
    return mx;
}

inline bool contains_variable(const Expr& e, Var v) {
    std::vector<Var> vs;
    collect_variables(e, vs);
    for (const auto& w : vs)
        if (w == v) return true;
    return false;
}

}  // namespace jetcal
