#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "jetcal/expr.hpp"
#include "jetcal/poly.hpp"

namespace jetcal {

// Canonical quotient of two polynomials over an "atom" basis. Atoms are the
// jet variables plus every maximal function application encountered in the
// expression, each treated as an independent indeterminate. On the purely
// rational fragment this makes the zero test exact; with sin/cos/exp/ln
// present it is conservative (algebraic relations between applications are
// not recognized, so is_zero can answer false for a mathematical zero, but
// never the reverse).
struct RationalForm {
    std::vector<Expr> atoms;  // ascending: x, y_i, p_i, q_i, then applications
    Poly num, den;            // den: coprime integer coefficients, positive leading one
};

namespace detail {

struct Frac {
    Poly num, den;
};

inline void reduce(Frac& f) {
    if (f.num.is_zero()) {
        f.den = Poly::constant(f.num.nvars(), Rational(1));
        return;
    }
    // Shared monomial factor of every term on both sides.
    Monomial cn = f.num.common_monomial();
    Monomial cd = f.den.common_monomial();
    Monomial joint(cn.e.size());
    bool any = false;
    for (std::size_t i = 0; i < joint.e.size(); ++i) {
        joint.e[i] = std::min(cn.e[i], cd.e[i]);
        any = any || joint.e[i] != 0;
    }
    if (any) {
        f.num.divide_by_monomial(joint);
        f.den.divide_by_monomial(joint);
    }
    // Opportunistic whole-polynomial cancellation; catches the common case
    // of denominators that are powers of one factor.
    if (!f.den.is_constant()) {
        if (auto q = f.num.divided_by(f.den)) {
            f.num = std::move(*q);
            f.den = Poly::constant(f.num.nvars(), Rational(1));
        } else if (auto q2 = f.den.divided_by(f.num)) {
            f.num = Poly::constant(f.num.nvars(), Rational(1));
            f.den = std::move(*q2);
        }
    }
    Rational c = f.den.content_with_sign();
    if (c != 1) {
        Rational inv = Rational(1) / c;
        f.num.scale(inv);
        f.den.scale(inv);
    }
}

inline Frac frac_add(const Frac& a, const Frac& b) {
    if (a.num.is_zero()) return b;
    if (b.num.is_zero()) return a;
    Frac r;
    if (a.den == b.den) {
        r.num = a.num + b.num;
        r.den = a.den;
    } else if (auto q = b.den.divided_by(a.den)) {
        // b.den = a.den * q
        r.num = a.num * *q + b.num;
        r.den = b.den;
    } else if (auto q2 = a.den.divided_by(b.den)) {
        r.num = a.num + b.num * *q2;
        r.den = a.den;
    } else {
        r.num = a.num * b.den + b.num * a.den;
        r.den = a.den * b.den;
    }
    reduce(r);
    return r;
}

inline Frac frac_mul(const Frac& a, const Frac& b) {
    Frac r;
    if (a.num.is_zero() || b.num.is_zero()) {
        r.num = Poly::zero(a.num.nvars());
        r.den = Poly::constant(a.num.nvars(), Rational(1));
        return r;
    }
    // Cross-cancel before multiplying to keep intermediate sizes down.
    Poly n1 = a.num, d1 = a.den, n2 = b.num, d2 = b.den;
    if (!d2.is_constant()) {
        if (auto q = n1.divided_by(d2)) {
            n1 = std::move(*q);
            d2 = Poly::constant(n1.nvars(), Rational(1));
        }
    }
    if (!d1.is_constant()) {
        if (auto q = n2.divided_by(d1)) {
            n2 = std::move(*q);
            d1 = Poly::constant(n2.nvars(), Rational(1));
        }
    }
    r.num = n1 * n2;
    r.den = d1 * d2;
    reduce(r);
    return r;
}

inline Frac frac_pow(const Frac& a, long long n) {
    Frac r;
    if (n < 0 && a.num.is_zero())
        throw DivisionByZeroExpr("denominator subterm normalizes to zero");
    const unsigned k = static_cast<unsigned>(n < 0 ? -n : n);
    if (n >= 0) {
        r.num = a.num.pow(k);
        r.den = a.den.pow(k);
    } else {
        r.num = a.den.pow(k);
        r.den = a.num.pow(k);
    }
    reduce(r);
    return r;
}

inline void collect_atoms(const Expr& e, std::vector<Expr>& out) {
    switch (e.kind()) {
        case Expr::Kind::Const:
            return;
        case Expr::Kind::Variable:
        case Expr::Kind::Apply:
            out.push_back(e);
            return;
        default:
            for (const auto& k : e.operands()) collect_atoms(k, out);
    }
}

inline int atom_index(const std::vector<Expr>& atoms, const Expr& a) {
    int lo = 0, hi = static_cast<int>(atoms.size()) - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        const int c = structural_compare(atoms[static_cast<std::size_t>(mid)], a);
        if (c == 0) return mid;
        if (c < 0) lo = mid + 1;
        else hi = mid - 1;
    }
    return -1;
}

inline Frac normalize_over(const Expr& e, const std::vector<Expr>& atoms,
                           std::unordered_map<const void*, Frac>& memo) {
    auto hit = memo.find(e.id());
    if (hit != memo.end()) return hit->second;
    const int n = static_cast<int>(atoms.size());
    Frac r;
    switch (e.kind()) {
        case Expr::Kind::Const:
            r.num = Poly::constant(n, e.value());
            r.den = Poly::constant(n, Rational(1));
            break;
        case Expr::Kind::Variable:
        case Expr::Kind::Apply:
            r.num = Poly::variable(n, atom_index(atoms, e));
            r.den = Poly::constant(n, Rational(1));
            break;
        case Expr::Kind::Sum: {
            r.num = Poly::zero(n);
            r.den = Poly::constant(n, Rational(1));
            for (const auto& k : e.operands()) r = frac_add(r, normalize_over(k, atoms, memo));
            break;
        }
        case Expr::Kind::Product: {
            r.num = Poly::constant(n, Rational(1));
            r.den = Poly::constant(n, Rational(1));
            for (const auto& k : e.operands()) r = frac_mul(r, normalize_over(k, atoms, memo));
            break;
        }
        case Expr::Kind::IntPow:
            r = frac_pow(normalize_over(e.operands().front(), atoms, memo), e.exponent());
            break;
    }
    memo.emplace(e.id(), r);
    return r;
}

}  // namespace detail

inline RationalForm normalize(const Expr& e);
inline Expr to_expr(const RationalForm& rf);

namespace detail {

// Rewrite every function-call argument into its canonical rational form so
// that calls whose arguments agree as functions (sin(x + x) vs. sin(2*x))
// collapse to one atom.  Nested calls are handled by the mutual recursion
// through normalize.
inline Expr canonicalize_calls(const Expr& e, std::unordered_map<const void*, Expr>& memo) {
    auto hit = memo.find(e.id());
    if (hit != memo.end()) return hit->second;
    Expr r = e;
    switch (e.kind()) {
        case Expr::Kind::Const:
        case Expr::Kind::Variable:
            break;
        case Expr::Kind::Apply:
            r = Expr::apply(e.fn(), to_expr(normalize(e.operands().front())));
            break;
        default: {
            bool changed = false;
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const auto& k : e.operands()) {
                kids.push_back(canonicalize_calls(k, memo));
                if (kids.back().id() != k.id()) changed = true;
            }
            if (changed) {
                if (e.kind() == Expr::Kind::Sum) r = Expr::sum(std::move(kids));
                else if (e.kind() == Expr::Kind::Product) r = Expr::product(std::move(kids));
                else r = Expr::pow(kids.front(), e.exponent());
            }
            break;
        }
    }
    memo.emplace(e.id(), r);
    return r;
}

inline bool mentions_call(const Expr& e, std::unordered_map<const void*, bool>& memo) {
    auto hit = memo.find(e.id());
    if (hit != memo.end()) return hit->second;
    bool r = e.kind() == Expr::Kind::Apply;
    if (!r)
        for (const auto& k : e.operands())
            if (mentions_call(k, memo)) { r = true; break; }
    memo.emplace(e.id(), r);
    return r;
}

}  // namespace detail

inline RationalForm normalize(const Expr& e0) {
    Expr e = e0;
    {
        std::unordered_map<const void*, bool> probe;
        if (detail::mentions_call(e0, probe)) {
            std::unordered_map<const void*, Expr> memo;
            e = detail::canonicalize_calls(e0, memo);
        }
    }
    std::vector<Expr> atoms;
    detail::collect_atoms(e, atoms);
    std::sort(atoms.begin(), atoms.end(),
              [](const Expr& a, const Expr& b) { return structural_compare(a, b) < 0; });
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

    std::unordered_map<const void*, detail::Frac> memo;
    detail::Frac f = detail::normalize_over(e, atoms, memo);

    // Drop atoms that cancelled away entirely so that the result is
    // independent of how the input happened to be written.
    std::vector<bool> used(atoms.size(), false);
    f.num.mark_used(used);
    f.den.mark_used(used);
    std::vector<int> remap(atoms.size(), -1);
    std::vector<Expr> kept;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (used[i]) {
            remap[i] = static_cast<int>(kept.size());
            kept.push_back(atoms[i]);
        }
    RationalForm out;
    out.num = f.num.project(remap, static_cast<int>(kept.size()));
    out.den = f.den.project(remap, static_cast<int>(kept.size()));
    out.atoms = std::move(kept);
    return out;
}

inline bool is_zero(const Expr& e) { return normalize(e).num.is_zero(); }

// Cross-multiplied comparison; no gcd of numerator and denominator needed.
inline bool same_function(const RationalForm& a, const RationalForm& b) {
    std::vector<Expr> atoms = a.atoms;
    atoms.insert(atoms.end(), b.atoms.begin(), b.atoms.end());
    std::sort(atoms.begin(), atoms.end(),
              [](const Expr& x, const Expr& y) { return structural_compare(x, y) < 0; });
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    const int n = static_cast<int>(atoms.size());
    auto lift = [&](const Poly& p, const std::vector<Expr>& from) {
        std::vector<int> remap(from.size());
        for (std::size_t i = 0; i < from.size(); ++i)
            remap[i] = detail::atom_index(atoms, from[i]);
        return p.project(remap, n);
    };
    return lift(a.num, a.atoms) * lift(b.den, b.atoms) ==
           lift(b.num, b.atoms) * lift(a.den, a.atoms);
}

inline bool same_function(const Expr& a, const Expr& b) {
    return same_function(normalize(a), normalize(b));
}

inline Expr to_expr(const RationalForm& rf) {
    auto poly_expr = [&](const Poly& p) {
        std::vector<Expr> terms;
        for (const auto& t : p.terms()) {
            std::vector<Expr> factors{Expr::constant(t.coeff)};
            for (std::size_t i = 0; i < t.mon.e.size(); ++i)
                if (t.mon.e[i]) factors.push_back(Expr::pow(rf.atoms[i], t.mon.e[i]));
            terms.push_back(Expr::product(std::move(factors)));
        }
        return Expr::sum(std::move(terms));
    };
    Expr n = poly_expr(rf.num);
    if (rf.den.is_one()) return n;
    return n / poly_expr(rf.den);
}

// --- canonical rendering ----------------------------------------------------

inline std::string to_string(const RationalForm& rf);

// Canonical text for an arbitrary expression: normalize first, then print
// the quotient with terms in descending monomial order. Equal functions of
// the atoms therefore always print identically.
inline std::string canonical_string(const Expr& e) { return to_string(normalize(e)); }

inline std::string atom_name(const Expr& a) {
    if (a.kind() == Expr::Kind::Variable) return name(a.var());
    return std::string(fn_name(a.fn())) + "(" + canonical_string(a.operands().front()) + ")";
}

inline std::string poly_string(const Poly& p, const std::vector<Expr>& atoms) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        const bool neg = t.coeff < 0;
        Rational c = neg ? Rational(-t.coeff) : t.coeff;
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        std::string factors;
        for (std::size_t i = 0; i < t.mon.e.size(); ++i) {
            if (!t.mon.e[i]) continue;
            if (!factors.empty()) factors += "*";
            factors += atom_name(atoms[i]);
            if (t.mon.e[i] > 1) factors += "^" + std::to_string(t.mon.e[i]);
        }
        if (factors.empty()) {
            out += to_string(c);
        } else if (c == 1) {
            out += factors;
        } else {
            out += to_string(c) + "*" + factors;
        }
    }
    return out;
}

inline std::string to_string(const RationalForm& rf) {
    std::string n = poly_string(rf.num, rf.atoms);
    if (rf.den.is_one()) return n;
    return "(" + n + ")/(" + poly_string(rf.den, rf.atoms) + ")";
}

// Numeric value of a normalized form; atoms are evaluated through eval_at,
// so function applications work transparently.
inline double eval(const RationalForm& rf, const JetPoint& pt) {
    std::vector<double> vals;
    vals.reserve(rf.atoms.size());
    for (const auto& a : rf.atoms) vals.push_back(eval_at(a, pt));
    const double d = rf.den.eval(vals);
    if (std::abs(d) < 1e-12) throw EvalSingular("denominator within 1e-12 of zero");
    return rf.num.eval(vals) / d;
}

}  // namespace jetcal
