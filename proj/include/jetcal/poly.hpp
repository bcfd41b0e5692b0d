#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "jetcal/numbers.hpp"

namespace jetcal {

// Sparse multivariate polynomials over Q with a fixed indeterminate count.
// Terms are kept in strictly descending graded-lexicographic order, where
// position 0 in the exponent vector is the most significant indeterminate.

struct Monomial {
    std::vector<std::uint32_t> e;

    explicit Monomial(std::size_t nvars = 0) : e(nvars, 0u) {}

    int degree() const {
        int d = 0;
        for (auto x : e) d += static_cast<int>(x);
        return d;
    }
    bool is_constant() const {
        for (auto x : e)
            if (x) return false;
        return true;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
};

inline bool grlex_less(const Monomial& a, const Monomial& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    for (std::size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
    return false;
}

inline bool grlex_greater(const Monomial& a, const Monomial& b) { return grlex_less(b, a); }

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] += b.e[i];
    return r;
}

// Componentwise quotient a / b, empty if any exponent would go negative.
inline std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (std::size_t i = 0; i < r.e.size(); ++i) {
        if (a.e[i] < b.e[i]) return std::nullopt;
        r.e[i] = a.e[i] - b.e[i];
    }
    return r;
}

struct Term {
    Monomial mon;
    Rational coeff;
    friend bool operator==(const Term& a, const Term& b) {
        return a.mon == b.mon && a.coeff == b.coeff;
    }
};

class Poly {
    int nvars_{0};
    std::vector<Term> terms_;  // strictly descending grlex, no zero coefficients

public:
    Poly() = default;
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly zero(int nvars) { return Poly(nvars); }

    static Poly constant(int nvars, Rational c) {
        Poly p(nvars);
        if (c != 0) p.terms_.push_back({Monomial(static_cast<std::size_t>(nvars)), std::move(c)});
        return p;
    }

    static Poly variable(int nvars, int idx) {
        Poly p(nvars);
        Monomial m(static_cast<std::size_t>(nvars));
        m.e[static_cast<std::size_t>(idx)] = 1;
        p.terms_.push_back({std::move(m), Rational(1)});
        return p;
    }

    int nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mon.is_constant()); }
    const Term& leading() const { return terms_.front(); }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        return terms_.front().coeff;  // only valid when is_constant()
    }

    bool is_one() const {
        return terms_.size() == 1 && terms_[0].mon.is_constant() && terms_[0].coeff == 1;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r(a.nvars_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() && j < b.terms_.size()) {
            const Term& ta = a.terms_[i];
            const Term& tb = b.terms_[j];
            if (ta.mon == tb.mon) {
                Rational c = ta.coeff + tb.coeff;
                if (c != 0) r.terms_.push_back({ta.mon, std::move(c)});
                ++i, ++j;
            } else if (grlex_greater(ta.mon, tb.mon)) {
                r.terms_.push_back(ta);
                ++i;
            } else {
                r.terms_.push_back(tb);
                ++j;
            }
        }
        for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
        for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
        return r;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.terms_) t.coeff = -t.coeff;
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly(a.nvars_);
        std::map<Monomial, Rational, bool (*)(const Monomial&, const Monomial&)> acc(grlex_greater);
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) {
                Monomial m = mono_mul(ta.mon, tb.mon);
                auto it = acc.try_emplace(std::move(m), Rational(0)).first;
                it->second += ta.coeff * tb.coeff;
            }
        Poly r(a.nvars_);
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (c != 0) r.terms_.push_back({m, std::move(c)});
        return r;
    }

    void scale(const Rational& c) {
        if (c == 0) {
            terms_.clear();
            return;
        }
        for (auto& t : terms_) t.coeff *= c;
    }

    Poly pow(unsigned n) const {
        Poly r = constant(nvars_, Rational(1));
        Poly b = *this;
        while (n) {
            if (n & 1u) r = r * b;
            if (n >>= 1) b = b * b;
        }
        return r;
    }

    // Exact division: returns the quotient when divisor divides *this with
    // remainder zero, otherwise nothing. Used to keep denominators small
    // (e.g. powers of a shared factor) without a general multivariate gcd.
    std::optional<Poly> divided_by(const Poly& d) const {
        if (d.is_zero()) return std::nullopt;
        if (is_zero()) return Poly(nvars_);
        if (d.is_one()) return *this;
        std::map<Monomial, Rational, bool (*)(const Monomial&, const Monomial&)> rem(grlex_greater);
        for (const auto& t : terms_) rem.emplace(t.mon, t.coeff);
        Poly q(nvars_);
        const Term& lead_d = d.terms_.front();
        while (!rem.empty()) {
            const auto& [mon_r, c_r] = *rem.begin();
            auto qm = mono_div(mon_r, lead_d.mon);
            if (!qm) return std::nullopt;
            Rational qc = c_r / lead_d.coeff;
            q.terms_.push_back({*qm, qc});
            for (const auto& t : d.terms_) {
                Monomial m = mono_mul(*qm, t.mon);
                auto it = rem.find(m);
                Rational nc = (it == rem.end() ? Rational(0) : it->second) - qc * t.coeff;
                if (it != rem.end()) rem.erase(it);
                if (nc != 0) rem.emplace(std::move(m), std::move(nc));
            }
        }
        return q;
    }

    // gcd of numerators over lcm of denominators, carrying the sign of the
    // leading coefficient; dividing by it leaves coprime integer
    // coefficients with a positive leading one.
    Rational content_with_sign() const {
        if (terms_.empty()) return Rational(1);
        Integer g(0), l(1);
        for (const auto& t : terms_) {
            g = boost::multiprecision::gcd(g, numerator(t.coeff));
            l = boost::multiprecision::lcm(l, denominator(t.coeff));
        }
        Rational c(g, l);
        if (terms_.front().coeff < 0) c = -c;
        return c;
    }

    // Componentwise minimum exponent over all terms.
    Monomial common_monomial() const {
        if (terms_.empty()) return Monomial(static_cast<std::size_t>(nvars_));
        Monomial m = terms_.front().mon;
        for (const auto& t : terms_)
            for (std::size_t i = 0; i < m.e.size(); ++i) m.e[i] = std::min(m.e[i], t.mon.e[i]);
        return m;
    }

    void divide_by_monomial(const Monomial& m) {
        if (m.is_constant()) return;
        for (auto& t : terms_) {
            auto d = mono_div(t.mon, m);
            t.mon = *d;  // caller guarantees divisibility
        }
    }

    void mark_used(std::vector<bool>& used) const {
        for (const auto& t : terms_)
            for (std::size_t i = 0; i < t.mon.e.size(); ++i)
                if (t.mon.e[i]) used[i] = true;
    }

    // Rebuild over a smaller indeterminate set; old index i maps to
    // remap[i] (or is guaranteed unused when remap[i] < 0).
    Poly project(const std::vector<int>& remap, int new_nvars) const {
        Poly r(new_nvars);
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            Monomial m(static_cast<std::size_t>(new_nvars));
            for (std::size_t i = 0; i < t.mon.e.size(); ++i)
                if (t.mon.e[i]) m.e[static_cast<std::size_t>(remap[i])] = t.mon.e[i];
            r.terms_.push_back({std::move(m), t.coeff});
        }
        return r;  // term order is preserved: remap keeps relative positions
    }

    double eval(const std::vector<double>& vals) const {
        double s = 0.0;
        for (const auto& t : terms_) {
            double acc = to_double(t.coeff);
            for (std::size_t i = 0; i < t.mon.e.size(); ++i)
                for (std::uint32_t k = 0; k < t.mon.e[i]; ++k) acc *= vals[i];
            s += acc;
        }
        return s;
    }
};

}  // namespace jetcal
