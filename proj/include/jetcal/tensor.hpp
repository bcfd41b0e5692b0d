#pragma once

#include <functional>
#include <vector>

#include "jetcal/jet.hpp"
#include "jetcal/rational_form.hpp"

namespace jetcal {

// m x m matrix of expressions, 1-based indices to match the usual tensor
// notation T^i_j.
class Tensor2 {
    int m_{0};
    std::vector<Expr> e_;

public:
    Tensor2() = default;
    explicit Tensor2(int m) : m_(m), e_(static_cast<std::size_t>(m) * m) {}

    int dim() const { return m_; }

    Expr& at(int i, int j) { return e_[static_cast<std::size_t>(i - 1) * m_ + (j - 1)]; }
    const Expr& at(int i, int j) const {
        return e_[static_cast<std::size_t>(i - 1) * m_ + (j - 1)];
    }

    static Tensor2 scaled_identity(int m, const Expr& s) {
        Tensor2 t(m);
        for (int i = 1; i <= m; ++i) t.at(i, i) = s;
        return t;
    }

    static Tensor2 build(int m, const std::function<Expr(int, int)>& f) {
        Tensor2 t(m);
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j) t.at(i, j) = f(i, j);
        return t;
    }
};

// m x m x m array of expressions, S^i_{jk}.
class Tensor3 {
    int m_{0};
    std::vector<Expr> e_;

public:
    Tensor3() = default;
    explicit Tensor3(int m) : m_(m), e_(static_cast<std::size_t>(m) * m * m) {}

    int dim() const { return m_; }

    Expr& at(int i, int j, int k) {
        return e_[(static_cast<std::size_t>(i - 1) * m_ + (j - 1)) * m_ + (k - 1)];
    }
    const Expr& at(int i, int j, int k) const {
        return e_[(static_cast<std::size_t>(i - 1) * m_ + (j - 1)) * m_ + (k - 1)];
    }

    static Tensor3 build(int m, const std::function<Expr(int, int, int)>& f) {
        Tensor3 t(m);
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j)
                for (int k = 1; k <= m; ++k) t.at(i, j, k) = f(i, j, k);
        return t;
    }
};

inline Tensor2 operator+(const Tensor2& a, const Tensor2& b) {
    return Tensor2::build(a.dim(), [&](int i, int j) { return a.at(i, j) + b.at(i, j); });
}

inline Tensor2 operator-(const Tensor2& a, const Tensor2& b) {
    return Tensor2::build(a.dim(), [&](int i, int j) { return a.at(i, j) - b.at(i, j); });
}

inline Tensor2 scale(const Rational& c, const Tensor2& t) {
    return Tensor2::build(t.dim(), [&](int i, int j) { return c * t.at(i, j); });
}

inline Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
    return Tensor2::build(a.dim(), [&](int i, int j) {
        std::vector<Expr> terms;
        for (int k = 1; k <= a.dim(); ++k) terms.push_back(a.at(i, k) * b.at(k, j));
        return Expr::sum(std::move(terms));
    });
}

inline Expr trace(const Tensor2& t) {
    std::vector<Expr> terms;
    for (int i = 1; i <= t.dim(); ++i) terms.push_back(t.at(i, i));
    return Expr::sum(std::move(terms));
}

// Entrywise total derivative along the system.
inline Tensor2 d_total(const OdeSystem& sys, const Tensor2& t) {
    return Tensor2::build(t.dim(),
                          [&](int i, int j) { return total_derivative(sys, t.at(i, j)); });
}

// Trace-free part: T - (1/m) tr(T) Id. The only gl-invariant projection a
// matrix-valued quantity admits.
inline Tensor2 traceless2(const Tensor2& t) {
    const int m = t.dim();
    const Expr corr = Rational(1, m) * trace(t);
    return Tensor2::build(m, [&](int i, int j) {
        return i == j ? t.at(i, j) - corr : t.at(i, j);
    });
}

// Trace-free part of a tensor symmetric in its two lower indices:
//   S^i_{jk} - (delta^i_j T_k + delta^i_k T_j) / (m + 1),  T_j = S^l_{lj}.
// Both contractions of the result vanish. Symmetry of the input is a
// precondition and is verified exactly.
inline Tensor3 traceless3(const Tensor3& s) {
    const int m = s.dim();
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j)
            for (int k = j + 1; k <= m; ++k)
                if (!is_zero(s.at(i, j, k) - s.at(i, k, j)))
                    throw NotSymmetric("traceless3: input is not symmetric in its lower indices");
    std::vector<Expr> tr(static_cast<std::size_t>(m) + 1);
    for (int j = 1; j <= m; ++j) {
        std::vector<Expr> terms;
        for (int l = 1; l <= m; ++l) terms.push_back(s.at(l, l, j));
        tr[static_cast<std::size_t>(j)] = Expr::sum(std::move(terms));
    }
    const Rational w(1, m + 1);
    return Tensor3::build(m, [&](int i, int j, int k) {
        std::vector<Expr> terms{s.at(i, j, k)};
        if (i == j) terms.push_back(-(w * tr[static_cast<std::size_t>(k)]));
        if (i == k) terms.push_back(-(w * tr[static_cast<std::size_t>(j)]));
        return Expr::sum(std::move(terms));
    });
}

}  // namespace jetcal
