#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jetcal/expr.hpp"
#include "jetcal/rational_form.hpp"

namespace jetcal {

// A system y_i''' = f_i(x, y, y', y'') of m >= 2 equations. The right-hand
// sides may reference coordinates with indices up to m only.
class OdeSystem {
    int m_{0};
    std::vector<Expr> f_;

public:
    OdeSystem(int m, std::vector<Expr> rhs) : m_(m), f_(std::move(rhs)) {
        if (m_ < 2)
            throw DimensionTooSmall("system dimension m = " + std::to_string(m_) +
                                    " is below the minimum of 2");
        if (static_cast<int>(f_.size()) != m_)
            throw Error("expected " + std::to_string(m_) + " right-hand sides, got " +
                        std::to_string(f_.size()));
        for (const auto& e : f_) {
            const int mx = max_coordinate_index(e);
            if (mx > m_)
                throw IndexOutOfRange("right-hand side references index " + std::to_string(mx) +
                                      " but m = " + std::to_string(m_));
        }
    }

    int dim() const { return m_; }

    const Expr& f(int i) const {
        if (i < 1 || i > m_) throw IndexOutOfRange("no equation f" + std::to_string(i));
        return f_[static_cast<std::size_t>(i - 1)];
    }

    const std::vector<Expr>& rhs() const { return f_; }
};

// Total derivative along solutions:
//   D = d/dx + p_i d/dy_i + q_i d/dp_i + f_i d/dq_i.
// The f_i terms only enter when e actually depends on some q_i, so D of a
// q-free expression never drags the right-hand sides in.
inline Expr total_derivative(const OdeSystem& sys, const Expr& e) {
    std::vector<Expr> terms{diff(e, Var::x())};
    for (int i = 1; i <= sys.dim(); ++i) {
        terms.push_back(Expr::variable(Var::p(i)) * diff(e, Var::y(i)));
        terms.push_back(Expr::variable(Var::q(i)) * diff(e, Var::p(i)));
        terms.push_back(sys.f(i) * diff(e, Var::q(i)));
    }
    return Expr::sum(std::move(terms));
}

inline OdeSystem trivial_system(int m) {
    if (m < 2) throw DimensionTooSmall("trivial_system requires m >= 2");
    return OdeSystem(m, std::vector<Expr>(static_cast<std::size_t>(m), Expr::integer(0)));
}

// The equations of circles: extremal curves whose second fundamental data
// make every solution a circle in R^m. Explicitly
//   f_i = 3 q_i (sum_j p_j q_j) / (1 + sum_j p_j^2).
inline OdeSystem circles_system(int m) {
    if (m < 2) throw DimensionTooSmall("circles_system requires m >= 2");
    std::vector<Expr> pq, p2;
    for (int j = 1; j <= m; ++j) {
        pq.push_back(Expr::variable(Var::p(j)) * Expr::variable(Var::q(j)));
        p2.push_back(Expr::pow(Expr::variable(Var::p(j)), 2));
    }
    p2.push_back(Expr::integer(1));
    const Expr s = Expr::sum(std::move(pq));
    const Expr u = Expr::sum(std::move(p2));
    std::vector<Expr> rhs;
    for (int i = 1; i <= m; ++i)
        rhs.push_back(3 * Expr::variable(Var::q(i)) * s / u);
    return OdeSystem(m, std::move(rhs));
}

// Canonical textual form, re-parsable by parse_system.
inline std::string render_system(const OdeSystem& sys) {
    std::string out = "m = " + std::to_string(sys.dim()) + "\n";
    for (int i = 1; i <= sys.dim(); ++i)
        out += "f" + std::to_string(i) + " = " + canonical_string(sys.f(i)) + "\n";
    return out;
}

}  // namespace jetcal
