#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "jetcal/jet.hpp"

// Finite-difference oracle. Every invariant formula is re-evaluated with
// central-difference stencils in place of the symbolic operators, on a
// black-box right-hand side, so agreement with the symbolic pipeline is a
// genuine cross-check rather than the same code run twice. Nested operators
// (D^2, d/dq over D, ...) are realized by composing stencils, not by
// expanding anything symbolically.

namespace jetcal {

using JetFn = std::function<double(const JetPoint&)>;

struct FdConfig {
    // Base step for order-2 central differences. Deeper compositions run on
    // multiples of it (see fd_invariants).
    double h{1e-4};
    // Relative comparison bound callers should use for W2/I2; second total
    // derivatives inside W3/I4 warrant a relaxed 1e-4.
    double tolerance{1e-6};
};

struct NumericRhs {
    int m{0};
    // Value of f^i at a jet point, i in 1..m.
    std::function<double(const JetPoint&, int)> eval;
    // Optional domain predicate; an empty function means "everywhere".
    std::function<bool(const JetPoint&)> in_domain;

    double value(const JetPoint& pt, int i) const {
        if (in_domain && !in_domain(pt))
            throw StencilOutOfDomain("finite-difference stencil left the rhs domain");
        return eval(pt, i);
    }
};

inline NumericRhs make_numeric(const OdeSystem& sys) {
    NumericRhs rhs;
    rhs.m = sys.dim();
    rhs.eval = [fs = sys.rhs()](const JetPoint& pt, int i) {
        return eval_at(fs[static_cast<std::size_t>(i - 1)], pt);
    };
    return rhs;
}

namespace fd {

inline double diff_at(const JetFn& g, Var v, const JetPoint& pt, double h) {
    return (g(pt.shifted(v, h)) - g(pt.shifted(v, -h))) / (2.0 * h);
}

inline JetFn component(const NumericRhs& rhs, int i) {
    return [rhs, i](const JetPoint& pt) { return rhs.value(pt, i); };
}

inline JetFn partial_of(JetFn g, Var v, double h) {
    return [g = std::move(g), v, h](const JetPoint& pt) { return diff_at(g, v, pt, h); };
}

// Numeric total derivative: D g = g_x + sum_i (p_i g_{y_i} + q_i g_{p_i} + f^i g_{q_i}).
inline JetFn total_of(NumericRhs rhs, JetFn g, double h) {
    return [rhs = std::move(rhs), g = std::move(g), h](const JetPoint& pt) {
        double acc = diff_at(g, Var::x(), pt, h);
        for (int i = 1; i <= rhs.m; ++i) {
            acc += pt.p[static_cast<std::size_t>(i - 1)] * diff_at(g, Var::y(i), pt, h);
            acc += pt.q[static_cast<std::size_t>(i - 1)] * diff_at(g, Var::p(i), pt, h);
            acc += rhs.value(pt, i) * diff_at(g, Var::q(i), pt, h);
        }
        return acc;
    };
}

}  // namespace fd

inline double fd_partial(const NumericRhs& rhs, int i, Var v, const JetPoint& pt,
                         const FdConfig& cfg = {}) {
    return fd::diff_at(fd::component(rhs, i), v, pt, cfg.h);
}

inline double fd_total_derivative(const NumericRhs& rhs, const JetFn& g, const JetPoint& pt,
                                  const FdConfig& cfg = {}) {
    return fd::total_of(rhs, g, cfg.h)(pt);
}

struct NumericInvariantSet {
    int m{0};
    std::vector<std::vector<double>> W2, W3, I4;
    std::vector<std::vector<std::vector<double>>> I2;
    double Hx{0.0};
    std::vector<double> Hm1;
};

inline NumericInvariantSet fd_invariants(const NumericRhs& rhs, const JetPoint& pt,
                                         const FdConfig& cfg = {}) {
    const int m = rhs.m;
    // Composing k central stencils amplifies evaluation rounding roughly like
    // eps/h^k while truncation stays O(h^2), so deeper formulas get
    // proportionally larger steps: W2/I2/Hx/Hm1 nest at most two levels (base
    // step), W3 nests three (10h), I4 nests four (20h).
    const double h2 = cfg.h;
    const double h3 = 10.0 * cfg.h;
    const double h4 = 20.0 * cfg.h;

    NumericInvariantSet out;
    out.m = m;

    auto dfdq_at = [&](int i, int j, const JetPoint& at, double h) {
        return fd::diff_at(fd::component(rhs, i), Var::q(j), at, h);
    };
    auto dfdp_at = [&](int i, int j, const JetPoint& at, double h) {
        return fd::diff_at(fd::component(rhs, i), Var::p(j), at, h);
    };

    // W2 and Hx from the shared matrix P - D(F) + (1/3) F^2.
    std::vector<std::vector<double>> base(static_cast<std::size_t>(m),
                                          std::vector<double>(static_cast<std::size_t>(m), 0.0));
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            const double Pij = dfdp_at(i, j, pt, h2);
            const double DFij =
                fd::total_of(rhs, fd::partial_of(fd::component(rhs, i), Var::q(j), h2), h2)(pt);
            double FF = 0.0;
            for (int k = 1; k <= m; ++k) FF += dfdq_at(i, k, pt, h2) * dfdq_at(k, j, pt, h2);
            base[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                Pij - DFij + FF / 3.0;
        }
    double tr = 0.0;
    for (int i = 0; i < m; ++i)
        tr += base[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    out.W2 = base;
    for (int i = 0; i < m; ++i)
        out.W2[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] -= tr / m;
    out.Hx = -tr / (4.0 * m);

    // I2 and Hm1 from the symmetric q-Hessian S^i_{jk}.
    std::vector<std::vector<std::vector<double>>> S(
        static_cast<std::size_t>(m),
        std::vector<std::vector<double>>(static_cast<std::size_t>(m),
                                         std::vector<double>(static_cast<std::size_t>(m), 0.0)));
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j)
            for (int k = 1; k <= m; ++k)
                S[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]
                 [static_cast<std::size_t>(k - 1)] = fd::diff_at(
                     fd::partial_of(fd::component(rhs, i), Var::q(j), h2), Var::q(k), pt, h2);
    std::vector<double> T(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l)
            T[static_cast<std::size_t>(j)] +=
                S[static_cast<std::size_t>(l)][static_cast<std::size_t>(l)]
                 [static_cast<std::size_t>(j)];
    out.I2 = S;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                double corr = 0.0;
                if (i == j) corr += T[static_cast<std::size_t>(k)];
                if (i == k) corr += T[static_cast<std::size_t>(j)];
                out.I2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                      [static_cast<std::size_t>(k)] -= corr / (m + 1);
            }
    out.Hm1.assign(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
            s += S[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]
                  [static_cast<std::size_t>(j)];
        out.Hm1[static_cast<std::size_t>(j)] = s / (6.0 * (m + 1));
    }

    // W3 at the 10h step.
    std::vector<std::vector<double>> Fm(static_cast<std::size_t>(m),
                                        std::vector<double>(static_cast<std::size_t>(m), 0.0));
    std::vector<std::vector<double>> DFm = Fm;
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            Fm[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                dfdq_at(i, j, pt, h3);
            DFm[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                fd::total_of(rhs, fd::partial_of(fd::component(rhs, i), Var::q(j), h3), h3)(pt);
        }
    out.W3.assign(static_cast<std::size_t>(m),
                  std::vector<double>(static_cast<std::size_t>(m), 0.0));
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            const double dfdy = fd::diff_at(fd::component(rhs, i), Var::y(j), pt, h3);
            const double DP =
                fd::total_of(rhs, fd::partial_of(fd::component(rhs, i), Var::p(j), h3), h3)(pt);
            const double DDF = fd::total_of(
                rhs,
                fd::total_of(rhs, fd::partial_of(fd::component(rhs, i), Var::q(j), h3), h3),
                h3)(pt);
            double FP = 0.0, F3 = 0.0, FDF = 0.0, DFF = 0.0;
            for (int k = 1; k <= m; ++k) {
                const auto ik = static_cast<std::size_t>(k - 1);
                const auto row = static_cast<std::size_t>(i - 1);
                const auto col = static_cast<std::size_t>(j - 1);
                FP += Fm[row][ik] * dfdp_at(k, j, pt, h3);
                FDF += Fm[row][ik] * DFm[ik][col];
                DFF += DFm[row][ik] * Fm[ik][col];
                for (int l = 1; l <= m; ++l)
                    F3 += Fm[row][ik] * Fm[ik][static_cast<std::size_t>(l - 1)] *
                          Fm[static_cast<std::size_t>(l - 1)][col];
            }
            out.W3[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                dfdy + FP / 3.0 - DP / 2.0 + DDF / 6.0 + (2.0 / 27.0) * F3 -
                (5.0 / 18.0) * FDF - (1.0 / 18.0) * DFF;
        }

    // I4 at the 20h step; Hx and Hm1 are rebuilt as jet functions so each
    // outer derivative is itself a composed stencil.
    auto hm1_fn = [rhs, m, h4](int j) -> JetFn {
        return [rhs, m, j, h4](const JetPoint& at) {
            double s = 0.0;
            for (int i = 1; i <= m; ++i)
                s += fd::diff_at(fd::partial_of(fd::component(rhs, i), Var::q(i), h4), Var::q(j),
                                 at, h4);
            return s / (6.0 * (m + 1));
        };
    };
    JetFn hx_fn = [rhs, m, h4](const JetPoint& at) {
        double t = 0.0;
        for (int i = 1; i <= m; ++i) {
            t += fd::diff_at(fd::component(rhs, i), Var::p(i), at, h4);
            t -= fd::total_of(rhs, fd::partial_of(fd::component(rhs, i), Var::q(i), h4), h4)(at);
            for (int k = 1; k <= m; ++k)
                t += fd::diff_at(fd::component(rhs, i), Var::q(k), at, h4) *
                     fd::diff_at(fd::component(rhs, k), Var::q(i), at, h4) / 3.0;
        }
        return -t / (4.0 * m);
    };
    out.I4.assign(static_cast<std::size_t>(m),
                  std::vector<double>(static_cast<std::size_t>(m), 0.0));
    for (int j = 1; j <= m; ++j)
        for (int k = 1; k <= m; ++k) {
            const double t1 = -fd::diff_at(hm1_fn(k), Var::p(j), pt, h4);
            const double t2 =
                fd::diff_at(fd::partial_of(hx_fn, Var::q(j), h4), Var::q(k), pt, h4);
            const double t3 =
                -fd::diff_at(fd::total_of(rhs, hm1_fn(j), h4), Var::q(k), pt, h4);
            JetFn couple = [&rhs, &hm1_fn, m, j, h4](const JetPoint& at) {
                double s = 0.0;
                for (int l = 1; l <= m; ++l)
                    s += hm1_fn(l)(at) * fd::diff_at(fd::component(rhs, l), Var::q(j), at, h4);
                return s;
            };
            const double t4 = -fd::diff_at(couple, Var::q(k), pt, h4);
            const double t5 = 2.0 * hm1_fn(j)(pt) * hm1_fn(k)(pt);
            out.I4[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)] =
                t1 + t2 + t3 + t4 + t5;
        }
    return out;
}

}  // namespace jetcal
