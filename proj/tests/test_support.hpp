#pragma once

// Shared helpers for the test binaries: deterministic random expressions,
// systems, and jet points.

#include <random>
#include <vector>

#include "jetcal/jetcal.hpp"

namespace testsupport {

using jetcal::Expr;
using jetcal::JetPoint;
using jetcal::OdeSystem;
using jetcal::Rational;
using jetcal::Var;

inline Rational random_coeff(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 2);
    int n = num(rng);
    if (n == 0) n = 1;
    return jetcal::rational(n, den(rng));
}

// Sparse polynomial with small rational coefficients, total degree <= max_degree.
inline Expr random_polynomial(std::mt19937& rng, const std::vector<Var>& vars, int max_degree,
                              int terms) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
    std::vector<Expr> sum;
    for (int t = 0; t < terms; ++t) {
        std::vector<Expr> factors{Expr::constant(random_coeff(rng))};
        const int d = deg(rng);
        for (int i = 0; i < d; ++i) factors.push_back(Expr::variable(vars[pick(rng)]));
        sum.push_back(Expr::product(std::move(factors)));
    }
    return Expr::sum(std::move(sum));
}

inline std::vector<Var> jet_vars(int m) {
    std::vector<Var> vars{Var::x()};
    for (int i = 1; i <= m; ++i) vars.push_back(Var::y(i));
    for (int i = 1; i <= m; ++i) vars.push_back(Var::p(i));
    for (int i = 1; i <= m; ++i) vars.push_back(Var::q(i));
    return vars;
}

inline OdeSystem random_polynomial_system(std::mt19937& rng, int m, int max_degree = 2,
                                          int terms = 4) {
    const std::vector<Var> vars = jet_vars(m);
    std::vector<Expr> fs;
    for (int i = 0; i < m; ++i) fs.push_back(random_polynomial(rng, vars, max_degree, terms));
    return OdeSystem(m, fs);
}

// Polynomial-plus-one-function expression for kernel property tests: the
// function argument is kept linear so derivatives stay compact.
inline Expr random_expr(std::mt19937& rng, const std::vector<Var>& vars) {
    Expr base = random_polynomial(rng, vars, 2, 3);
    std::uniform_int_distribution<int> which(0, 4);
    switch (which(rng)) {
        case 0: return base;
        case 1: return base + jetcal::sin(random_polynomial(rng, vars, 1, 2));
        case 2: return base * jetcal::cos(random_polynomial(rng, vars, 1, 2));
        case 3: return base + jetcal::exp(random_polynomial(rng, vars, 1, 2));
        default: {
            // Division by a positive-definite denominator keeps every jet
            // point non-degenerate.
            std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
            Expr v = Expr::variable(vars[pick(rng)]);
            return base / (Expr::integer(1) + jetcal::pow(v, 2));
        }
    }
}

inline JetPoint random_point(std::mt19937& rng, int m, double lo = -1.2, double hi = 1.2) {
    std::uniform_real_distribution<double> coord(lo, hi);
    JetPoint pt;
    pt.x = coord(rng);
    for (int i = 0; i < m; ++i) {
        pt.y.push_back(coord(rng));
        pt.p.push_back(coord(rng));
        pt.q.push_back(coord(rng));
    }
    return pt;
}

// Retry sampling until every guard expression evaluates finitely.
inline JetPoint nondegenerate_point(std::mt19937& rng, int m, const std::vector<Expr>& guards) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        JetPoint pt = random_point(rng, m);
        try {
            for (const auto& g : guards) (void)jetcal::eval_at(g, pt);
            return pt;
        } catch (const jetcal::EvalSingular&) {
            continue;
        }
    }
    throw std::runtime_error("could not sample a non-degenerate jet point");
}

}  // namespace testsupport
