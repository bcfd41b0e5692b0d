#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "test_support.hpp"

using namespace jetcal;
using testsupport::random_polynomial_system;

namespace {

Expr v(Var var) { return Expr::variable(var); }

void require_zero_connection(const ConnectionCoefficients& c) {
    for (int i = 1; i <= c.m; ++i)
        for (int j = 1; j <= c.m; ++j) {
            CAPTURE(i, j);
            REQUIRE(is_zero(c.A.at(i, j)));
            REQUIRE(is_zero(c.B.at(i, j)));
            REQUIRE(is_zero(c.C.at(i, j)));
            REQUIRE(is_zero(c.Gx.at(i, j)));
            for (int k = 1; k <= c.m; ++k) {
                REQUIRE(is_zero(c.Gm2.at(i, j, k)));
                REQUIRE(is_zero(c.Gm3.at(i, j, k)));
            }
        }
    REQUIRE(is_zero(c.Hx));
    for (int j = 0; j < c.m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        REQUIRE(is_zero(c.E[ju]));
        REQUIRE(is_zero(c.Fm2[ju]));
        REQUIRE(is_zero(c.Fm3[ju]));
        REQUIRE(is_zero(c.Hm1[ju]));
        REQUIRE(is_zero(c.Hm2[ju]));
        REQUIRE(is_zero(c.Hm3[ju]));
    }
}

}  // namespace

TEST_CASE("free system: every connection coefficient vanishes") {
    for (int m : {2, 3}) require_zero_connection(compute_connection(trivial_system(m)));
}

TEST_CASE("constant-coefficient golden case") {
    // f_i = 3 q_i - 2 p_i: F = 3 I, P = -2 I, everything else constant.
    std::vector<Expr> fs;
    for (int i = 1; i <= 2; ++i) fs.push_back(3 * v(Var::q(i)) - 2 * v(Var::p(i)));
    ConnectionCoefficients c = compute_connection(OdeSystem(2, fs));

    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            Expr delta = i == j ? Expr::integer(1) : Expr::integer(0);
            REQUIRE(is_zero(c.A.at(i, j) + delta));                       // A = -I
            REQUIRE(is_zero(c.B.at(i, j) + 2 * delta));                   // B = -2I
            REQUIRE(is_zero(c.Gx.at(i, j) + delta));                      // Gx = -I
            REQUIRE(is_zero(c.C.at(i, j) - Rational(1, 2) * delta));      // C = I/2
        }
    REQUIRE(is_zero(c.Hx + Rational(1, 4)));
    for (int j = 0; j < 2; ++j) {
        REQUIRE(is_zero(c.Hm1[static_cast<std::size_t>(j)]));
        REQUIRE(is_zero(c.Hm2[static_cast<std::size_t>(j)]));
        REQUIRE(is_zero(c.Hm3[static_cast<std::size_t>(j)]));
    }
}

TEST_CASE("second-order coupling golden case") {
    // f1 = q2^2, f2 = 0.
    OdeSystem sys(2, {pow(v(Var::q(2)), 2), Expr::integer(0)});
    ConnectionCoefficients c = compute_connection(sys);

    REQUIRE(is_zero(c.A.at(1, 2) + Rational(2, 3) * v(Var::q(2))));
    REQUIRE(is_zero(c.A.at(1, 1)));
    REQUIRE(is_zero(c.A.at(2, 1)));
    REQUIRE(is_zero(c.A.at(2, 2)));
    REQUIRE(is_zero(c.Gm2.at(1, 2, 2) + Rational(2, 3)));
    REQUIRE(is_zero(c.Gm2.at(1, 2, 1)));
    // Fm2_k = -(1/6) d(tr A)/dq_k vanishes because A is off-diagonal here.
    for (int j = 0; j < 2; ++j) REQUIRE(is_zero(c.Fm2[static_cast<std::size_t>(j)]));
}

TEST_CASE("high-order contact probes") {
    // Right-hand sides vanishing to order k at q = 1 leave coefficients of
    // lower normalization degree without constant part there.
    Expr q1 = v(Var::q(1));
    std::map<Var, Expr> at_one{{Var::q(1), Expr::integer(1)}};

    SECTION("A needs one q-derivative") {
        OdeSystem sys(2, {pow(q1 - Expr::integer(1), 2), Expr::integer(0)});
        ConnectionCoefficients c = compute_connection(sys);
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j)
                REQUIRE(is_zero(substitute(c.A.at(i, j), at_one)));
    }
    SECTION("C and Hx need at most two") {
        OdeSystem sys(2, {pow(q1 - Expr::integer(1), 3), Expr::integer(0)});
        ConnectionCoefficients c = compute_connection(sys);
        REQUIRE(is_zero(substitute(c.Hx, at_one)));
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j)
                REQUIRE(is_zero(substitute(c.C.at(i, j), at_one)));
    }
}

TEST_CASE("normalization fixes the frame components structurally") {
    ConnectionCoefficients c = compute_connection(circles_system(2));
    REQUIRE(c.alpha_is_identity);
    REQUIRE(c.beta_is_identity);
    REQUIRE(c.D_F1_G1_vanish);
}

TEST_CASE("residual identities hold across the corpus") {
    std::mt19937 rng(55440);
    std::vector<OdeSystem> corpus{trivial_system(2),  trivial_system(3),
                                  circles_system(2),  circles_system(3),
                                  OdeSystem(2, {exp(v(Var::y(1))), sin(v(Var::p(2)))})};
    for (int trial = 0; trial < 10; ++trial) corpus.push_back(random_polynomial_system(rng, 2));
    for (int trial = 0; trial < 2; ++trial)
        corpus.push_back(random_polynomial_system(rng, 3, 2, 3));

    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        ResidualReport rep = verify_residuals(corpus[idx]);
        CAPTURE(idx);
        for (const auto& check : rep.checks) {
            CAPTURE(check.name);
            REQUIRE(check.passed);
        }
        REQUIRE(rep.all_passed());
    }
}

TEST_CASE("connection of the circles system also decides its invariants") {
    // Cross-module coherence: the scalar coefficients exposed by the
    // connection agree with the invariant formulas on the worked example.
    OdeSystem circ = circles_system(2);
    ConnectionCoefficients c = compute_connection(circ);
    Expr u = Expr::integer(1) + pow(v(Var::p(1)), 2) + pow(v(Var::p(2)), 2);
    for (int j = 1; j <= 2; ++j) {
        REQUIRE(is_zero(c.Hm1[static_cast<std::size_t>(j - 1)] - v(Var::p(j)) / (2 * u)));
        REQUIRE(is_zero(c.E[static_cast<std::size_t>(j - 1)] + v(Var::p(j)) / u));
    }
}
