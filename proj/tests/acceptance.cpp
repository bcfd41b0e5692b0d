// Release gate: one pass/fail line per criterion, exit code = number of
// failures. Each criterion states its own time budget; exceeding the budget
// fails the criterion even if the checks themselves pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"

#include "test_support.hpp"

using namespace jetcal;
using testsupport::jet_vars;
using testsupport::random_point;
using testsupport::random_polynomial;
using testsupport::random_polynomial_system;

namespace {

Expr v(Var var) { return Expr::variable(var); }

int failures = 0;

void criterion(int number, const std::string& title, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = budget_seconds <= 0.0 || secs <= budget_seconds;
    if (ok && !in_budget) detail = "checks passed but exceeded the time budget";
    const bool pass = ok && in_budget;
    if (!pass) ++failures;
    std::printf("[%s] %d. %s (%.2fs", pass ? "PASS" : "FAIL", number, title.c_str(), secs);
    if (budget_seconds > 0.0) std::printf(", budget %.0fs", budget_seconds);
    std::printf(")%s%s\n", detail.empty() ? "" : " -- ", detail.c_str());
}

bool zero_matrix(const Tensor2& t) {
    for (int i = 1; i <= t.dim(); ++i)
        for (int j = 1; j <= t.dim(); ++j)
            if (!is_zero(t.at(i, j))) return false;
    return true;
}

bool zero_cube(const Tensor3& t) {
    for (int i = 1; i <= t.dim(); ++i)
        for (int j = 1; j <= t.dim(); ++j)
            for (int k = 1; k <= t.dim(); ++k)
                if (!is_zero(t.at(i, j, k))) return false;
    return true;
}

bool zero_list(const std::vector<Expr>& es) {
    for (const auto& e : es)
        if (!is_zero(e)) return false;
    return true;
}

Expr circles_u(int m) {
    Expr u = Expr::integer(1);
    for (int i = 1; i <= m; ++i) u = u + pow(v(Var::p(i)), 2);
    return u;
}

// --- criterion bodies -------------------------------------------------------

bool c1_trivial(std::string& detail) {
    for (int m : {2, 3}) {
        InvariantSet inv = compute_all(trivial_system(m));
        if (!zero_matrix(inv.W2) || !zero_cube(inv.I2) || !zero_matrix(inv.W3) ||
            !zero_matrix(inv.I4) || !is_zero(inv.Hx) || !zero_list(inv.Hm1)) {
            detail = "nonzero invariant at m = " + std::to_string(m);
            return false;
        }
        ConnectionCoefficients c = compute_connection(trivial_system(m));
        if (!zero_matrix(c.A) || !zero_matrix(c.B) || !zero_matrix(c.C) || !zero_matrix(c.Gx) ||
            !zero_cube(c.Gm2) || !zero_cube(c.Gm3) || !is_zero(c.Hx) || !zero_list(c.E) ||
            !zero_list(c.Fm2) || !zero_list(c.Fm3) || !zero_list(c.Hm1) || !zero_list(c.Hm2) ||
            !zero_list(c.Hm3)) {
            detail = "nonzero connection coefficient at m = " + std::to_string(m);
            return false;
        }
    }
    return true;
}

bool c2_circles(std::string& detail) {
    for (int m : {2, 3}) {
        OdeSystem circ = circles_system(m);
        InvariantSet inv = compute_all(circ);
        if (!zero_matrix(inv.W2) || !zero_cube(inv.I2) || !zero_matrix(inv.W3)) {
            detail = "W2/I2/W3 not identically zero at m = " + std::to_string(m);
            return false;
        }
        Expr u = circles_u(m);
        for (int j = 1; j <= m; ++j)
            for (int k = 1; k <= m; ++k) {
                Expr delta = j == k ? Expr::integer(1) : Expr::integer(0);
                Expr closed = Rational(1, 2) * delta / u -
                              Rational(1, 2) * (v(Var::p(j)) * v(Var::p(k))) / pow(u, 2);
                if (!is_zero(inv.I4.at(j, k) - closed)) {
                    detail = "I4 closed form mismatch at m = " + std::to_string(m);
                    return false;
                }
            }
    }
    return true;
}

bool c3_xonly_verdicts(std::string& detail) {
    Expr x = v(Var::x());
    std::vector<OdeSystem> yes{
        trivial_system(2),
        trivial_system(3),
        OdeSystem(2, {x, x}),
        OdeSystem(2, {sin(x), exp(x)}),
        OdeSystem(2, {pow(x, 3) + Expr::integer(1), Rational(1, 2) * pow(x, 2)}),
    };
    for (std::size_t i = 0; i < yes.size(); ++i)
        if (!is_trivializable(yes[i])) {
            detail = "family member " + std::to_string(i) + " wrongly rejected";
            return false;
        }
    if (is_trivializable(circles_system(2))) {
        detail = "circles wrongly accepted";
        return false;
    }
    return true;
}

bool c4_scalar_collapse(std::string& detail) {
    std::mt19937 rng(5551212);
    const std::vector<Var> scalar_vars{Var::x(), Var::y(1), Var::p(1), Var::q(1)};
    for (int trial = 0; trial < 5; ++trial) {
        Expr g = random_polynomial(rng, scalar_vars, 2, 4);
        std::map<Var, Expr> to2{{Var::y(1), v(Var::y(2))},
                                {Var::p(1), v(Var::p(2))},
                                {Var::q(1), v(Var::q(2))}};
        OdeSystem sys(2, {g, substitute(g, to2)});
        Tensor2 w3 = compute_W3(sys);
        if (!is_zero(w3.at(1, 2)) || !is_zero(w3.at(2, 1))) {
            detail = "off-diagonal W3 nonzero in trial " + std::to_string(trial);
            return false;
        }
        auto scalar_w3 = [&](const Expr& f, Var y, Var p, Var q) {
            Expr fy = diff(f, y), fp = diff(f, p), fq = diff(f, q);
            return fy + Rational(1, 3) * (fq * fp) -
                   Rational(1, 2) * total_derivative(sys, fp) +
                   Rational(1, 6) * total_derivative(sys, total_derivative(sys, fq)) +
                   Rational(2, 27) * pow(fq, 3) -
                   Rational(1, 3) * (fq * total_derivative(sys, fq));
        };
        if (!is_zero(w3.at(1, 1) - scalar_w3(sys.f(1), Var::y(1), Var::p(1), Var::q(1))) ||
            !is_zero(w3.at(2, 2) - scalar_w3(sys.f(2), Var::y(2), Var::p(2), Var::q(2)))) {
            detail = "diagonal W3 does not match the scalar expression in trial " +
                     std::to_string(trial);
            return false;
        }
    }
    return true;
}

ResidualCheck find_check(const ResidualReport& rep, const std::string& needle) {
    for (const auto& c : rep.checks)
        if (c.name.find(needle) != std::string::npos) return c;
    return {needle + " (missing)", false};
}

bool c5_form_agreement(std::string& detail) {
    std::mt19937 rng(24601);
    for (int trial = 0; trial < 25; ++trial) {
        OdeSystem sys = random_polynomial_system(rng, 2);
        ResidualReport rep = verify_residuals(sys);
        for (const char* needle : {"Hx agrees", "Hm1 agrees", "I4 via Hm2"})
            if (!find_check(rep, needle).passed) {
                detail = std::string(needle) + " failed in trial " + std::to_string(trial);
                return false;
            }
    }
    return true;
}

bool c6_residuals(std::string& detail) {
    std::mt19937 rng(606060);
    std::vector<OdeSystem> corpus{trivial_system(2),  trivial_system(3),
                                  circles_system(2),  circles_system(3),
                                  OdeSystem(2, {exp(v(Var::y(1))), sin(v(Var::p(2)))})};
    {
        std::vector<Expr> fs;
        for (int i = 1; i <= 2; ++i) fs.push_back(3 * v(Var::q(i)) - 2 * v(Var::p(i)));
        corpus.emplace_back(2, fs);
    }
    for (int trial = 0; trial < 10; ++trial) corpus.push_back(random_polynomial_system(rng, 2));
    for (int trial = 0; trial < 2; ++trial)
        corpus.push_back(random_polynomial_system(rng, 3, 2, 3));

    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        ResidualReport rep = verify_residuals(corpus[idx]);
        for (const auto& check : rep.checks)
            if (!check.passed) {
                detail = check.name + " failed on corpus system " + std::to_string(idx);
                return false;
            }
    }
    return true;
}

struct FamilyErrors {
    double w2{0}, i2{0}, w3{0}, i4{0};
};

FamilyErrors family_deviations(const OdeSystem& sys, const InvariantSet& inv, const JetPoint& pt,
                               const FdConfig& cfg) {
    const NumericInvariantSet n = fd_invariants(make_numeric(sys), pt, cfg);
    const int m = sys.dim();
    FamilyErrors e;
    auto dev = [](double fd, double sym) { return std::fabs(fd - sym) / (1.0 + std::fabs(sym)); };
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            e.w2 = std::max(e.w2, dev(n.W2[i - 1][j - 1], eval_at(inv.W2.at(i, j), pt)));
            e.w3 = std::max(e.w3, dev(n.W3[i - 1][j - 1], eval_at(inv.W3.at(i, j), pt)));
            e.i4 = std::max(e.i4, dev(n.I4[i - 1][j - 1], eval_at(inv.I4.at(i, j), pt)));
            for (int k = 1; k <= m; ++k)
                e.i2 = std::max(e.i2,
                                dev(n.I2[i - 1][j - 1][k - 1], eval_at(inv.I2.at(i, j, k), pt)));
        }
    return e;
}

bool c7_oracle(std::string& detail) {
    std::mt19937 rng(777777);
    FdConfig cfg;
    for (int trial = 0; trial < 25; ++trial) {
        OdeSystem sys = random_polynomial_system(rng, 2);
        InvariantSet inv = compute_all(sys);
        for (int rep = 0; rep < 5; ++rep) {
            JetPoint pt = random_point(rng, 2);
            FamilyErrors e = family_deviations(sys, inv, pt, cfg);
            if (e.w2 > 1e-6 || e.i2 > 1e-6 || e.w3 > 1e-4 || e.i4 > 1e-4) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "trial %d point %d: W2 %.2e I2 %.2e W3 %.2e I4 %.2e", trial, rep,
                              e.w2, e.i2, e.w3, e.i4);
                detail = buf;
                return false;
            }
        }
    }
    // Richardson probe: cubic/quartic terms make the order-2 truncation
    // visible, so halving the base step must shrink every family error.
    OdeSystem probe(2, {pow(v(Var::q(1)), 3) + pow(v(Var::q(2)), 4) +
                            pow(v(Var::p(2)), 2) * v(Var::q(2)) + v(Var::y(2)) * v(Var::x()),
                        pow(v(Var::p(1)), 3) + v(Var::q(1)) * v(Var::q(2)) + v(Var::y(1))});
    InvariantSet pinv = compute_all(probe);
    JetPoint pt;
    pt.x = 0.3;
    pt.y = {-0.4, 0.2};
    pt.p = {0.7, -0.6};
    pt.q = {0.5, 0.8};
    FdConfig coarse, fine;
    coarse.h = 1e-2;
    fine.h = 5e-3;
    FamilyErrors ec = family_deviations(probe, pinv, pt, coarse);
    FamilyErrors ef = family_deviations(probe, pinv, pt, fine);
    auto rich = [](double big, double small) { return big < 1e-10 || big / small >= 3.0; };
    if (ec.w2 < 1e-10) {
        detail = "Richardson probe shows no truncation error to measure";
        return false;
    }
    if (!rich(ec.w2, ef.w2) || !rich(ec.i2, ef.i2) || !rich(ec.w3, ef.w3) ||
        !rich(ec.i4, ef.i4)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "Richardson ratios W2 %.1f I2 %.1f W3 %.1f I4 %.1f",
                      ec.w2 / ef.w2, ec.i2 / ef.i2, ec.w3 / ef.w3, ec.i4 / ef.i4);
        detail = buf;
        return false;
    }
    return true;
}

bool c8_kernel(std::string& detail) {
    std::mt19937 rng(314159);
    const std::vector<Var> vars = jet_vars(2);
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);

    for (int trial = 0; trial < 200; ++trial) {
        Expr e = testsupport::random_expr(rng, vars);
        Var a = vars[pick(rng)], b = vars[pick(rng)];
        if (!is_zero(diff(diff(e, a), b) - diff(diff(e, b), a))) {
            detail = "mixed partials differ in trial " + std::to_string(trial);
            return false;
        }
    }
    for (int trial = 0; trial < 200; ++trial) {
        Expr a = testsupport::random_expr(rng, vars), b = testsupport::random_expr(rng, vars);
        Var w = vars[pick(rng)];
        if (!is_zero(diff(a * b, w) - (diff(a, w) * b + a * diff(b, w)))) {
            detail = "Leibniz (diff) fails in trial " + std::to_string(trial);
            return false;
        }
    }
    for (int trial = 0; trial < 200; ++trial) {
        OdeSystem sys = random_polynomial_system(rng, 2);
        Expr a = random_polynomial(rng, vars, 2, 3), b = random_polynomial(rng, vars, 2, 3);
        if (!is_zero(total_derivative(sys, a * b) -
                     (total_derivative(sys, a) * b + a * total_derivative(sys, b)))) {
            detail = "Leibniz (total derivative) fails in trial " + std::to_string(trial);
            return false;
        }
    }
    for (int trial = 0; trial < 200; ++trial) {
        Tensor2 t = Tensor2::build(
            2, [&](int, int) { return random_polynomial(rng, vars, 2, 3); });
        if (!is_zero(trace(traceless2(t)))) {
            detail = "trace of traceless part nonzero in trial " + std::to_string(trial);
            return false;
        }
    }
    for (int trial = 0; trial < 200; ++trial) {
        OdeSystem sys = random_polynomial_system(rng, 2);
        Tensor3 i2 = compute_I2(sys);
        for (int k = 1; k <= 2; ++k) {
            std::vector<Expr> c1, c2;
            for (int l = 1; l <= 2; ++l) {
                c1.push_back(i2.at(l, l, k));
                c2.push_back(i2.at(l, k, l));
            }
            if (!is_zero(Expr::sum(c1)) || !is_zero(Expr::sum(c2))) {
                detail = "I2 contraction nonzero in trial " + std::to_string(trial);
                return false;
            }
        }
    }
    return true;
}

int shell_status(const std::string& cmd, std::string* out = nullptr) {
    FILE* f = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!f) return -1;
    char buf[4096];
    std::size_t n;
    std::string acc;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) acc.append(buf, n);
    if (out) *out = acc;
    const int raw = pclose(f);
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

bool c9_cli(std::string& detail) {
    const std::string cli = JETCAL_CLI_PATH;
    const auto tmp = std::filesystem::temp_directory_path();

    const auto triv_path = (tmp / "jetcal_acceptance_triv.ode").string();
    {
        std::ofstream out(triv_path);
        out << "m = 2\nf1 = 0\nf2 = 0\n";
    }
    if (shell_status(cli + " trivializable " + triv_path) != 0) {
        detail = "trivializable on the free system should exit 0";
        return false;
    }
    if (shell_status(cli + " circles --m 2 | " + cli + " trivializable -") != 1) {
        detail = "trivializable on circles should exit 1";
        return false;
    }
    const auto bad_path = (tmp / "jetcal_acceptance_bad.ode").string();
    {
        std::ofstream out(bad_path);
        out << "m = 2\nf1 = q1 +\nf2 = 0\n";
    }
    if (shell_status(cli + " trivializable " + bad_path) != 2) {
        detail = "parse errors should exit 2";
        return false;
    }
    std::string json_out;
    if (shell_status(cli + " circles --m 2 | " + cli + " invariants --json -", &json_out) != 0) {
        detail = "invariants --json failed";
        return false;
    }
    try {
        const nlohmann::json doc = nlohmann::json::parse(json_out);
        if (doc.at("m").get<int>() != 2 || doc.at("W2").size() != 2 ||
            doc.at("I2")[0][0].size() != 2 || !doc.at("Hx").is_string() ||
            doc.at("Hm1").size() != 2 || doc.at("trivializable").get<bool>()) {
            detail = "invariants JSON document has the wrong shape";
            return false;
        }
    } catch (const std::exception& e) {
        detail = std::string("invariants JSON is invalid: ") + e.what();
        return false;
    }
    std::string rendered;
    if (shell_status(cli + " circles --m 2", &rendered) != 0) {
        detail = "circles generator failed";
        return false;
    }
    OdeSystem back = parse_system(rendered);
    OdeSystem want = circles_system(2);
    for (int i = 1; i <= 2; ++i)
        if (!is_zero(back.f(i) - want.f(i))) {
            detail = "circles DSL round trip does not reproduce the generator";
            return false;
        }
    return true;
}

}  // namespace

int main() {
    criterion(1, "free system: invariants and connection vanish identically (m = 2, 3)", 1.0,
              c1_trivial);
    criterion(2, "circles reference: W2 = I2 = W3 = 0 and the I4 closed form (m = 2, 3)", 10.0,
              c2_circles);
    criterion(3, "trivializability verdicts for the x-only families and circles", 0.0,
              c3_xonly_verdicts);
    criterion(4, "W3 collapses to the scalar expression on decoupled systems", 10.0,
              c4_scalar_collapse);
    criterion(5, "closed forms agree with the normalization-order computation (25 systems)", 60.0,
              c5_form_agreement);
    criterion(6, "structural residual identities across the corpus", 0.0, c6_residuals);
    criterion(7, "finite-difference oracle equivalence and Richardson order check", 120.0,
              c7_oracle);
    criterion(8, "kernel properties, 200 randomized cases each", 60.0, c8_kernel);
    criterion(9, "CLI contract: exit codes, JSON shape, DSL round trip", 5.0, c9_cli);

    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
