// Command-line front end: parse a system y_i''' = f_i from the small input
// DSL, print its differential invariants or connection coefficients, decide
// trivializability (exit 0 yes / 1 no / 2 error), generate reference systems,
// and run symbolic-vs-numeric self checks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jetcal/jetcal.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw jetcal::Error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

jetcal::JetPoint parse_point(const std::string& csv, int m) {
    std::vector<double> vals;
    std::string item;
    std::istringstream ss(csv);
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw jetcal::Error("--at: cannot parse '" + item + "' as a real number");
        }
    }
    const std::size_t want = 1 + 3 * static_cast<std::size_t>(m);
    if (vals.size() != want)
        throw jetcal::Error("--at: expected " + std::to_string(want) +
                            " comma-separated reals (x, y1..ym, p1..pm, q1..qm), got " +
                            std::to_string(vals.size()));
    jetcal::JetPoint pt;
    pt.x = vals[0];
    pt.y.assign(vals.begin() + 1, vals.begin() + 1 + m);
    pt.p.assign(vals.begin() + 1 + m, vals.begin() + 1 + 2 * m);
    pt.q.assign(vals.begin() + 1 + 2 * m, vals.end());
    return pt;
}

void print_matrix(const std::string& label, const jetcal::Tensor2& t) {
    for (int i = 1; i <= t.dim(); ++i)
        for (int j = 1; j <= t.dim(); ++j)
            std::cout << label << "[" << i << "," << j
                      << "] = " << jetcal::canonical_string(t.at(i, j)) << "\n";
}

void print_cube(const std::string& label, const jetcal::Tensor3& t) {
    for (int i = 1; i <= t.dim(); ++i)
        for (int j = 1; j <= t.dim(); ++j)
            for (int k = 1; k <= t.dim(); ++k)
                std::cout << label << "[" << i << "," << j << "," << k
                          << "] = " << jetcal::canonical_string(t.at(i, j, k)) << "\n";
}

void print_list(const std::string& label, const std::vector<jetcal::Expr>& es) {
    for (std::size_t j = 0; j < es.size(); ++j)
        std::cout << label << "[" << (j + 1) << "] = " << jetcal::canonical_string(es[j]) << "\n";
}

// Flush negative zero so that output is stable across stencil roundings.
double tidy(double v) { return v == 0.0 ? 0.0 : v; }

void print_numeric_matrix(const std::string& label, const std::vector<std::vector<double>>& t) {
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t[i].size(); ++j)
            std::printf("%s[%zu,%zu] = %.12g\n", label.c_str(), i + 1, j + 1, tidy(t[i][j]));
}

int run_invariants(const std::string& input, bool json, unsigned threads) {
    const jetcal::OdeSystem sys = jetcal::parse_system(read_input(input));
    const jetcal::InvariantSet inv = jetcal::compute_all(sys);
    const jetcal::TrivializabilityReport rep = jetcal::assess_trivializability(sys, threads);
    if (json) {
        std::cout << jetcal::to_json(inv, rep.trivializable, threads).dump(2) << "\n";
        return 0;
    }
    std::cout << "m = " << inv.m << "\n";
    print_matrix("W2", inv.W2);
    print_cube("I2", inv.I2);
    print_matrix("W3", inv.W3);
    print_matrix("I4", inv.I4);
    std::cout << "Hx = " << jetcal::canonical_string(inv.Hx) << "\n";
    print_list("Hm1", inv.Hm1);
    std::cout << "I4 symmetric: " << (jetcal::i4_is_symmetric(sys) ? "yes" : "no") << "\n";
    std::cout << "trivializable: " << (rep.trivializable ? "yes" : "no") << "\n";
    return 0;
}

int run_trivializable(const std::string& input, bool json, unsigned threads) {
    const jetcal::OdeSystem sys = jetcal::parse_system(read_input(input));
    const jetcal::TrivializabilityReport rep = jetcal::assess_trivializability(sys, threads);
    if (json) {
        nlohmann::json j;
        j["trivializable"] = rep.trivializable;
        j["sampling_suggests_vanishing"] = rep.sampling_suggests_vanishing;
        if (!rep.note.empty()) j["note"] = rep.note;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (rep.trivializable ? "trivializable" : "not trivializable") << "\n";
        if (!rep.note.empty()) std::cout << "note: " << rep.note << "\n";
    }
    return rep.trivializable ? 0 : 1;
}

int run_connection(const std::string& input, bool json, unsigned threads) {
    const jetcal::OdeSystem sys = jetcal::parse_system(read_input(input));
    const jetcal::ConnectionCoefficients c = jetcal::compute_connection(sys);
    if (json) {
        std::cout << jetcal::to_json(c, threads).dump(2) << "\n";
        return 0;
    }
    std::cout << "m = " << c.m << "\n";
    print_matrix("A", c.A);
    print_matrix("B", c.B);
    print_matrix("C", c.C);
    print_matrix("Gx", c.Gx);
    print_cube("Gm2", c.Gm2);
    print_cube("Gm3", c.Gm3);
    print_list("E", c.E);
    print_list("Fm2", c.Fm2);
    print_list("Fm3", c.Fm3);
    std::cout << "Hx = " << jetcal::canonical_string(c.Hx) << "\n";
    print_list("Hm1", c.Hm1);
    print_list("Hm2", c.Hm2);
    print_list("Hm3", c.Hm3);
    return 0;
}

int run_eval(const std::string& input, const std::string& at, double step, bool json) {
    const jetcal::OdeSystem sys = jetcal::parse_system(read_input(input));
    const jetcal::JetPoint pt = parse_point(at, sys.dim());
    jetcal::FdConfig cfg;
    if (step > 0) cfg.h = step;
    const jetcal::NumericInvariantSet n = jetcal::fd_invariants(jetcal::make_numeric(sys), pt, cfg);
    if (json) {
        std::cout << jetcal::to_json(n).dump(2) << "\n";
        return 0;
    }
    std::cout << "m = " << n.m << "\n";
    print_numeric_matrix("W2", n.W2);
    for (std::size_t i = 0; i < n.I2.size(); ++i)
        for (std::size_t j = 0; j < n.I2[i].size(); ++j)
            for (std::size_t k = 0; k < n.I2[i][j].size(); ++k)
                std::printf("I2[%zu,%zu,%zu] = %.12g\n", i + 1, j + 1, k + 1, tidy(n.I2[i][j][k]));
    print_numeric_matrix("W3", n.W3);
    print_numeric_matrix("I4", n.I4);
    std::printf("Hx = %.12g\n", tidy(n.Hx));
    for (std::size_t j = 0; j < n.Hm1.size(); ++j)
        std::printf("Hm1[%zu] = %.12g\n", j + 1, tidy(n.Hm1[j]));
    return 0;
}

// Symbolic invariants evaluated at pt vs. the finite-difference oracle.
// Returns the number of family-level failures and prints one line per family.
int oracle_compare(const jetcal::OdeSystem& sys, const jetcal::InvariantSet& inv,
                   const jetcal::JetPoint& pt, const jetcal::FdConfig& cfg, int point_index) {
    const int m = sys.dim();
    const jetcal::NumericInvariantSet n = jetcal::fd_invariants(jetcal::make_numeric(sys), pt, cfg);
    int failures = 0;
    auto judge = [&](const std::string& family, double worst, double tol) {
        const bool ok = worst <= tol;
        if (!ok) ++failures;
        std::printf("%s oracle %s at point %d: max deviation %.3g (tol %.3g)\n",
                    ok ? "ok:" : "FAIL:", family.c_str(), point_index, worst, tol);
    };
    auto dev = [](double fd, double sym) { return std::fabs(fd - sym) / (1.0 + std::fabs(sym)); };

    double w2 = 0, i2 = 0, w3 = 0, i4 = 0;
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            w2 = std::max(w2, dev(n.W2[i - 1][j - 1], jetcal::eval_at(inv.W2.at(i, j), pt)));
            w3 = std::max(w3, dev(n.W3[i - 1][j - 1], jetcal::eval_at(inv.W3.at(i, j), pt)));
            i4 = std::max(i4, dev(n.I4[i - 1][j - 1], jetcal::eval_at(inv.I4.at(i, j), pt)));
            for (int k = 1; k <= m; ++k)
                i2 = std::max(i2, dev(n.I2[i - 1][j - 1][k - 1],
                                      jetcal::eval_at(inv.I2.at(i, j, k), pt)));
        }
    judge("W2", w2, cfg.tolerance);
    judge("I2", i2, cfg.tolerance);
    judge("W3", w3, 100.0 * cfg.tolerance);
    judge("I4", i4, 100.0 * cfg.tolerance);
    return failures;
}

int run_check(const std::string& input, const std::string& at, double step, double tol,
              unsigned threads) {
    const jetcal::OdeSystem sys = jetcal::parse_system(read_input(input));
    int failures = 0;

    const jetcal::ResidualReport rep = jetcal::verify_residuals(sys, threads);
    for (const auto& c : rep.checks) {
        std::printf("%s %s\n", c.passed ? "ok:" : "FAIL:", c.name.c_str());
        if (!c.passed) ++failures;
    }

    jetcal::FdConfig cfg;
    if (step > 0) cfg.h = step;
    if (tol > 0) cfg.tolerance = tol;
    const jetcal::InvariantSet inv = jetcal::compute_all(sys);

    std::vector<jetcal::JetPoint> pts;
    if (!at.empty()) {
        pts.push_back(parse_point(at, sys.dim()));
    } else {
        // No point given: sample a few deterministic generic ones, skipping
        // any where the rhs or an invariant is singular.
        std::mt19937 rng(0xc0ffee);
        std::uniform_real_distribution<double> coord(-1.2, 1.2);
        while (pts.size() < 3) {
            jetcal::JetPoint pt;
            pt.x = coord(rng) + 1.7;
            for (int i = 0; i < sys.dim(); ++i) {
                pt.y.push_back(coord(rng));
                pt.p.push_back(coord(rng));
                pt.q.push_back(coord(rng));
            }
            try {
                for (int i = 1; i <= sys.dim(); ++i) (void)jetcal::eval_at(sys.f(i), pt);
                (void)jetcal::eval_at(inv.Hx, pt);
                pts.push_back(pt);
            } catch (const jetcal::EvalSingular&) {
                continue;
            }
        }
    }
    int idx = 1;
    for (const auto& pt : pts) failures += oracle_compare(sys, inv, pt, cfg, idx++);

    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Differential invariants and characteristic connection coefficients of "
        "third-order ODE systems y_i''' = f_i(x, y, y', y'')"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string at;
    double step = 0.0;
    double tol = 0.0;
    unsigned threads = 1;
    bool json = false;
    int m = 0;

    auto* inv_cmd = app.add_subcommand("invariants", "Print the invariants W2, I2, W3, I4, Hx, Hm1");
    auto* triv_cmd = app.add_subcommand(
        "trivializable", "Decide point-equivalence to y''' = 0; exit 0 yes, 1 no, 2 error");
    auto* conn_cmd = app.add_subcommand("connection", "Print the connection coefficients");
    auto* check_cmd = app.add_subcommand(
        "check", "Verify structural residual identities and the finite-difference oracle");
    auto* circ_cmd = app.add_subcommand("circles", "Emit the conformal-circles system in the DSL");
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate invariants numerically at a jet point");

    for (auto* cmd : {inv_cmd, triv_cmd, conn_cmd, check_cmd, eval_cmd})
        cmd->add_option("input", input, "System file in the DSL, or - for stdin");
    for (auto* cmd : {inv_cmd, triv_cmd, conn_cmd, eval_cmd})
        cmd->add_flag("--json", json, "Emit JSON instead of text");
    for (auto* cmd : {inv_cmd, triv_cmd, conn_cmd, check_cmd})
        cmd->add_option("--threads", threads, "Worker threads for exact zero tests");
    check_cmd->add_option("--at", at, "Jet point x,y1..ym,p1..pm,q1..qm for the oracle");
    eval_cmd->add_option("--at", at, "Jet point x,y1..ym,p1..pm,q1..qm")->required();
    for (auto* cmd : {check_cmd, eval_cmd})
        cmd->add_option("--step", step, "Finite-difference base step (default 1e-4)");
    check_cmd->add_option("--tol", tol, "Relative tolerance for W2/I2 (W3/I4 use 100x)");
    circ_cmd->add_option("--m", m, "Number of dependent variables (>= 2)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*inv_cmd) return run_invariants(input, json, threads);
        if (*triv_cmd) return run_trivializable(input, json, threads);
        if (*conn_cmd) return run_connection(input, json, threads);
        if (*check_cmd) return run_check(input, at, step, tol, threads);
        if (*eval_cmd) return run_eval(input, at, step, json);
        if (*circ_cmd) {
            std::cout << jetcal::render_system(jetcal::circles_system(m));
            return 0;
        }
    } catch (const jetcal::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
