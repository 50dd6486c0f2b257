// Acceptance suite: one line per criterion, [PASS]/[FAIL] plus key numbers.
// Every tolerance is pinned here; nothing defers to later calibration.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracbvp/analysis.hpp"
#include "fracbvp/expr.hpp"
#include "fracbvp/fracops.hpp"
#include "fracbvp/green.hpp"
#include "fracbvp/solver.hpp"
#include "fracbvp/specfun.hpp"

using namespace fracbvp;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1e-300, std::fabs(want));
}

template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol) {
        if (fc > fd) { hi = d; d = c; fd = fc; c = hi - phi * (hi - lo); fc = f(c); }
        else { lo = c; c = d; fc = fd; d = lo + phi * (hi - lo); fd = f(d); }
    }
    return f(0.5 * (lo + hi));
}

analysis::ProblemSpec make_spec(double a, double b, double alpha, double gamma,
                                const std::string& q, const std::string& f = "u") {
    return {a, b, alpha, gamma, expr::parse(q, 't'), expr::parse(f, 'u')};
}

std::string fmt(const char* pattern, double v1, double v2 = 0.0, double v3 = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, v1, v2, v3);
    return buf;
}

// --------------------------------------------------------------------------

Outcome criterion1_classical_lyapunov() {
    std::mt19937 rng(1001);
    std::uniform_real_distribution<double> ua(-5.0, 5.0), len(0.3, 6.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double a = ua(rng), b = a + len(rng);
        worst = std::max(worst, rel_err(lyapunov_bound(make_spec(a, b, 2.0, 2.0, "1")),
                                        4.0 / (b - a)));
    }
    return {worst <= 1e-12, fmt("worst rel err %.3g (tol 1e-12)", worst)};
}

Outcome criterion2_rl_reduction() {
    std::mt19937 rng(1002);
    std::uniform_real_distribution<double> ua(-5.0, 5.0), len(0.3, 6.0),
        al(1.0 + 1e-9, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double a = ua(rng), b = a + len(rng), alpha = al(rng);
        const double want = std::tgamma(alpha) * std::pow(4.0 / (b - a), alpha - 1.0);
        worst = std::max(
            worst, rel_err(lyapunov_bound(make_spec(a, b, alpha, alpha, "1")), want));
    }
    return {worst <= 1e-12, fmt("worst rel err %.3g (tol 1e-12)", worst)};
}

Outcome criterion3_bound_max_identity() {
    std::mt19937 rng(1003);
    std::uniform_real_distribution<double> ua(-3.0, 3.0), len(0.3, 4.0), al(1.02, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double a = ua(rng), b = a + len(rng), alpha = al(rng);
        const double gamma = std::uniform_real_distribution<double>(alpha, 2.0)(rng);
        const auto spec = make_spec(a, b, alpha, gamma, "1");
        const auto k = spec.kernel();
        const double mx = golden_section_max(
            [&](double s) { return k.diagonal(s); }, a, b, 1e-12 * (b - a));
        worst = std::max(worst, std::fabs(lyapunov_bound(spec) * mx - 1.0));
    }
    return {worst <= 1e-8, fmt("worst |product - 1| = %.3g (tol 1e-8)", worst)};
}

Outcome criterion4_ml_oracles() {
    double worst_exp = 0.0, worst_sin = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = -5.0 + 10.0 * i / 2000.0;
        worst_exp = std::max(worst_exp,
                             std::fabs(specfun::ml_eval(1.0, 1.0, x).value - std::exp(x)));
    }
    for (int i = 1; i <= 2000; ++i) {
        const double x = 100.0 * i / 2000.0;
        const double want = std::sin(std::sqrt(x)) / std::sqrt(x);
        worst_sin = std::max(
            worst_sin, std::fabs(specfun::ml_eval(2.0, 2.0, -x).value - want));
    }
    const bool pass = worst_exp <= 1e-10 && worst_sin <= 1e-10;
    return {pass, fmt("sup|E11-exp| = %.3g, sup|E22-sinc| = %.3g (tol 1e-10)",
                      worst_exp, worst_sin)};
}

Outcome criterion5_eigenroots() {
    const auto rl = specfun::ml_roots(2.0, 2.0, 260.0, 2000, 1e-10);
    if (rl.roots.size() < 5) return {false, "fewer than 5 roots found"};
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k)
        worst = std::max(worst, std::fabs(rl.roots[k - 1].lambda -
                                          specfun::kPi * specfun::kPi * k * k));
    return {worst <= 1e-8, fmt("worst |root - (pi k)^2| = %.3g (tol 1e-8)", worst)};
}

Outcome criterion6_bound_spectrum() {
    int cells_with_roots = 0;
    double worst_margin = 1e300;
    for (int i = 0; i < 5; ++i) {
        for (int j = i; j < 5; ++j) {
            const double alpha = 1.5 + 0.125 * i, gamma = 1.5 + 0.125 * j;
            const auto rl = specfun::ml_roots(alpha, gamma, 280.0, 2000, 1e-9);
            if (rl.roots.empty()) continue;
            ++cells_with_roots;
            const double first = rl.roots.front().lambda;
            const double lb = std::max(analysis::eigen_lower_bound_lyapunov(alpha, gamma),
                                       analysis::eigen_lower_bound_hw(alpha, gamma, 1.0));
            worst_margin = std::min(worst_margin, first - lb);
        }
    }
    const bool pass = cells_with_roots > 0 && worst_margin > 0.0;
    return {pass, fmt("%g of 15 cells have roots; min (root - bound) = %.4g",
                      static_cast<double>(cells_with_roots), worst_margin)};
}

Outcome criterion7_theta_oracle() {
    double worst = 0.0;
    for (double p : {0.0, 0.5, 1.0, 2.0}) {
        char q[16];
        std::snprintf(q, sizeof q, "t^%g", p);
        const auto spec = make_spec(0.0, 1.0, 1.75, 2.0, p == 0.0 ? "1" : q, "cosh(u)");
        const auto tp = analysis::theta_pair(spec);
        const double want = specfun::gamma_ratio(2.0 + p + 1.75, 2.0 + p);
        worst = std::max(worst, std::fabs(tp.theta - want) / std::max(1.0, want));
    }

    const auto tp1 = analysis::theta_pair(make_spec(0.0, 1.0, 1.75, 2.0, "t^2", "cosh(u)"));
    const auto tp2 =
        analysis::theta_pair(make_spec(0.0, 1.0, 1.5, 1.5, "sqrt(t)", "exp(-1/(u+1))"));
    std::ostringstream ledger;
    ledger << "theta oracle worst rel err " << fmt("%.3g (tol 1e-8); ", worst)
           << "ledger: ex1 theta " << tp1.theta << " vs paper 8.9, theta* "
           << tp1.theta_star << " vs 11.61; ex2 theta " << tp2.theta
           << " vs 4.23, theta* " << tp2.theta_star << " vs 7.29";
    const bool ledger_populated =
        std::fabs(tp1.theta - 8.9) > 0.05 || std::fabs(tp1.theta_star - 11.61) > 0.05 ||
        std::fabs(tp2.theta - 4.23) > 0.05 || std::fabs(tp2.theta_star - 7.29) > 0.05;
    return {worst <= 1e-8 && ledger_populated, ledger.str()};
}

Outcome criterion8_crossing_point() {
    const green::GreenKernel ex1{0.0, 1.0, 1.75, 2.0};
    const double r = green::crossing_r(ex1);
    const bool two_decimals = std::floor(r * 100.0) / 100.0 == 0.58;

    std::mt19937 rng(1008);
    std::uniform_real_distribution<double> ua(-3.0, 3.0), len(0.4, 4.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double a = ua(rng), b = a + len(rng);
        const green::GreenKernel k{a, b, 2.0, 2.0};
        worst = std::max(worst,
                         std::fabs(green::crossing_r(k) - 0.5 * (a + b)) / (b - a));
    }
    return {two_decimals && worst <= 1e-10,
            fmt("r(example 1) = %.6f; classical linear-oracle err %.3g (tol 1e-10)", r,
                worst)};
}

Outcome criterion9_green_properties() {
    std::mt19937 rng(1009);
    std::uniform_real_distribution<double> ua(-3.0, 3.0), len(0.4, 4.0), al(1.02, 2.0),
        unit(0.0, 1.0);

    double min_g = 1e300, worst_diag = -1e300, worst_minorant = 1e300;
    double min_g_alpha = 0, min_g_gamma = 0, min_g_t = 0, min_g_s = 0;

    for (int trial = 0; trial < 20; ++trial) {
        const double a = ua(rng), b = a + len(rng), alpha = al(rng);
        const double gamma = std::uniform_real_distribution<double>(alpha, 2.0)(rng);
        const green::GreenKernel k{a, b, alpha, gamma};

        for (int i = 0; i < 5000; ++i) { // 1e5 samples across the 20 kernels
            const double t = a + (b - a) * unit(rng), s = a + (b - a) * unit(rng);
            const double g = k(t, s);
            if (g < min_g) {
                min_g = g;
                min_g_alpha = alpha; min_g_gamma = gamma; min_g_t = t; min_g_s = s;
            }
        }

        for (int i = 0; i < 50; ++i) {
            const double s = a + (b - a) * unit(rng);
            const double diag = k(s, s);
            double mx = -1e300;
            for (int j = 0; j <= 1000; ++j)
                mx = std::max(mx, k(a + (b - a) * j / 1000.0, s));
            worst_diag = std::max(worst_diag, mx - diag);
        }

        const auto m = green::make_minorant(k);
        const double t1 = k.window_lo(), t2 = k.window_hi();
        for (int i = 0; i < 1000; ++i) {
            const double s = a + (b - a) * (1e-3 + (1.0 - 2e-3) * unit(rng));
            double mn = 1e300;
            for (int j = 0; j <= 400; ++j)
                mn = std::min(mn, k(t1 + (t2 - t1) * j / 400.0, s));
            worst_minorant = std::min(worst_minorant, mn - m.phi(s) * k.diagonal(s));
        }
    }

    const bool nonneg_ok = min_g >= -1e-14;
    const bool diag_ok = worst_diag <= 1e-12;
    const bool minorant_ok = worst_minorant >= -1e-12;
    std::ostringstream d;
    d << "nonneg " << (nonneg_ok ? "ok" : "VIOLATED") << " (min G = " << min_g
      << " at alpha=" << min_g_alpha << ", gamma=" << min_g_gamma << ", t=" << min_g_t
      << ", s=" << min_g_s << "); diagonal-max ok? " << (diag_ok ? "yes" : "no")
      << " (worst excess " << worst_diag << "); minorant "
      << (minorant_ok ? "ok" : "VIOLATED") << " (worst slack " << worst_minorant
      << "). Positivity and the minorant genuinely fail for gamma > alpha.";
    return {nonneg_ok && diag_ok && minorant_ok, d.str()};
}

Outcome criterion10_operator_algebra() {
    std::mt19937 rng(1010);
    std::uniform_real_distribution<double> pick(1e-3, 3.0);
    double worst_semi = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double nu = pick(rng), a = pick(rng), b = pick(rng);
        const fracops::PowerTerm term{2.3, nu, 0.0};
        const auto two = fracops::rl_integral_power(fracops::rl_integral_power(term, a), b);
        const auto one = fracops::rl_integral_power(term, a + b);
        worst_semi = std::max(worst_semi, rel_err(two.coefficient, one.coefficient));
    }

    std::uniform_real_distribution<double> pa(1.05, 1.95), off(0.05, 3.0);
    double worst_inv = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double alpha = pa(rng);
        const double gamma = std::uniform_real_distribution<double>(alpha, 2.0)(rng);
        const fracops::PowerTerm term{1.3, gamma + off(rng), 0.0};
        const auto back =
            fracops::rl_integral_power(fracops::hilfer_power(term, alpha, gamma), alpha);
        worst_inv = std::max(worst_inv, rel_err(back.coefficient, term.coefficient));
    }

    std::vector<double> grid(2001);
    for (int i = 0; i <= 2000; ++i) grid[i] = i / 2000.0;
    double worst_num = 0.0;
    for (double nu : {1.0, 2.0, 3.5}) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            v[i] = std::pow(grid[i], nu - 1.0);
        const fracops::SampledFn f(grid, v);
        for (double order : {0.5, 1.0, 1.75}) {
            const auto closed = fracops::rl_integral_power({1.0, nu, 0.0}, order);
            for (double t : {0.3, 0.7, 1.0})
                worst_num = std::max(worst_num, std::fabs(fracops::rl_integral_numeric(
                                                              f, order, t) -
                                                          closed.value(t)));
        }
    }
    const bool pass = worst_semi <= 1e-12 && worst_inv <= 1e-12 && worst_num <= 1e-6;
    return {pass, fmt("semigroup %.3g (tol 1e-12), inversion %.3g (tol 1e-12), "
                      "numeric-vs-closed %.3g (tol 1e-6)",
                      worst_semi, worst_inv, worst_num)};
}

Outcome criterion11_eigenfunction_residual() {
    const auto res = solver::eigen_solve(1.75, 2.0, 1);
    if (res.pairs.empty()) return {false, "no eigenpair found"};
    const auto& p = res.pairs.front();
    const bool pass = p.series_length >= 60 && p.derivative_residual <= 1e-6;
    return {pass, fmt("lambda_1 = %.10g, series length %g, residual %.3g (tol 1e-6)",
                      p.lambda, static_cast<double>(p.series_length),
                      p.derivative_residual)};
}

Outcome criterion12_solver_certification() {
    solver::PicardOptions opt;
    opt.n_grid = 800;

    const auto spec1 = make_spec(0.0, 1.0, 1.75, 2.0, "t^2", "cosh(u)");
    const auto sol1 = solver::picard_solve(spec1, opt);
    const double cert1 = solver::residual_certify(spec1, sol1);
    const bool in_window = sol1.norm() >= 1.0 / 12.0 && sol1.norm() <= 1.0 / 8.0;

    const auto spec2 = make_spec(0.0, 1.0, 1.5, 1.5, "sqrt(t)", "exp(-1/(u+1))");
    const auto sol2 = solver::picard_solve(spec2, opt);
    const double cert2 = solver::residual_certify(spec2, sol2);

    solver::PicardOptions small;
    small.n_grid = 64;
    const auto sol0 = solver::picard_solve(make_spec(0.0, 1.0, 1.75, 2.0, "0"), small);

    const bool pass = sol1.converged && cert1 <= 1e-5 && sol2.converged &&
                      cert2 <= 1e-5 && sol0.norm() == 0.0 && sol0.residual_sup == 0.0;
    std::ostringstream d;
    d << "ex1: norm " << sol1.norm() << ", certified residual " << cert1
      << ", published window [1/12, 1/8] " << (in_window ? "contains" : "does NOT contain")
      << " the Picard norm (reported, not a failure); ex2: norm " << sol2.norm()
      << ", certified " << cert2 << "; q=0 exact zero: " << (sol0.norm() == 0.0);
    return {pass, d.str()};
}

Outcome criterion13_classical_hw() {
    std::mt19937 rng(1013);
    std::uniform_real_distribution<double> ua(-3.0, 3.0), len(0.4, 4.0), c(0.2, 5.0);
    double worst_lhs = 0.0, worst_rhs = 0.0, worst_weight = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double a = ua(rng), b = a + len(rng), q = c(rng);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", q);
        const auto rep = analysis::hartman_wintner_check(make_spec(a, b, 2.0, 2.0, buf), 1.0);
        worst_lhs = std::max(worst_lhs, rel_err(rep.lhs, q * std::pow(b - a, 3) / 6.0));
        worst_rhs = std::max(worst_rhs, rel_err(rep.rhs, b - a));
        for (int j = 1; j < 8; ++j) { // the weight itself is (s-a)(b-s)
            const double s = a + (b - a) * j / 8.0;
            worst_weight = std::max(
                worst_weight, rel_err(std::pow(s - a, 1.0) * std::pow(b - s, 1.0),
                                      (s - a) * (b - s)));
        }
    }
    const bool pass = worst_lhs <= 1e-12 && worst_rhs <= 1e-12 && worst_weight <= 1e-12;
    return {pass, fmt("lhs rel err %.3g, rhs rel err %.3g (tol 1e-12)", worst_lhs,
                      worst_rhs)};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"classical Lyapunov reduction 4/(b-a)", criterion1_classical_lyapunov},
        {"Riemann-Liouville reduction Gamma(a)4^(a-1)/(b-a)^(a-1)", criterion2_rl_reduction},
        {"bound x diagonal-maximum identity", criterion3_bound_max_identity},
        {"Mittag-Leffler identity oracles", criterion4_ml_oracles},
        {"classical eigenroots (pi k)^2", criterion5_eigenroots},
        {"first root exceeds both lower bounds on the (alpha,gamma) grid",
         criterion6_bound_spectrum},
        {"theta quadrature vs Gamma-ratio closed form + discrepancy ledger",
         criterion7_theta_oracle},
        {"crossing point r: example value and linear oracle", criterion8_crossing_point},
        {"Green kernel: nonnegativity, diagonal maximum, minorant",
         criterion9_green_properties},
        {"operator algebra: semigroup, inversion, numeric agreement",
         criterion10_operator_algebra},
        {"eigenfunction derivative residual at (7/4, 2)", criterion11_eigenfunction_residual},
        {"Picard solves certified for both worked examples", criterion12_solver_certification},
        {"classical Hartman-Wintner reduction", criterion13_classical_hw},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failed += out.pass ? 0 : 1;
        std::printf("[%s] criterion %zu: %s -- %s\n", out.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
