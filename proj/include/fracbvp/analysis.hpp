#ifndef FRACBVP_ANALYSIS_HPP
#define FRACBVP_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fracbvp/common.hpp"
#include "fracbvp/expr.hpp"
#include "fracbvp/green.hpp"
#include "fracbvp/quadrature.hpp"
#include "fracbvp/specfun.hpp"

namespace fracbvp::analysis {

/// The Dirichlet problem D^{alpha,gamma} u + q(t) f(u) = 0, u(a) = u(b) = 0.
/// f is the identity expression for linear problems.
struct ProblemSpec {
    double a = 0.0;
    double b = 1.0;
    double alpha = 2.0;
    double gamma = 2.0;
    expr::Expr q;
    expr::Expr f;

    void validate() const {
        require(a < b, "ProblemSpec: need a < b");
        require(alpha > 1.0 && alpha <= gamma && gamma <= 2.0,
                "ProblemSpec: need 1 < alpha <= gamma <= 2");
        require(!q.empty() && q.variable_name() == 't', "ProblemSpec: q must be in t");
        require(!f.empty() && f.variable_name() == 'u', "ProblemSpec: f must be in u");
        for (int i = 0; i <= 64; ++i) // probe q over the domain
            (void)q(a + (b - a) * i / 64.0);
    }

    green::GreenKernel kernel() const { return {a, b, alpha, gamma}; }
};

enum class BoundKind {
    lyapunov_linear,
    lyapunov_nonlinear,
    hartman_wintner,
    eigen_lyapunov,
    eigen_hw,
};

inline const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::lyapunov_linear: return "lyapunov_linear";
        case BoundKind::lyapunov_nonlinear: return "lyapunov_nonlinear";
        case BoundKind::hartman_wintner: return "hartman_wintner";
        case BoundKind::eigen_lyapunov: return "eigen_lyapunov";
        case BoundKind::eigen_hw: return "eigen_hw";
    }
    return "?";
}

enum class Verdict {
    necessary_condition_holds,    // lhs > rhs: a nontrivial solution is not ruled out
    nontrivial_solution_excluded, // lhs <= rhs: the strict inequality fails
    indeterminate_at_tolerance,   // |lhs - rhs| inside the neutral zone
};

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::necessary_condition_holds: return "necessary-condition-holds";
        case Verdict::nontrivial_solution_excluded: return "nontrivial-solution-excluded";
        case Verdict::indeterminate_at_tolerance: return "indeterminate-at-tolerance";
    }
    return "?";
}

/// Strict inequalities get a neutral zone: ties within 1e-12 (relative) are
/// reported as indeterminate instead of silently picking a side.
inline Verdict decide(double lhs, double rhs) {
    const double zone = 1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    if (std::fabs(lhs - rhs) <= zone) return Verdict::indeterminate_at_tolerance;
    return lhs > rhs ? Verdict::necessary_condition_holds
                     : Verdict::nontrivial_solution_excluded;
}

struct BoundReport {
    BoundKind kind{};
    double lhs = 0.0;
    double rhs = 0.0;
    Verdict verdict{};
    double quad_error = 0.0;
    std::optional<double> omega;
    std::optional<double> norm_u;
};

// ---------------------------------------------------------------------------
// Necessary-condition bounds
// ---------------------------------------------------------------------------

/// Right side of the Lyapunov-type inequality: the reciprocal of the Green
/// diagonal maximum.
inline double lyapunov_bound(const ProblemSpec& spec) {
    return 1.0 / green::diag_max(spec.kernel()).value;
}

inline BoundReport lyapunov_check_linear(const ProblemSpec& spec,
                                         double quad_tol = 1e-12) {
    spec.validate();
    require(spec.f.is_variable(), "lyapunov_check_linear: f must be the identity");
    const auto lhs = quadrature::integrate_abs([&](double s) { return spec.q(s); },
                                               spec.a, spec.b, quad_tol);
    const double rhs = lyapunov_bound(spec);
    return {BoundKind::lyapunov_linear, lhs.value, rhs, decide(lhs.value, rhs),
            lhs.error_estimate, std::nullopt, std::nullopt};
}

inline BoundReport lyapunov_check_nonlinear(const ProblemSpec& spec, double omega,
                                            double quad_tol = 1e-12) {
    spec.validate();
    require(omega > 0.0, "lyapunov_check_nonlinear: omega must be positive");
    const double f_omega = spec.f(omega);
    if (f_omega <= 0.0)
        throw DomainError("lyapunov_check_nonlinear: f(omega) must be positive");
    const auto lhs = quadrature::integrate_abs([&](double s) { return spec.q(s); },
                                               spec.a, spec.b, quad_tol);
    const double rhs = lyapunov_bound(spec) * omega / f_omega;
    BoundReport rep{BoundKind::lyapunov_nonlinear, lhs.value, rhs,
                    decide(lhs.value, rhs), lhs.error_estimate, omega, std::nullopt};
    return rep;
}

namespace detail {

/// Breakpoints for integrals of weight * q over [a, b]: geometric grading at
/// both endpoints plus the sign changes of q so panels stay smooth.
inline std::vector<double> weighted_breakpoints(const ProblemSpec& spec, int levels) {
    auto pts = quadrature::graded_breakpoints(spec.a, spec.b, true, true, levels);
    double prev = spec.q(spec.a);
    const int scan_n = 1024;
    for (int i = 1; i <= scan_n; ++i) {
        const double x = spec.a + (spec.b - spec.a) * i / scan_n;
        const double v = spec.q(x);
        if (prev * v < 0.0) {
            double lo = x - (spec.b - spec.a) / scan_n, hi = x;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (lo + hi);
                (spec.q(m) * prev < 0.0 ? hi : lo) = m;
            }
            pts.push_back(0.5 * (lo + hi));
        }
        if (v != 0.0) prev = v;
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace detail

/// Hartman-Wintner-type inequality: the positive part of q is weighted by
/// (s-a)^(gamma-1) (b-s)^(alpha-1).
inline BoundReport hartman_wintner_check(const ProblemSpec& spec, double norm_u,
                                         double quad_tol = 1e-12) {
    (void)quad_tol;
    spec.validate();
    require(norm_u > 0.0, "hartman_wintner_check: norm_u must be positive");
    const double f_norm = spec.f(norm_u);
    if (f_norm <= 0.0)
        throw DomainError("hartman_wintner_check: f(norm_u) must be positive");

    const auto integrand = [&](double s) {
        const double qp = std::max(spec.q(s), 0.0);
        return pow_pos(s - spec.a, spec.gamma - 1.0) *
               pow_pos(spec.b - s, spec.alpha - 1.0) * qp;
    };
    const auto pts = detail::weighted_breakpoints(spec, 46);
    const double coarse = quadrature::integrate_panels(integrand, pts, 1);
    const double fine = quadrature::integrate_panels(integrand, pts, 2);
    const double rhs = std::tgamma(spec.alpha) *
                       std::pow(spec.b - spec.a, spec.gamma - 1.0) * norm_u / f_norm;
    return {BoundKind::hartman_wintner, fine, rhs, decide(fine, rhs),
            std::fabs(fine - coarse), std::nullopt, norm_u};
}

// ---------------------------------------------------------------------------
// theta / theta* and the Krasnoselskii-type hypotheses
// ---------------------------------------------------------------------------

struct ThetaPair {
    double theta = 0.0;
    double theta_star = 0.0;
    double theta_quad_error = 0.0;
    double theta_star_quad_error = 0.0;
    double crossing_point = 0.0; // r used for the theta* branch split
};

/// theta  = 1 / int_a^b G(s,s) q(s) ds
/// theta* = 1 / int_{(3a+b)/4}^{(3b+a)/4} G(s,s) phi(s) q(s) ds
/// Both require q >= 0 and not a.e. zero.
inline ThetaPair theta_pair(const ProblemSpec& spec, double quad_tol = 1e-12) {
    (void)quad_tol;
    spec.validate();
    const auto k = spec.kernel();

    for (int i = 0; i <= 2048; ++i) {
        const double s = spec.a + (spec.b - spec.a) * i / 2048.0;
        if (spec.q(s) < 0.0)
            throw InvalidArgument("theta_pair: q must be nonnegative on [a, b] "
                                  "(negative at t = " + std::to_string(s) + ")");
    }

    const auto diag_q = [&](double s) { return k.diagonal(s) * spec.q(s); };
    const auto th = quadrature::integrate_endpoint_graded(diag_q, spec.a, spec.b,
                                                          true, true, 46);
    if (!(th.value > 0.0))
        throw NumericError("theta_pair: int G(s,s) q(s) ds is not positive");

    const auto m = green::make_minorant(k);
    const auto diag_phi_q = [&](double s) { return k.diagonal(s) * m.phi(s) * spec.q(s); };
    const double t1 = k.window_lo(), t2 = k.window_hi();
    std::vector<double> left{t1, m.r}, right{m.r, t2};
    const double coarse = quadrature::integrate_panels(diag_phi_q, left, 8) +
                          quadrature::integrate_panels(diag_phi_q, right, 8);
    const double fine = quadrature::integrate_panels(diag_phi_q, left, 16) +
                        quadrature::integrate_panels(diag_phi_q, right, 16);
    if (!(fine > 0.0))
        throw NumericError("theta_pair: int G(s,s) phi(s) q(s) ds is not positive "
                           "(the minorant fails to stay positive on the window)");

    ThetaPair out;
    out.theta = 1.0 / th.value;
    out.theta_quad_error = th.error_estimate / (th.value * th.value);
    out.theta_star = 1.0 / fine;
    out.theta_star_quad_error = std::fabs(fine - coarse) / (fine * fine);
    out.crossing_point = m.r;
    return out;
}

enum class ExistenceVerdict {
    hypotheses_satisfied, // at least one positive solution with r1 <= ||u|| <= r2
    hypothesis_A_fails,
    hypothesis_B_fails,
};

inline const char* to_string(ExistenceVerdict v) {
    switch (v) {
        case ExistenceVerdict::hypotheses_satisfied: return "hypotheses-satisfied";
        case ExistenceVerdict::hypothesis_A_fails: return "hypothesis-A-fails";
        case ExistenceVerdict::hypothesis_B_fails: return "hypothesis-B-fails";
    }
    return "?";
}

struct ExistenceResult {
    ExistenceVerdict verdict{};
    double fail_point = 0.0;  // u0 where the failing hypothesis breaks
    double margin_a = 0.0;    // min over [0,r1] of f(u) - theta* r1
    double margin_b = 0.0;    // min over [0,r2] of theta r2 - f(u)
    int grid_points = 0;
};

/// Hypotheses (A) f(u) >= theta* r1 on [0, r1] and (B) f(u) <= theta r2 on
/// [0, r2], checked on a dense grid (f is continuous, so a grid check is
/// sound up to the reported resolution).
inline ExistenceResult existence_check(const ProblemSpec& spec, double r1, double r2,
                                       const ThetaPair& tp, int n_grid = 10000) {
    spec.validate();
    require(0.0 < r1 && r1 < r2, "existence_check: need 0 < r1 < r2");
    ExistenceResult out;
    out.grid_points = n_grid + 1;
    out.margin_a = std::numeric_limits<double>::infinity();
    out.margin_b = std::numeric_limits<double>::infinity();
    double fail_a = 0.0, fail_b = 0.0;
    bool a_ok = true, b_ok = true;
    for (int i = 0; i <= n_grid; ++i) {
        const double u = r2 * i / n_grid;
        const double fu = spec.f(u);
        if (u <= r1) {
            const double margin = fu - tp.theta_star * r1;
            if (margin < out.margin_a) { out.margin_a = margin; fail_a = u; }
            if (margin < 0.0) a_ok = false;
        }
        const double margin = tp.theta * r2 - fu;
        if (margin < out.margin_b) { out.margin_b = margin; fail_b = u; }
        if (margin < 0.0) b_ok = false;
    }
    if (!a_ok) {
        out.verdict = ExistenceVerdict::hypothesis_A_fails;
        out.fail_point = fail_a;
    } else if (!b_ok) {
        out.verdict = ExistenceVerdict::hypothesis_B_fails;
        out.fail_point = fail_b;
    } else {
        out.verdict = ExistenceVerdict::hypotheses_satisfied;
    }
    return out;
}

enum class NonexistenceVerdict {
    no_nontrivial_solution, // f(u) < theta u on the whole range
    condition_fails,
};

inline const char* to_string(NonexistenceVerdict v) {
    return v == NonexistenceVerdict::no_nontrivial_solution ? "no-nontrivial-solution"
                                                            : "condition-fails";
}

struct NonexistenceResult {
    NonexistenceVerdict verdict{};
    double fail_point = 0.0;
    double worst_margin = 0.0; // min over the grid of theta u - f(u)
};

/// f(u) < theta |u| on a dense grid of [u_lo, u_hi] rules out nontrivial
/// solutions; f must be nondecreasing (checked on the same grid).
inline NonexistenceResult nonexistence_check(const ProblemSpec& spec, double u_lo,
                                             double u_hi, const ThetaPair& tp,
                                             int n_grid = 10000) {
    spec.validate();
    require(0.0 < u_lo && u_lo < u_hi, "nonexistence_check: need 0 < u_lo < u_hi");
    NonexistenceResult out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    double prev_f = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (int i = 0; i <= n_grid; ++i) {
        const double u = u_lo + (u_hi - u_lo) * i / n_grid;
        const double fu = spec.f(u);
        if (fu < prev_f - 1e-12 * std::max(1.0, std::fabs(prev_f)))
            throw InvalidArgument("nonexistence_check: f is not nondecreasing");
        prev_f = fu;
        const double margin = tp.theta * u - fu;
        if (margin < out.worst_margin) { out.worst_margin = margin; out.fail_point = u; }
        if (margin <= 0.0) ok = false;
    }
    out.verdict = ok ? NonexistenceVerdict::no_nontrivial_solution
                     : NonexistenceVerdict::condition_fails;
    return out;
}

// ---------------------------------------------------------------------------
// Eigenvalue lower bounds for the problem on [0, 1] (and scaled intervals)
// ---------------------------------------------------------------------------

/// |lambda| > (gamma+alpha-2)^(gamma+alpha-2)/(alpha-1)^(alpha-1)
///            * Gamma(alpha)/(gamma-1)^(gamma-1)   on [0, 1].
inline double eigen_lower_bound_lyapunov(double alpha, double gamma_) {
    require(alpha > 1.0 && alpha <= gamma_ && gamma_ <= 2.0,
            "eigen_lower_bound_lyapunov: need 1 < alpha <= gamma <= 2");
    const double p = gamma_ + alpha - 2.0;
    return std::pow(p, p) / std::pow(alpha - 1.0, alpha - 1.0) * std::tgamma(alpha) /
           std::pow(gamma_ - 1.0, gamma_ - 1.0);
}

/// lambda > Gamma(gamma+alpha)/Gamma(gamma) (b-a)^(-alpha).
inline double eigen_lower_bound_hw(double alpha, double gamma_, double length) {
    require(alpha > 1.0 && alpha <= gamma_ && gamma_ <= 2.0,
            "eigen_lower_bound_hw: need 1 < alpha <= gamma <= 2");
    require(length > 0.0, "eigen_lower_bound_hw: length must be positive");
    return specfun::gamma_ratio(gamma_ + alpha, gamma_) * std::pow(length, -alpha);
}

} // namespace fracbvp::analysis

#endif // FRACBVP_ANALYSIS_HPP
