#ifndef FRACBVP_SOLVER_HPP
#define FRACBVP_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fracbvp/analysis.hpp"
#include "fracbvp/common.hpp"
#include "fracbvp/fracops.hpp"
#include "fracbvp/green.hpp"
#include "fracbvp/quadrature.hpp"
#include "fracbvp/specfun.hpp"

namespace fracbvp::solver {

struct PicardOptions {
    int n_grid = 800;        // intervals; the grid carries n_grid + 1 points
    double tol = 1e-10;      // sup-norm change between sweeps
    int max_iter = 60;
    double divergence_ceiling = 1e8;
    int quad_levels = 24;    // graded-mesh depth for the singular integrals
    int quad_splits = 1;
    double u0 = 0.0;         // constant initial iterate
};

struct SolutionGrid {
    std::vector<double> grid;
    std::vector<double> values;
    int iterations = 0;
    double residual_sup = 0.0; // sup |u - Tu| on the grid, recomputed at the end
    bool converged = false;
    bool diverged = false;

    double norm() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::fabs(v));
        return m;
    }
};

namespace detail {

/// Discretized integral operator Tu(t) = int_a^b G(t,s) q(s) f(u(s)) ds on a
/// uniform t-grid. The two pieces
///   Tu(t) = rho(t)^(gamma-1) I_b - I_t,
///   I_b = (1/Gamma(a)) int_a^b (b-s)^(alpha-1) w(s) ds,
///   I_t = (1/Gamma(a)) int_a^t (t-s)^(alpha-1) w(s) ds,   w = q f(u),
/// are evaluated with the kernel-absorbing substitution s = t - (t-a) tau^(1/alpha)
/// on a graded tau-mesh. Nodes, jacobians and q-values are precomputed once;
/// each sweep only re-evaluates f at interpolated u.
class PicardOperator {
public:
    PicardOperator(const analysis::ProblemSpec& spec, const std::vector<double>& grid,
                   int levels, int splits)
        : spec_(spec), grid_(grid), h_((grid.back() - grid.front()) / (grid.size() - 1)) {
        const double a = spec.a, b = spec.b, alpha = spec.alpha;
        const double inv_alpha = 1.0 / alpha;
        const double norm = 1.0 / (alpha * std::tgamma(alpha));

        auto pts = quadrature::graded_breakpoints(0.0, 1.0, true, true, levels);
        std::vector<double> tau, wq;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double step = (pts[i + 1] - pts[i]) / splits;
            for (int k = 0; k < splits; ++k) {
                const double lo = pts[i] + k * step;
                const double mid = lo + 0.5 * step, half = 0.5 * step;
                for (int j = 0; j < 4; ++j) {
                    tau.push_back(mid - half * quadrature::detail::kGlX[j]);
                    wq.push_back(half * quadrature::detail::kGlW[j]);
                    tau.push_back(mid + half * quadrature::detail::kGlX[j]);
                    wq.push_back(half * quadrature::detail::kGlW[j]);
                }
            }
        }

        const auto make_nodes = [&](double t, NodeSet& ns) {
            ns.s.resize(tau.size());
            ns.w.resize(tau.size());
            ns.q.resize(tau.size());
            const double span = t - a;
            for (std::size_t j = 0; j < tau.size(); ++j) {
                double s = t - span * std::pow(tau[j], inv_alpha);
                s = std::clamp(s, a, t);
                ns.s[j] = s;
                ns.w[j] = wq[j];
                ns.q[j] = spec.q(s);
            }
            ns.scale = std::pow(span, alpha) * norm;
        };

        boundary_ = NodeSet{};
        make_nodes(b, boundary_);

        per_t_.resize(grid.size());
        rho_pow_.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            rho_pow_[i] = pow_pos((grid[i] - a) / (b - a), spec.gamma - 1.0);
            if (i == 0) continue; // Tu(a) = 0 by construction
            make_nodes(grid[i], per_t_[i]);
        }
    }

    /// One application of T to grid values `u`, writing into `out`.
    void apply(const std::vector<double>& u, std::vector<double>& out) const {
        const double jb = weighted_sum(boundary_, u);
        out.resize(grid_.size());
        out[0] = 0.0;
        for (std::size_t i = 1; i + 1 < grid_.size(); ++i)
            out[i] = rho_pow_[i] * jb - weighted_sum(per_t_[i], u);
        out[grid_.size() - 1] = 0.0; // G(b, .) = 0: endpoint exact by construction
    }

private:
    struct NodeSet {
        std::vector<double> s, w, q;
        double scale = 0.0;
    };

    double interp(const std::vector<double>& u, double x) const {
        const double pos = (x - grid_.front()) / h_;
        std::size_t i = static_cast<std::size_t>(std::max(0.0, pos));
        i = std::min(i, u.size() - 2);
        const double w = pos - static_cast<double>(i);
        return u[i] * (1.0 - w) + u[i + 1] * std::clamp(w, 0.0, 1.0);
    }

    double weighted_sum(const NodeSet& ns, const std::vector<double>& u) const {
        CompensatedSum<double> acc;
        for (std::size_t j = 0; j < ns.s.size(); ++j)
            acc.add(ns.w[j] * ns.q[j] * spec_.f(interp(u, ns.s[j])));
        return ns.scale * acc.value();
    }

    const analysis::ProblemSpec& spec_;
    std::vector<double> grid_;
    double h_;
    NodeSet boundary_;
    std::vector<NodeSet> per_t_;
    std::vector<double> rho_pow_;
};

inline void check_rhs_preconditions(const analysis::ProblemSpec& spec, double u_probe_hi) {
    for (int i = 0; i <= 512; ++i) {
        const double s = spec.a + (spec.b - spec.a) * i / 512.0;
        if (spec.q(s) < 0.0)
            throw InvalidArgument("picard_solve: q must be nonnegative (negative at t = " +
                                  std::to_string(s) + ")");
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 128; ++i) {
        const double u = u_probe_hi * i / 128.0;
        const double fu = spec.f(u);
        if (fu < 0.0)
            throw InvalidArgument("picard_solve: f must be nonnegative on the working range");
        if (fu < prev - 1e-12 * std::max(1.0, std::fabs(prev)))
            throw InvalidArgument("picard_solve: f must be nondecreasing on the working range");
        prev = fu;
    }
}

} // namespace detail

/// Successive approximation u <- Tu on a uniform grid. Non-convergence and
/// divergence are reported outcomes, not errors.
inline SolutionGrid picard_solve(const analysis::ProblemSpec& spec,
                                 const PicardOptions& opt = {}) {
    spec.validate();
    require(opt.n_grid >= 8, "picard_solve: grid too small");
    require(opt.tol > 0.0 && opt.max_iter >= 1, "picard_solve: bad iteration limits");
    require(opt.u0 >= 0.0, "picard_solve: initial guess must be nonnegative");
    detail::check_rhs_preconditions(spec, std::max(1.0, 2.0 * opt.u0));

    SolutionGrid sol;
    sol.grid.resize(opt.n_grid + 1);
    for (int i = 0; i <= opt.n_grid; ++i)
        sol.grid[i] = spec.a + (spec.b - spec.a) * i / opt.n_grid;

    const detail::PicardOperator op(spec, sol.grid, opt.quad_levels, opt.quad_splits);

    sol.values.assign(sol.grid.size(), opt.u0);
    sol.values.front() = sol.values.back() = 0.0;

    std::vector<double> next;
    for (int it = 1; it <= opt.max_iter; ++it) {
        op.apply(sol.values, next);
        double delta = 0.0, sup = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            delta = std::max(delta, std::fabs(next[i] - sol.values[i]));
            sup = std::max(sup, std::fabs(next[i]));
        }
        sol.values.swap(next);
        sol.iterations = it;
        if (sup > opt.divergence_ceiling) { sol.diverged = true; break; }
        if (delta <= opt.tol) { sol.converged = true; break; }
    }

    op.apply(sol.values, next);
    double res = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
        res = std::max(res, std::fabs(sol.values[i] - next[i]));
    sol.residual_sup = res;
    return sol;
}

/// Re-applies the integral operator to `sol` on a doubled grid with doubled
/// quadrature and returns the sup discrepancy |u - Tu| there. Independent of
/// the quadrature order used to produce the iterate.
inline double residual_certify(const analysis::ProblemSpec& spec, const SolutionGrid& sol) {
    spec.validate();
    require(sol.grid.size() >= 2, "residual_certify: empty solution");
    const int n2 = 2 * (static_cast<int>(sol.grid.size()) - 1);
    std::vector<double> grid2(n2 + 1);
    for (int i = 0; i <= n2; ++i)
        grid2[i] = spec.a + (spec.b - spec.a) * i / n2;

    const fracops::SampledFn su(sol.grid, sol.values);
    std::vector<double> u2(grid2.size());
    for (std::size_t i = 0; i < grid2.size(); ++i) u2[i] = su(grid2[i]);

    const detail::PicardOperator op(spec, grid2, 30, 2);
    std::vector<double> tu;
    op.apply(u2, tu);
    double disc = 0.0;
    for (std::size_t i = 0; i < u2.size(); ++i)
        disc = std::max(disc, std::fabs(u2[i] - tu[i]));
    return disc;
}

// ---------------------------------------------------------------------------
// Eigenpairs of D^{alpha,gamma} u + lambda u = 0, u(0) = u(1) = 0
// ---------------------------------------------------------------------------

/// Eigenfunction t^(gamma-1) E_{alpha,gamma}(-lambda t^alpha), carried as a
/// truncated power series and normalized to sup-norm 1. The dormant
/// t^(gamma-2) branch of the general solution is kept with coefficient 0:
/// the left boundary condition forces it out, and keeping it makes the
/// general-solution structure visible to tests.
struct EigenPair {
    double lambda = 0.0;
    fracops::PowerTerm dormant_branch;        // c1 t^(gamma-2) term, c1 = 0
    std::vector<fracops::PowerTerm> series;   // normalized series terms
    int series_length = 0;
    double derivative_residual = 0.0;         // sup |D^{alpha,gamma}u + lambda u| on [delta, 1]
    double ml_at_root = 0.0;                  // E_{alpha,gamma}(-lambda)
    double normalization = 1.0;               // sup-norm of the raw series

    double eval(double t) const {
        CompensatedSum<double> acc;
        acc.add(dormant_branch.value(t));
        for (const auto& term : series) acc.add(term.value(t));
        return acc.value();
    }
};

struct EigenOptions {
    double lambda_max = 280.0;
    int n_scan = 2000;
    double tol = 1e-10;       // root bracket width and series tail target
    int min_series = 60;
    int max_series = 380;
    double delta = 1e-3;      // left cutoff for the derivative residual
    int sample_points = 2000;
};

struct EigenSolveResult {
    std::vector<EigenPair> pairs;
    std::vector<std::string> warnings;
};

inline EigenSolveResult eigen_solve(double alpha, double gamma_, int k_max,
                                    const EigenOptions& opt = {}) {
    require(k_max >= 1, "eigen_solve: k_max must be at least 1");
    const auto roots = specfun::ml_roots(alpha, gamma_, opt.lambda_max, opt.n_scan, opt.tol);

    EigenSolveResult out;
    out.warnings = roots.warnings;
    if (static_cast<int>(roots.roots.size()) < k_max)
        out.warnings.push_back("only " + std::to_string(roots.roots.size()) + " of " +
                               std::to_string(k_max) + " requested roots found in (0, " +
                               std::to_string(opt.lambda_max) + "]");

    const int n_pairs = std::min<int>(k_max, static_cast<int>(roots.roots.size()));
    for (int r = 0; r < n_pairs; ++r) {
        const double lambda = roots.roots[r].lambda;

        // Series coefficients c_k = (-lambda)^k / Gamma(alpha k + gamma) by
        // ratio recurrence; extend past min_series until the tail at t = 1 is
        // below tol/10.
        std::vector<long double> coef{1.0L / tgammal(static_cast<long double>(gamma_))};
        long double ratio = specfun::detail::gamma_step_ratio(gamma_, alpha);
        int n_terms = opt.min_series;
        for (int k = 1; k < opt.max_series; ++k) {
            coef.push_back(coef.back() * (-static_cast<long double>(lambda)) / ratio);
            ratio = specfun::detail::gamma_step_ratio(alpha * k + gamma_, alpha);
            if (k + 1 >= opt.min_series) {
                const long double q = lambda / ratio;
                if (q < 1.0L && fabsl(coef.back()) * q / (1.0L - q) <=
                                    static_cast<long double>(opt.tol) / 10.0L) {
                    n_terms = k + 1;
                    break;
                }
            }
            n_terms = k + 1;
        }

        EigenPair pair;
        pair.lambda = lambda;
        pair.series_length = n_terms;
        pair.series.reserve(n_terms);
        for (int k = 0; k < n_terms; ++k)
            pair.series.push_back({static_cast<double>(coef[k]), alpha * k + gamma_, 0.0});
        pair.dormant_branch = {0.0, gamma_ - 1.0, 0.0};

        double sup = 0.0;
        for (int i = 0; i <= opt.sample_points; ++i)
            sup = std::max(sup, std::fabs(pair.eval(static_cast<double>(i) / opt.sample_points)));
        pair.normalization = sup;
        for (auto& term : pair.series) term.coefficient /= sup;

        const auto image = fracops::apply_hilfer_series(pair.series, alpha, gamma_);
        double res = 0.0;
        for (int i = 0; i <= opt.sample_points; ++i) {
            const double t =
                opt.delta + (1.0 - opt.delta) * static_cast<double>(i) / opt.sample_points;
            CompensatedSum<double> acc;
            for (const auto& term : image) acc.add(term.value(t));
            acc.add(lambda * pair.eval(t));
            res = std::max(res, std::fabs(acc.value()));
        }
        pair.derivative_residual = res;
        pair.ml_at_root = specfun::ml_eval(alpha, gamma_, -lambda).value;
        out.pairs.push_back(std::move(pair));
    }
    return out;
}

} // namespace fracbvp::solver

#endif // FRACBVP_SOLVER_HPP
