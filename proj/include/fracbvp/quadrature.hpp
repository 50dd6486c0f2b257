#ifndef FRACBVP_QUADRATURE_HPP
#define FRACBVP_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fracbvp/common.hpp"

namespace fracbvp::quadrature {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

namespace detail {

// 8-point Gauss-Legendre abscissas/weights on [-1, 1] (Abramowitz & Stegun 25.4.30).
inline constexpr double kGlX[4] = {
    0.1834346424956498049394761, 0.5255324099163289858177390,
    0.7966664774136267395915539, 0.9602898564975362316835609};
inline constexpr double kGlW[4] = {
    0.3626837833783619829651504, 0.3137066458778872873379622,
    0.2223810344533744705443560, 0.1012285362903762591525314};

} // namespace detail

/// Single 8-point Gauss-Legendre panel over [a, b].
template <typename F>
double gl8(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    CompensatedSum<double> acc;
    for (int i = 0; i < 4; ++i) {
        acc.add(detail::kGlW[i] * f(mid - half * detail::kGlX[i]));
        acc.add(detail::kGlW[i] * f(mid + half * detail::kGlX[i]));
    }
    return half * acc.value();
}

/// Breakpoints of a mesh geometrically refined toward the flagged endpoints.
/// `levels` halvings give an innermost panel of width (b-a)/2^levels.
inline std::vector<double> graded_breakpoints(double a, double b, bool grade_left,
                                              bool grade_right, int levels) {
    std::vector<double> pts;
    const double mid = 0.5 * (a + b);
    pts.push_back(a);
    if (grade_left) {
        for (int j = levels; j >= 2; --j)
            pts.push_back(a + (b - a) * std::ldexp(0.5, -(j - 1)));
    }
    pts.push_back(mid);
    if (grade_right) {
        for (int j = 2; j <= levels; ++j)
            pts.push_back(b - (b - a) * std::ldexp(0.5, -(j - 1)));
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// Composite GL over explicit breakpoints, each panel split `splits` times.
template <typename F>
double integrate_panels(F&& f, const std::vector<double>& pts, int splits = 1) {
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double h = (pts[i + 1] - pts[i]) / splits;
        for (int k = 0; k < splits; ++k)
            acc.add(gl8(f, pts[i] + k * h, pts[i] + (k + 1) * h));
    }
    return acc.value();
}

/// Integral with algebraic endpoint behavior: geometrically graded composite GL,
/// error estimated by doubling every panel.
template <typename F>
QuadResult integrate_endpoint_graded(F&& f, double a, double b, bool grade_left,
                                     bool grade_right, int levels = 46) {
    const auto pts = graded_breakpoints(a, b, grade_left, grade_right, levels);
    const double coarse = integrate_panels(f, pts, 1);
    const double fine = integrate_panels(f, pts, 2);
    return {fine, std::fabs(fine - coarse)};
}

namespace detail {

template <typename F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= max_depth)
        throw NumericError("adaptive quadrature: max refinement depth reached");
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

} // namespace detail

template <typename F>
QuadResult adaptive_simpson(F&& f, double a, double b, double tol = 1e-12,
                            int max_depth = 48) {
    if (a == b) return {0.0, 0.0};
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw NumericError("adaptive quadrature: non-finite integrand sample");
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double v = detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
    return {v, tol};
}

/// Integral of |f|. Sign changes of f are bracketed on a scan grid first so
/// each adaptive pass sees a piecewise-smooth integrand.
template <typename F>
QuadResult integrate_abs(F&& f, double a, double b, double tol = 1e-12,
                         int max_depth = 48, int scan_n = 2048) {
    std::vector<double> cuts{a};
    double prev = f(a);
    double x_prev = a;
    for (int i = 1; i <= scan_n; ++i) {
        const double x = a + (b - a) * i / scan_n;
        const double v = f(x);
        if (!std::isfinite(v))
            throw NumericError("integrate_abs: non-finite sample");
        if (prev * v < 0.0) {
            double lo = x_prev, hi = x;
            for (int it = 0; it < 80 && hi - lo > 1e-15 * (b - a); ++it) {
                const double m = 0.5 * (lo + hi);
                (f(m) * prev < 0.0 ? hi : lo) = m;
            }
            cuts.push_back(0.5 * (lo + hi));
        }
        if (v != 0.0) prev = v;
        x_prev = x;
    }
    cuts.push_back(b);
    QuadResult total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto piece = adaptive_simpson([&](double x) { return std::fabs(f(x)); },
                                      cuts[i], cuts[i + 1], tol / cuts.size(), max_depth);
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
    }
    return total;
}

} // namespace fracbvp::quadrature

#endif // FRACBVP_QUADRATURE_HPP
