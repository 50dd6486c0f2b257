#ifndef FRACBVP_GREEN_HPP
#define FRACBVP_GREEN_HPP

#include <cmath>
#include <limits>
#include <utility>

#include "fracbvp/common.hpp"
#include "fracbvp/specfun.hpp"

namespace fracbvp::green {

/// Green kernel of the Dirichlet problem on [a, b] for the Hilfer pair
/// (alpha, gamma), 1 < alpha <= gamma <= 2 (alpha = gamma = 2 is the
/// classical string kernel min(t,s)(b - max(t,s))/(b-a)).
///
///   G(t,s) = [ rho(t)^(gamma-1) (b-s)^(alpha-1) - (t-s)^(alpha-1)_+ ] / Gamma(alpha),
///   rho(t) = (t-a)/(b-a).
struct GreenKernel {
    double a = 0.0;
    double b = 1.0;
    double alpha = 2.0;
    double gamma = 2.0;
    double gamma_alpha_norm = 1.0; // cached 1/Gamma(alpha)

    GreenKernel(double a_, double b_, double alpha_, double gamma_)
        : a(a_), b(b_), alpha(alpha_), gamma(gamma_) {
        require(a < b, "GreenKernel: need a < b");
        require(alpha > 1.0 && alpha <= gamma && gamma <= 2.0,
                "GreenKernel: need 1 < alpha <= gamma <= 2");
        gamma_alpha_norm = 1.0 / std::tgamma(alpha);
    }

    double rho(double t) const { return (t - a) / (b - a); }
    double window_lo() const { return (3.0 * a + b) / 4.0; }
    double window_hi() const { return (3.0 * b + a) / 4.0; }

    /// Upper branch (s <= t), without the 1/Gamma(alpha) normalization.
    double g_plus(double t, double s) const {
        return pow_pos(rho(t), gamma - 1.0) * pow_pos(b - s, alpha - 1.0) -
               pow_pos(t - s, alpha - 1.0);
    }
    /// Lower branch (t <= s), without the 1/Gamma(alpha) normalization.
    double g_minus(double t, double s) const {
        return pow_pos(rho(t), gamma - 1.0) * pow_pos(b - s, alpha - 1.0);
    }

    double operator()(double t, double s) const {
        require(t >= a && t <= b && s >= a && s <= b,
                "GreenKernel: (t, s) outside the square");
        return (s <= t ? g_plus(t, s) : g_minus(t, s)) * gamma_alpha_norm;
    }

    double diagonal(double s) const {
        return pow_pos(rho(s), gamma - 1.0) * pow_pos(b - s, alpha - 1.0) *
               gamma_alpha_norm;
    }
};

inline double green_eval(const GreenKernel& k, double t, double s) { return k(t, s); }

struct DiagMax {
    double s_star = 0.0;
    double value = 0.0;
};

/// Interior maximizer of the diagonal s -> G(s,s):
///   s* = ((gamma-1) b + (alpha-1) a) / (gamma + alpha - 2),
/// with the value taken by direct evaluation at s* (closed forms below are
/// printed for cross-checking only).
inline DiagMax diag_max(const GreenKernel& k) {
    const double denom = k.gamma + k.alpha - 2.0;
    const double s_star = ((k.gamma - 1.0) * k.b + (k.alpha - 1.0) * k.a) / denom;
    return {s_star, k.diagonal(s_star)};
}

/// Closed form obtained by substituting s* into the diagonal:
/// (alpha-1)^(alpha-1) (gamma-1)^(gamma-1) (b-a)^(gamma-1)
///   / ((gamma+alpha-2)^(gamma+alpha-2) Gamma(alpha) (b-a)^(gamma-alpha)).
inline double diag_max_closed_direct(const GreenKernel& k) {
    const double p = k.gamma + k.alpha - 2.0;
    return std::pow(k.alpha - 1.0, k.alpha - 1.0) *
           std::pow(k.gamma - 1.0, k.gamma - 1.0) *
           std::pow(k.b - k.a, k.gamma - 1.0) /
           (std::pow(p, p) * std::tgamma(k.alpha) * std::pow(k.b - k.a, k.gamma - k.alpha));
}

/// Variant with ((gamma-1)b - (alpha-1)a)^(gamma-1) in the numerator; agrees
/// with the direct form only when a = 0 or gamma = alpha.
inline double diag_max_closed_affine(const GreenKernel& k) {
    const double p = k.gamma + k.alpha - 2.0;
    return std::pow(k.alpha - 1.0, k.alpha - 1.0) *
           std::pow((k.gamma - 1.0) * k.b - (k.alpha - 1.0) * k.a, k.gamma - 1.0) /
           (std::pow(p, p) * std::tgamma(k.alpha) * std::pow(k.b - k.a, k.gamma - k.alpha));
}

/// Crossing point r in ((3a+b)/4, (3b+a)/4) where
/// G_+((3b+a)/4, s) = G_-((3a+b)/4, s); bisection on the difference.
inline double crossing_r(const GreenKernel& k, double tol = 1e-12) {
    const double t1 = k.window_lo(), t2 = k.window_hi();
    const auto d = [&](double s) { return k.g_plus(t2, s) - k.g_minus(t1, s); };
    double lo = t1, hi = t2;
    double dlo = d(lo), dhi = d(hi);
    if (dlo == 0.0) return lo;
    if (dhi == 0.0) return hi;
    if (dlo * dhi > 0.0)
        throw NumericError("crossing_r: no sign change of G+ - G- on the middle "
                           "half-interval; kernel outside the minorant regime");
    const double width_tol = std::max(tol, 8.0 * (k.b - k.a) *
                                               std::numeric_limits<double>::epsilon());
    while (hi - lo > width_tol) {
        const double m = 0.5 * (lo + hi);
        const double dm = d(m);
        if (dm == 0.0) return m;
        if (dlo * dm < 0.0) hi = m;
        else { lo = m; dlo = dm; }
    }
    return 0.5 * (lo + hi);
}

/// Minorant of Lemma-3 shape: phi(s) = G_+((3b+a)/4, s)/G_+(s,s) left of r,
/// G_-((3a+b)/4, s)/G_-(s,s) right of r.
struct Minorant {
    GreenKernel kernel;
    double r = 0.0;

    double phi(double s) const {
        if (!(s > kernel.a && s < kernel.b))
            throw DomainError("phi: s must lie strictly inside (a, b)");
        const double diag = kernel.g_plus(s, s); // == g_minus(s, s)
        if (s <= r) return kernel.g_plus(kernel.window_hi(), s) / diag;
        return kernel.g_minus(kernel.window_lo(), s) / diag;
    }
};

inline Minorant make_minorant(const GreenKernel& k, double tol = 1e-12) {
    return {k, crossing_r(k, tol)};
}

inline double phi_eval(const Minorant& m, double s) { return m.phi(s); }

} // namespace fracbvp::green

#endif // FRACBVP_GREEN_HPP
