#ifndef FRACBVP_SPECFUN_HPP
#define FRACBVP_SPECFUN_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fracbvp/common.hpp"

namespace fracbvp::specfun {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// sin(pi*x) without the catastrophic loss of std::sin(pi*x) near integers.
inline double sinpi(double x) {
    const double n = std::round(x);
    const double r = x - n;
    const double s = std::sin(kPi * r);
    return (static_cast<std::int64_t>(n) % 2 == 0) ? s : -s;
}

/// Euler gamma. Poles at non-positive integers are an error, not a NaN.
inline double gamma(double x) {
    if (x <= 0.0 && nearly_integer(x))
        throw DomainError("gamma: pole at x = " + std::to_string(x));
    return std::tgamma(x);
}

/// 1/Gamma(x), entire: evaluates to exact 0 at the poles of Gamma.
/// For x < 0.5 uses the reflection 1/Gamma(x) = Gamma(1-x) sin(pi x)/pi.
inline double recip_gamma(double x) {
    if (x <= 0.0 && nearly_integer(x)) return 0.0;
    if (x >= 0.5) {
        if (x <= 170.0) return 1.0 / std::tgamma(x);
        return static_cast<double>(expl(-lgammal(static_cast<long double>(x))));
    }
    return std::tgamma(1.0 - x) * sinpi(x) / kPi;
}

/// Gamma(num)/Gamma(den) for num > 0 and arbitrary real den.
/// Poles of Gamma(den) make the ratio vanish. Large arguments go through
/// lgamma differences so the ratio survives where Gamma itself overflows.
inline double gamma_ratio(double num, double den) {
    if (num <= 0.0 && nearly_integer(num))
        throw DomainError("gamma_ratio: pole in numerator");
    if (den <= 0.0 && nearly_integer(den)) return 0.0;
    if (den >= 0.5) {
        if (num <= 170.0 && den <= 170.0 && num > 0.0)
            return std::tgamma(num) / std::tgamma(den);
        const long double d = lgammal(static_cast<long double>(num)) -
                              lgammal(static_cast<long double>(den));
        return static_cast<double>(expl(d));
    }
    return std::tgamma(num) * recip_gamma(den);
}

inline double beta(double x, double y) {
    require(x > 0.0 && y > 0.0, "beta: arguments must be positive");
    if (x + y <= 170.0) return std::tgamma(x) * std::tgamma(y) / std::tgamma(x + y);
    const long double d = lgammal(static_cast<long double>(x)) +
                          lgammal(static_cast<long double>(y)) -
                          lgammal(static_cast<long double>(x + y));
    return static_cast<double>(expl(d));
}

// ---------------------------------------------------------------------------
// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) = sum z^k/Gamma(alpha k + beta)
// ---------------------------------------------------------------------------

struct SeriesPolicy {
    double tol = 1e-12;     // absolute tolerance on the truncated tail
    int max_terms = 400;    // term budget before giving up
    double safe_radius = 300.0; // |z| ceiling; beyond it cancellation outruns
                                // the extended-precision accumulator
};

struct MLValue {
    double value = 0.0;
    int terms_used = 0;
    double truncation_bound = 0.0; // rigorous bound on the dropped tail
};

namespace detail {

/// Gamma(x + step)/Gamma(x) for x > 0. Integer steps use the recurrence
/// Gamma(x+1) = x Gamma(x) exactly; that keeps the heavily-cancelling series
/// for alpha = 1, 2 at full working precision.
inline long double gamma_step_ratio(long double x, long double step) {
    if (step == 2.0L) return x * (x + 1.0L);
    if (step == 1.0L) return x;
    if (x + step <= 1700.0L) return tgammal(x + step) / tgammal(x);
    return expl(lgammal(x + step) - lgammal(x));
}

} // namespace detail

/// Series evaluation with a geometric tail majorant: once the term ratio
/// |z|/R_k drops below 1 the remaining tail is bounded by t_k q/(1-q).
inline MLValue ml_eval(double alpha, double beta, double z,
                       const SeriesPolicy& pol = {}) {
    require(alpha > 0.0 && beta > 0.0, "ml_eval: alpha and beta must be positive");
    require(pol.tol > 0.0, "ml_eval: tol must be positive");
    if (std::fabs(z) > pol.safe_radius)
        throw InvalidArgument("ml_eval: |z| = " + std::to_string(std::fabs(z)) +
                              " exceeds series-safe radius " +
                              std::to_string(pol.safe_radius));

    const long double a = alpha, b = beta, zl = z;
    long double term = 1.0L / tgammal(b);
    if (z == 0.0) return {static_cast<double>(term), 1, 0.0};

    CompensatedSum<long double> acc;
    acc.add(term);
    long double ratio = detail::gamma_step_ratio(b, a); // Gamma(a+b)/Gamma(b)
    for (int k = 1; k <= pol.max_terms; ++k) {
        term *= zl / ratio;
        acc.add(term);
        ratio = detail::gamma_step_ratio(a * k + b, a);
        const long double q = fabsl(zl) / ratio;
        if (q < 1.0L) {
            const long double bound = fabsl(term) * q / (1.0L - q);
            if (bound <= static_cast<long double>(pol.tol))
                return {static_cast<double>(acc.value()), k + 1,
                        static_cast<double>(bound)};
        }
    }
    throw NumericError("ml_eval: series did not converge within " +
                       std::to_string(pol.max_terms) + " terms");
}

// ---------------------------------------------------------------------------
// Real roots of lambda -> E_{alpha,gamma}(-lambda) on (0, lambda_max]
// ---------------------------------------------------------------------------

struct Root {
    double lambda = 0.0;
    double bracket_width = 0.0;
};

struct RootList {
    std::vector<Root> roots;
    double scan_lo = 0.0;
    double scan_hi = 0.0;
    std::vector<std::string> warnings; // near-tangency notices, never silent
};

inline RootList ml_roots(double alpha, double gamma_, double lambda_max,
                         int n_scan = 2000, double tol = 1e-10,
                         const SeriesPolicy& pol = {}) {
    require(alpha > 1.0 && alpha <= gamma_ && gamma_ <= 2.0,
            "ml_roots: need 1 < alpha <= gamma <= 2");
    require(lambda_max > 0.0, "ml_roots: lambda_max must be positive");
    require(n_scan >= 2, "ml_roots: scan grid too small");

    SeriesPolicy p = pol;
    p.tol = std::min(pol.tol, tol * 1e-3);

    const auto f = [&](double lam) { return ml_eval(alpha, gamma_, -lam, p).value; };

    std::vector<double> lam(n_scan + 1), val(n_scan + 1);
    double max_abs = 0.0;
    for (int i = 0; i <= n_scan; ++i) {
        lam[i] = lambda_max * i / n_scan;
        val[i] = f(lam[i]);
        max_abs = std::max(max_abs, std::fabs(val[i]));
    }

    RootList out;
    out.scan_lo = lam[0];
    out.scan_hi = lam[n_scan];
    const double tangency_eps = 1e-5 * max_abs;
    bool in_flat_run = false;
    for (int i = 0; i < n_scan; ++i) {
        if (val[i] == 0.0) { // sample exactly on a root: refine around it
            out.roots.push_back({lam[i], 0.0});
            continue;
        }
        if (val[i] * val[i + 1] < 0.0) {
            double lo = lam[i], hi = lam[i + 1];
            double flo = val[i];
            for (int it = 0; it < 200 && hi - lo > tol; ++it) {
                const double m = 0.5 * (lo + hi);
                const double fm = f(m);
                if (fm == 0.0) { lo = hi = m; break; }
                if (flo * fm < 0.0) hi = m;
                else { lo = m; flo = fm; }
            }
            out.roots.push_back({0.5 * (lo + hi), hi - lo});
            in_flat_run = false;
        } else if (std::fabs(val[i]) < tangency_eps &&
                   std::fabs(val[i + 1]) < tangency_eps) {
            if (!in_flat_run) {
                out.warnings.push_back(
                    "scan possibly too coarse: |E| < " + std::to_string(tangency_eps) +
                    " without sign change near lambda = " + std::to_string(lam[i]));
                in_flat_run = true;
            }
        } else {
            in_flat_run = false;
        }
    }
    return out;
}

} // namespace fracbvp::specfun

#endif // FRACBVP_SPECFUN_HPP
