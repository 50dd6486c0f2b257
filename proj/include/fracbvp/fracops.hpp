#ifndef FRACBVP_FRACOPS_HPP
#define FRACBVP_FRACOPS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracbvp/common.hpp"
#include "fracbvp/quadrature.hpp"
#include "fracbvp/specfun.hpp"

namespace fracbvp::fracops {

/// One term c * (t - a)^(nu - 1) of a power expansion around the base point a.
struct PowerTerm {
    double coefficient = 0.0;
    double exponent_offset = 1.0; // nu; nu > 0 keeps the term locally integrable
    double base_point = 0.0;

    double value(double t) const {
        if (coefficient == 0.0) return 0.0;
        return coefficient * pow_pos(t - base_point, exponent_offset - 1.0);
    }
    bool is_zero() const { return coefficient == 0.0; }
};

inline void validate(const PowerTerm& term) {
    require(term.is_zero() || term.exponent_offset > 0.0,
            "PowerTerm: exponent offset nu must be positive");
}

/// Riemann-Liouville integral of order `order` on the power basis:
/// c (t-a)^(nu-1)  ->  c Gamma(nu)/Gamma(nu+order) (t-a)^(nu+order-1).
inline PowerTerm rl_integral_power(const PowerTerm& term, double order) {
    require(order > 0.0, "rl_integral_power: order must be positive");
    validate(term);
    if (term.is_zero()) return term;
    const double factor =
        specfun::gamma_ratio(term.exponent_offset, term.exponent_offset + order);
    return {term.coefficient * factor, term.exponent_offset + order, term.base_point};
}

namespace detail {

inline bool near(double x, double y) {
    return std::fabs(x - y) <= 1e-12 * std::max({1.0, std::fabs(x), std::fabs(y)});
}

} // namespace detail

/// Generalized Hilfer derivative of order alpha and type gamma on the power
/// basis. The operator factors as I^(gamma-alpha) d^2/dt^2 I^(2-gamma); the
/// inner classical derivative annihilates the two homogeneous exponents
/// nu = gamma and nu = gamma-1 outright, so those images are the zero term
/// rather than the formal Gamma-ratio value. Elsewhere
///   c (t-a)^(nu-1) -> c Gamma(nu)/Gamma(nu-alpha) (t-a)^(nu-alpha-1),
/// which also vanishes whenever 1/Gamma hits a pole (nu - alpha a non-positive
/// integer).
inline PowerTerm hilfer_power(const PowerTerm& term, double alpha, double gamma_) {
    require(alpha > 0.0 && alpha <= gamma_, "hilfer_power: need 0 < alpha <= gamma");
    validate(term);
    const double nu = term.exponent_offset;
    if (term.is_zero() || detail::near(nu, gamma_) || detail::near(nu, gamma_ - 1.0))
        return {0.0, nu - alpha, term.base_point};
    const double factor = specfun::gamma_ratio(nu, nu - alpha); // 0 at 1/Gamma poles
    return {term.coefficient * factor, nu - alpha, term.base_point};
}

/// Termwise Hilfer derivative of a truncated power series.
inline std::vector<PowerTerm> apply_hilfer_series(const std::vector<PowerTerm>& terms,
                                                  double alpha, double gamma_) {
    for (std::size_t i = 1; i < terms.size(); ++i)
        require(terms[i].base_point == terms[0].base_point,
                "apply_hilfer_series: terms must share the base point");
    std::vector<PowerTerm> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(hilfer_power(t, alpha, gamma_));
    return out;
}

// ---------------------------------------------------------------------------
// Sampled functions and the numeric Riemann-Liouville integral
// ---------------------------------------------------------------------------

/// Piecewise-linear function given by samples on a strictly increasing grid.
class SampledFn {
public:
    SampledFn(std::vector<double> grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        require(grid_.size() >= 2, "SampledFn: need at least two samples");
        require(grid_.size() == values_.size(), "SampledFn: grid/value size mismatch");
        for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
            require(grid_[i] < grid_[i + 1], "SampledFn: grid must strictly increase");
    }

    double a() const { return grid_.front(); }
    double b() const { return grid_.back(); }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    double operator()(double x) const {
        require(x >= a() - 1e-12 && x <= b() + 1e-12, "SampledFn: x outside the grid");
        x = std::clamp(x, a(), b());
        const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
        const std::size_t i =
            std::min<std::size_t>(grid_.size() - 2,
                                  it == grid_.begin() ? 0 : (it - grid_.begin() - 1));
        const double w = (x - grid_[i]) / (grid_[i + 1] - grid_[i]);
        return values_[i] * (1.0 - w) + values_[i + 1] * w;
    }

    /// Largest second difference; scales the piecewise-linear error h^2 f''/8.
    double max_second_difference() const {
        double m = 0.0;
        for (std::size_t i = 1; i + 1 < grid_.size(); ++i)
            m = std::max(m, std::fabs(values_[i + 1] - 2.0 * values_[i] + values_[i - 1]));
        return m;
    }

private:
    std::vector<double> grid_;
    std::vector<double> values_;
};

struct NumericIntegral {
    double value = 0.0;
    double quad_error = 0.0;   // mesh-doubling estimate of the quadrature error
    double interp_error = 0.0; // bound contributed by the piecewise-linear carrier
};

/// (1/Gamma(order)) int_a^t (t-s)^(order-1) f(s) ds for a sampled f.
/// The substitution s = t - (t-a) tau^(1/order) absorbs the kernel exactly:
///   I = (t-a)^order / (order Gamma(order)) int_0^1 f(t - (t-a) tau^(1/order)) dtau,
/// leaving a bounded integrand that a graded mesh handles at both ends.
inline NumericIntegral rl_integral_numeric_checked(const SampledFn& f, double order,
                                                   double t, int levels = 40) {
    require(order > 0.0, "rl_integral_numeric: order must be positive");
    require(t >= f.a() - 1e-12 && t <= f.b() + 1e-12,
            "rl_integral_numeric: t outside the sample domain");
    t = std::clamp(t, f.a(), f.b());
    const double a = f.a();
    if (t == a) return {0.0, 0.0, 0.0};

    const double span = t - a;
    const double inv_order = 1.0 / order;
    const auto integrand = [&](double tau) {
        const double s = t - span * std::pow(tau, inv_order);
        return f(std::clamp(s, a, t));
    };
    const auto q = quadrature::integrate_endpoint_graded(integrand, 0.0, 1.0, true,
                                                         true, levels);
    const double scale =
        std::pow(span, order) / (order * std::tgamma(order));
    const double interp_err = scale * f.max_second_difference() / 8.0;
    return {scale * q.value, scale * q.error_estimate, interp_err};
}

inline double rl_integral_numeric(const SampledFn& f, double order, double t,
                                  int levels = 40) {
    return rl_integral_numeric_checked(f, order, t, levels).value;
}

} // namespace fracbvp::fracops

#endif // FRACBVP_FRACOPS_HPP
