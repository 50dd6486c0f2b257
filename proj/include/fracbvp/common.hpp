#ifndef FRACBVP_COMMON_HPP
#define FRACBVP_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracbvp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed expression text; carries the byte offset of the failure.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation outside a function's domain (log of non-positive, pole, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Precondition or configuration violation.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// Numerical process failed (non-convergence, quadrature breakdown, divergence).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

/// Neumaier-compensated accumulator. Keeps summation error at ~1 ulp of the
/// largest partial sum, which matters when alternating series cancel heavily.
template <typename T>
struct CompensatedSum {
    T sum{0};
    T comp{0};

    void add(T x) {
        T t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    T value() const { return sum + comp; }
};

/// pow with the convention 0^p = 0 for p > 0 and exact handling of p == 1,
/// plus clamping of tiny negative bases that arise from rounding at branch
/// boundaries (t - s computed as -1e-17 instead of 0).
inline double pow_pos(double base, double expo) {
    if (base <= 0.0) {
        if (base > -1e-12 && expo > 0.0) return 0.0;
        if (base == 0.0 && expo == 0.0) return 1.0;
        throw DomainError("pow_pos: negative base " + std::to_string(base));
    }
    if (expo == 1.0) return base;
    return std::pow(base, expo);
}

inline bool nearly_integer(double x, double tol = 1e-12) {
    return std::fabs(x - std::round(x)) <= tol * std::max(1.0, std::fabs(x));
}

} // namespace fracbvp

#endif // FRACBVP_COMMON_HPP
