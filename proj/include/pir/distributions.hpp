#ifndef PIR_DISTRIBUTIONS_HPP
#define PIR_DISTRIBUTIONS_HPP

// Normal and Student-t distribution functions.
//
// CDFs are closed-form (normal, via erfc) or evaluated through the regularized
// incomplete beta function (Student-t, continued fraction). Quantiles are found
// by safeguarded Newton iteration on the upper tail, inside a bisection
// bracket, starting from a rational approximation. Nothing is tabulated.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "pir/errors.hpp"

namespace pir {

/// A probability strictly inside (0, 1).
class Probability {
public:
    explicit Probability(double value) : value_(value) {
        if (!(value > 0.0 && value < 1.0)) {
            throw DomainError("probability must lie in (0,1), got " + std::to_string(value));
        }
    }
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Integer degrees of freedom, at least 1.
class DegreesOfFreedom {
public:
    explicit DegreesOfFreedom(std::int64_t value) : value_(value) {
        if (value < 1) {
            throw DomainError("degrees of freedom must be >= 1, got " + std::to_string(value));
        }
    }

    /// Non-integer values are rejected.
    static DegreesOfFreedom from_real(double value) {
        if (!std::isfinite(value) || value != std::floor(value)) {
            throw DomainError("degrees of freedom must be an integer, got " + std::to_string(value));
        }
        return DegreesOfFreedom(static_cast<std::int64_t>(value));
    }

    std::int64_t value() const noexcept { return value_; }
    double as_real() const noexcept { return static_cast<double>(value_); }

private:
    std::int64_t value_;
};

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument must be finite");
    }
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
inline double incomplete_beta_cf(double a, double b, double x) {
    constexpr int kMaxIterations = 200000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw DomainError("incomplete beta continued fraction did not converge");
}

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Acklam's rational approximation to the lower-tail normal quantile
// (relative error about 1.15e-9); used only as a starting point.
inline double normal_quantile_guess(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549671010908511e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Finds x >= 0 with upper_tail(x) == tail, for tail in (0, 0.5].
// upper_tail must be decreasing on [0, inf) with upper_tail(0) == 0.5.
template <typename UpperTail, typename Density>
double invert_upper_tail(UpperTail upper_tail, Density density, double tail, double guess) {
    double lo = 0.0;
    double hi = std::max(1.0, guess);
    while (upper_tail(hi) > tail) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw DomainError("quantile bracket diverged");
    }
    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = upper_tail(x) - tail;  // decreasing in x
        if (f == 0.0) return x;
        if (f > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double dens = density(x);
        double next = (dens > 0.0) ? x + f / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 1e-15 * std::max(1.0, std::fabs(x)) || hi - lo <= 1e-15 * hi) {
            return next;
        }
        x = next;
    }
    return x;
}

inline double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline double normal_density(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// P(T > x) for x >= 0.
inline double student_t_upper_tail(double x, double df) {
    const double x2 = x * x;
    const double denom = df + x2;
    return 0.5 * [&] {
        const double z = df / denom;
        const double w = x2 / denom;
        const double a = 0.5 * df;
        const double b = 0.5;
        if (w == 0.0) return 1.0;
        const double front = std::exp(a * std::log(z) + b * std::log(w) - log_beta(a, b));
        if (z < (a + 1.0) / (a + b + 2.0)) {
            return front * incomplete_beta_cf(a, b, z) / a;
        }
        return 1.0 - front * incomplete_beta_cf(b, a, w) / b;
    }();
}

inline double student_t_density(double x, double df) {
    return std::exp(std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                    0.5 * std::log(df * std::numbers::pi) -
                    0.5 * (df + 1.0) * std::log1p(x * x / df));
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - detail::log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::incomplete_beta_cf(a, b, x) / a;
    return 1.0 - front * detail::incomplete_beta_cf(b, a, 1.0 - x) / b;
}

inline double normal_cdf(double x) {
    detail::require_finite(x, "normal_cdf");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double normal_quantile(Probability p) {
    const double v = p.value();
    if (v == 0.5) return 0.0;
    const double tail = v < 0.5 ? v : 1.0 - v;
    const double x = detail::invert_upper_tail(detail::normal_upper_tail, detail::normal_density,
                                               tail, -detail::normal_quantile_guess(tail));
    return v < 0.5 ? -x : x;
}

inline double student_t_cdf(double x, DegreesOfFreedom df) {
    detail::require_finite(x, "student_t_cdf");
    if (x == 0.0) return 0.5;
    const double tail = detail::student_t_upper_tail(std::fabs(x), df.as_real());
    return x > 0.0 ? 1.0 - tail : tail;
}

inline double student_t_quantile(Probability p, DegreesOfFreedom df) {
    const double v = p.value();
    if (v == 0.5) return 0.0;
    const double nu = df.as_real();
    const double tail = v < 0.5 ? v : 1.0 - v;

    // Cornish-Fisher start from the normal quantile.
    const double z = -detail::normal_quantile_guess(tail);
    const double z3 = z * z * z;
    const double guess = z + (z3 + z) / (4.0 * nu) + (5.0 * z3 * z * z + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu);

    const double x = detail::invert_upper_tail(
        [nu](double t) { return detail::student_t_upper_tail(t, nu); },
        [nu](double t) { return detail::student_t_density(t, nu); }, tail, guess);
    return v < 0.5 ? -x : x;
}

}  // namespace pir

#endif  // PIR_DISTRIBUTIONS_HPP
