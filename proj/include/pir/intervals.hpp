#ifndef PIR_INTERVALS_HPP
#define PIR_INTERVALS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pir/distributions.hpp"
#include "pir/errors.hpp"
#include "pir/linreg.hpp"

namespace pir {

/// Nominal coverage gamma in (0, 1).
class Level {
public:
    Level() = default;
    explicit Level(double gamma) : gamma_(gamma) {
        if (!(gamma > 0.0 && gamma < 1.0)) {
            throw DomainError("level must lie in (0,1), got " + std::to_string(gamma));
        }
    }
    double gamma() const noexcept { return gamma_; }

    /// (1 + gamma) / 2, the quantile that bounds a two-sided interval.
    Probability upper_probability() const { return Probability(0.5 * (1.0 + gamma_)); }

private:
    double gamma_ = 0.95;
};

enum class IntervalMethod { PiApprox, PiExact, MpiApprox, MpiExact, MpiEmpirical };

inline std::string_view to_string(IntervalMethod m) {
    switch (m) {
        case IntervalMethod::PiApprox: return "PI_APPROX";
        case IntervalMethod::PiExact: return "PI_EXACT";
        case IntervalMethod::MpiApprox: return "MPI_APPROX";
        case IntervalMethod::MpiExact: return "MPI_EXACT";
        case IntervalMethod::MpiEmpirical: return "MPI_EMPIRICAL";
    }
    return "?";
}

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    double center = 0.0;
    Level level;
    IntervalMethod method = IntervalMethod::PiApprox;

    double width() const noexcept { return upper - lower; }
    bool contains(double y) const noexcept { return lower <= y && y <= upper; }
};

namespace detail {
inline Interval symmetric(double center, double half_width, Level level, IntervalMethod method) {
    return Interval{center - half_width, center + half_width, center, level, method};
}

inline void require_outcome(const Eigen::VectorXd& y) {
    if (y.size() < 2) throw InsufficientDataError("marginal interval needs at least 2 outcome values");
    if (!y.allFinite()) throw DomainError("outcome values must be finite");
}

inline double unbiased_sd(const Eigen::VectorXd& y) {
    const double mean = y.mean();
    return std::sqrt((y.array() - mean).square().sum() / static_cast<double>(y.size() - 1));
}
}  // namespace detail

/// Empirical quantile of sorted data by linear interpolation between order
/// statistics: h = (n - 1) q, x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
inline double empirical_quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw InsufficientDataError("empirical quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile probability must lie in [0,1]");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

/// x beta_hat +/- z * sigma_eps (unbiased). Width does not depend on x.
inline Interval pi_approx(const FitResult& fit, const Eigen::Ref<const Eigen::VectorXd>& x, Level level = Level{}) {
    const double z = normal_quantile(level.upper_probability());
    return detail::symmetric(fitted_value(fit, x), z * fit.sigma_eps_unbiased(), level, IntervalMethod::PiApprox);
}

/// x beta_hat +/- t_{n-p-1} * sigma_eps * sqrt(1 + leverage).
inline Interval pi_exact(const FitResult& fit, const Eigen::Ref<const Eigen::VectorXd>& x, Level level = Level{}) {
    const double t = student_t_quantile(level.upper_probability(), DegreesOfFreedom(fit.residual_df()));
    const double half = t * fit.sigma_eps_unbiased() * std::sqrt(1.0 + leverage(fit, x));
    return detail::symmetric(fitted_value(fit, x), half, level, IntervalMethod::PiExact);
}

/// mean +/- z * sd (unbiased).
inline Interval mpi_approx(const Eigen::VectorXd& y, Level level = Level{}) {
    detail::require_outcome(y);
    const double z = normal_quantile(level.upper_probability());
    return detail::symmetric(y.mean(), z * detail::unbiased_sd(y), level, IntervalMethod::MpiApprox);
}

/// mean +/- t_{n-1} * sd * sqrt(1 + 1/n).
inline Interval mpi_exact(const Eigen::VectorXd& y, Level level = Level{}) {
    detail::require_outcome(y);
    const auto n = y.size();
    const double t = student_t_quantile(level.upper_probability(), DegreesOfFreedom(n - 1));
    const double half = t * detail::unbiased_sd(y) * std::sqrt(1.0 + 1.0 / static_cast<double>(n));
    return detail::symmetric(y.mean(), half, level, IntervalMethod::MpiExact);
}

/// Smallest sample size accepted by mpi_empirical: ceil(2 / (1 - gamma)).
inline Eigen::Index mpi_empirical_min_size(Level level) {
    return static_cast<Eigen::Index>(std::ceil(2.0 / (1.0 - level.gamma()) - 1e-9));
}

/// Bounds are the empirical (1-gamma)/2 and (1+gamma)/2 quantiles, center the
/// empirical median, all under the interpolation rule of empirical_quantile_sorted.
inline Interval mpi_empirical(const Eigen::VectorXd& y, Level level = Level{}) {
    if (!y.allFinite()) throw DomainError("outcome values must be finite");
    const Eigen::Index needed = mpi_empirical_min_size(level);
    if (y.size() < needed) {
        throw InsufficientDataError("empirical marginal interval at level " + std::to_string(level.gamma()) +
                                    " needs at least " + std::to_string(needed) + " values");
    }
    std::vector<double> sorted(y.data(), y.data() + y.size());
    std::sort(sorted.begin(), sorted.end());
    const double g = level.gamma();
    return Interval{empirical_quantile_sorted(sorted, 0.5 * (1.0 - g)), empirical_quantile_sorted(sorted, 0.5 * (1.0 + g)),
                    empirical_quantile_sorted(sorted, 0.5), level, IntervalMethod::MpiEmpirical};
}

/// Number of outcomes inside their interval.
inline std::size_t coverage_count(std::span<const Interval> intervals, std::span<const double> y_true) {
    if (intervals.size() != y_true.size()) throw DimensionError("coverage: interval and outcome counts differ");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (intervals[i].contains(y_true[i])) ++hits;
    }
    return hits;
}

/// Fraction of outcomes inside their interval; bounds are closed.
inline double coverage(std::span<const Interval> intervals, std::span<const double> y_true) {
    if (intervals.size() != y_true.size()) throw DimensionError("coverage: interval and outcome counts differ");
    if (intervals.empty()) throw InsufficientDataError("coverage of an empty set");
    return static_cast<double>(coverage_count(intervals, y_true)) / static_cast<double>(intervals.size());
}

}  // namespace pir

#endif  // PIR_INTERVALS_HPP
