#ifndef PIR_LINREG_HPP
#define PIR_LINREG_HPP

// Ordinary least squares with an intercept.
//
// The solve goes through a Householder QR factorization of the design matrix;
// X'X is never formed for the solve. (X'X)^-1 = R^-1 R^-T is kept because the
// exact prediction interval needs the leverage x (X'X)^-1 x'.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pir/errors.hpp"

namespace pir {

/// Outcome vector and raw predictor matrix.
struct Dataset {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;  // n x p, no intercept column
    std::string outcome_name = "y";
    std::vector<std::string> predictor_names;

    Eigen::Index rows() const noexcept { return y.size(); }
    Eigen::Index predictors() const noexcept { return x.cols(); }

    /// Throws unless sizes agree and all entries are finite.
    void validate() const {
        if (x.rows() != y.size()) {
            throw DimensionError("dataset: predictor rows (" + std::to_string(x.rows()) +
                                 ") differ from outcome length (" + std::to_string(y.size()) + ")");
        }
        if (!predictor_names.empty() && static_cast<Eigen::Index>(predictor_names.size()) != x.cols()) {
            throw DimensionError("dataset: predictor_names does not match predictor count");
        }
        if (!y.allFinite() || !x.allFinite()) throw IngestionError("dataset contains non-finite values");
    }
};

/// n x (p+1) matrix whose first column is identically 1.
class DesignMatrix {
public:
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }
    Eigen::Index rows() const noexcept { return m_.rows(); }
    Eigen::Index predictors() const noexcept { return m_.cols() - 1; }
    const std::vector<std::string>& column_names() const noexcept { return names_; }

    /// Row i without the leading 1.
    Eigen::VectorXd predictor_row(Eigen::Index i) const { return m_.row(i).tail(predictors()).transpose(); }

    friend DesignMatrix build_design(const Dataset& dataset);

private:
    Eigen::MatrixXd m_;
    std::vector<std::string> names_;
};

/// Prepends the intercept column. Rank is not checked here.
inline DesignMatrix build_design(const Dataset& dataset) {
    dataset.validate();
    const Eigen::Index n = dataset.rows();
    const Eigen::Index p = dataset.predictors();
    DesignMatrix d;
    d.m_.resize(n, p + 1);
    d.m_.col(0).setOnes();
    if (p > 0) d.m_.rightCols(p) = dataset.x;
    d.names_.reserve(static_cast<std::size_t>(p + 1));
    d.names_.emplace_back("(intercept)");
    for (Eigen::Index j = 0; j < p; ++j) {
        d.names_.push_back(dataset.predictor_names.empty() ? "x" + std::to_string(j + 1)
                                                           : dataset.predictor_names[static_cast<std::size_t>(j)]);
    }
    return d;
}

/// Everything the interval and PIR code needs from a fit.
struct FitResult {
    Eigen::VectorXd beta_hat;  // intercept first
    Eigen::VectorXd residuals;
    double sigma2_eps_biased = 0.0;    // RSS / n
    double sigma2_eps_unbiased = 0.0;  // RSS / (n - p - 1)
    double mu_y_hat = 0.0;
    double sigma2_y_biased = 0.0;    // TSS / n
    double sigma2_y_unbiased = 0.0;  // TSS / (n - 1)
    double r2 = 0.0;                 // NaN when the outcome is constant
    double r2_adj = 0.0;             // may be negative; never clamped
    Eigen::MatrixXd gram_inverse;    // (X'X)^-1
    Eigen::Index n = 0;
    Eigen::Index p = 0;

    double sigma_eps_unbiased() const { return std::sqrt(sigma2_eps_unbiased); }
    double sigma_y_unbiased() const { return std::sqrt(sigma2_y_unbiased); }
    double sigma_eps_biased() const { return std::sqrt(sigma2_eps_biased); }
    double sigma_y_biased() const { return std::sqrt(sigma2_y_biased); }
    Eigen::Index residual_df() const { return n - p - 1; }
};

/// Relative pivot tolerance for rank detection.
inline constexpr double kRankTolerance = 1e-10;

inline FitResult fit_ols(const DesignMatrix& design, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd& x = design.matrix();
    const Eigen::Index n = x.rows();
    const Eigen::Index p = design.predictors();
    if (y.size() != n) throw DimensionError("fit_ols: outcome length does not match design rows");
    if (n <= p + 1) {
        throw InsufficientDataError("fit_ols: need n > p + 1 observations (n=" + std::to_string(n) +
                                    ", p=" + std::to_string(p) + ")");
    }

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(p + 1).triangularView<Eigen::Upper>();

    const double largest_norm = x.colwise().norm().maxCoeff();
    for (Eigen::Index j = 0; j <= p; ++j) {
        if (!(std::fabs(r(j, j)) > kRankTolerance * largest_norm)) {
            throw SingularDesignError(static_cast<std::size_t>(j), design.column_names()[static_cast<std::size_t>(j)]);
        }
    }

    FitResult fit;
    fit.n = n;
    fit.p = p;
    const Eigen::VectorXd qty = (qr.householderQ().transpose() * y).head(p + 1);
    const auto upper = r.triangularView<Eigen::Upper>();
    fit.beta_hat = upper.solve(qty);
    fit.residuals = y - x * fit.beta_hat;

    const Eigen::MatrixXd r_inv = upper.solve(Eigen::MatrixXd::Identity(p + 1, p + 1));
    fit.gram_inverse = r_inv * r_inv.transpose();

    const double nd = static_cast<double>(n);
    const double rss = fit.residuals.squaredNorm();
    fit.mu_y_hat = y.mean();
    const double tss = (y.array() - fit.mu_y_hat).square().sum();
    fit.sigma2_eps_biased = rss / nd;
    fit.sigma2_eps_unbiased = rss / static_cast<double>(n - p - 1);
    fit.sigma2_y_biased = tss / nd;
    fit.sigma2_y_unbiased = tss / (nd - 1.0);
    if (tss > 0.0) {
        fit.r2 = 1.0 - fit.sigma2_eps_biased / fit.sigma2_y_biased;
        fit.r2_adj = 1.0 - fit.sigma2_eps_unbiased / fit.sigma2_y_unbiased;
    } else {
        fit.r2 = std::numeric_limits<double>::quiet_NaN();
        fit.r2_adj = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

namespace detail {
inline Eigen::VectorXd augment(const FitResult& fit, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != fit.p) {
        throw DimensionError("expected " + std::to_string(fit.p) + " predictor values, got " +
                             std::to_string(x.size()));
    }
    if (!x.allFinite()) throw DomainError("predictor values must be finite");
    Eigen::VectorXd full(fit.p + 1);
    full(0) = 1.0;
    full.tail(fit.p) = x;
    return full;
}
}  // namespace detail

/// x beta_hat with x = (1, x_1, ..., x_p).
inline double fitted_value(const FitResult& fit, const Eigen::Ref<const Eigen::VectorXd>& x) {
    return detail::augment(fit, x).dot(fit.beta_hat);
}

/// The quadratic form x (X'X)^-1 x' for the intercept-augmented x.
inline double leverage(const FitResult& fit, const Eigen::Ref<const Eigen::VectorXd>& x) {
    const Eigen::VectorXd full = detail::augment(fit, x);
    return full.dot(fit.gram_inverse * full);
}

}  // namespace pir

#endif  // PIR_LINREG_HPP
