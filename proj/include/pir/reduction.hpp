#ifndef PIR_REDUCTION_HPP
#define PIR_REDUCTION_HPP

// Prediction interval reduction: how much narrower a model-based prediction
// interval is than the marginal interval built from the outcome alone,
//
//   PIR = (width(MPI) - mean width(PI(x))) / width(MPI).
//
// At the population level this is 1 - sqrt(1 - rho^2), i.e. one minus the
// coefficient of alienation.

#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pir/distributions.hpp"
#include "pir/errors.hpp"
#include "pir/intervals.hpp"
#include "pir/linreg.hpp"

namespace pir {

/// Population association entered either as a correlation or as a
/// coefficient of determination; the sign of rho is irrelevant.
class PopulationAssociation {
public:
    static PopulationAssociation from_rho(double rho) {
        if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("correlation must lie in [-1,1]");
        return PopulationAssociation(rho * rho);
    }
    static PopulationAssociation from_rho2(double rho2) {
        if (!(rho2 >= 0.0 && rho2 <= 1.0)) throw DomainError("coefficient of determination must lie in [0,1]");
        return PopulationAssociation(rho2);
    }
    double rho2() const noexcept { return rho2_; }
    double abs_rho() const noexcept { return std::sqrt(rho2_); }

private:
    explicit PopulationAssociation(double rho2) : rho2_(rho2) {}
    double rho2_;
};

/// Coefficient of alienation sqrt(1 - rho^2).
inline double alienation(PopulationAssociation assoc) { return std::sqrt(1.0 - assoc.rho2()); }

inline double population_pir(PopulationAssociation assoc) { return 1.0 - alienation(assoc); }

namespace detail {
inline void require_outcome_variance(const FitResult& fit) {
    if (!(fit.sigma2_y_biased > 0.0)) throw DegenerateDataError("outcome has zero variance; PIR is undefined");
}
}  // namespace detail

/// Both closed forms of the plain estimator, from R^2 and from the biased spreads.
struct PirHatForms {
    double from_r2;
    double from_sigmas;
};

inline PirHatForms pir_hat_forms(const FitResult& fit) {
    detail::require_outcome_variance(fit);
    const double sy = fit.sigma_y_biased();
    return {1.0 - std::sqrt(1.0 - fit.r2), (sy - fit.sigma_eps_biased()) / sy};
}

/// 1 - sqrt(1 - R^2); lies in [0, 1].
inline double pir_hat(const FitResult& fit) { return pir_hat_forms(fit).from_sigmas; }

/// The adjusted estimator by its three routes: R^2_adj, unbiased spreads and
/// approximate-interval widths.
struct PirTildeForms {
    double from_r2_adj;
    double from_sigmas;
    double from_widths;
};

inline PirTildeForms pir_tilde_forms(const FitResult& fit, Level level = Level{}) {
    detail::require_outcome_variance(fit);
    const double sy = fit.sigma_y_unbiased();
    const double se = fit.sigma_eps_unbiased();
    const double z = normal_quantile(level.upper_probability());
    const double w_mpi = 2.0 * z * sy;
    const double w_pi = 2.0 * z * se;
    return {1.0 - std::sqrt(1.0 - fit.r2_adj), (sy - se) / sy, (w_mpi - w_pi) / w_mpi};
}

/// 1 - sqrt(1 - R^2_adj). Negative whenever R^2_adj < 0; not clamped.
inline double pir_tilde(const FitResult& fit) { return pir_tilde_forms(fit).from_sigmas; }

/// (mpi_width - mean(pi_widths)) / mpi_width. Works for any model that can
/// produce a marginal interval and per-individual conditional intervals.
inline double pir_generalized(double mpi_width, std::span<const double> pi_widths) {
    if (!(mpi_width > 0.0)) throw DomainError("marginal interval width must be positive");
    if (pi_widths.empty()) throw InsufficientDataError("need at least one conditional interval width");
    double sum = 0.0;
    for (double w : pi_widths) {
        if (!(w >= 0.0)) throw DomainError("conditional interval widths must be non-negative");
        sum += w;
    }
    return (mpi_width - sum / static_cast<double>(pi_widths.size())) / mpi_width;
}

/// Exact-interval widths at every training row and the exact marginal width.
struct ExactWidths {
    std::vector<double> pi_widths;
    double mpi_width = 0.0;

    double mean_pi_width() const {
        return std::accumulate(pi_widths.begin(), pi_widths.end(), 0.0) / static_cast<double>(pi_widths.size());
    }
};

inline ExactWidths exact_widths(const FitResult& fit, const DesignMatrix& design, Level level = Level{}) {
    if (design.rows() != fit.n || design.predictors() != fit.p) {
        throw DimensionError("design matrix does not belong to this fit");
    }
    const Probability upper = level.upper_probability();
    const double t_cond = student_t_quantile(upper, DegreesOfFreedom(fit.residual_df()));
    const double t_marg = student_t_quantile(upper, DegreesOfFreedom(fit.n - 1));
    const double scale = 2.0 * t_cond * fit.sigma_eps_unbiased();

    ExactWidths out;
    out.pi_widths.resize(static_cast<std::size_t>(fit.n));
    const Eigen::MatrixXd& x = design.matrix();
    const Eigen::MatrixXd xg = x * fit.gram_inverse;
    for (Eigen::Index i = 0; i < fit.n; ++i) {
        const double h = xg.row(i).dot(x.row(i));
        out.pi_widths[static_cast<std::size_t>(i)] = scale * std::sqrt(1.0 + h);
    }
    out.mpi_width = 2.0 * t_marg * fit.sigma_y_unbiased() * std::sqrt(1.0 + 1.0 / static_cast<double>(fit.n));
    return out;
}

/// Sample PIR from exact intervals: one minus the mean exact conditional width
/// over the n training rows divided by the exact marginal width.
inline double pir_sample(const FitResult& fit, const DesignMatrix& design, Level level = Level{}) {
    detail::require_outcome_variance(fit);
    const ExactWidths w = exact_widths(fit, design, level);
    return pir_generalized(w.mpi_width, w.pi_widths);
}

struct PirReport {
    double pir_s = 0.0;
    double pir_tilde = 0.0;
    double pir_hat = 0.0;
    double width_mpi_exact = 0.0;
    double mean_width_pi_exact = 0.0;
    double width_mpi_approx = 0.0;
    double width_pi_approx = 0.0;
    bool pir_tilde_negative = false;  // R^2_adj < 0
    Level level;
};

inline PirReport pir_report(const FitResult& fit, const DesignMatrix& design, Level level = Level{}) {
    detail::require_outcome_variance(fit);
    const ExactWidths w = exact_widths(fit, design, level);
    const double z = normal_quantile(level.upper_probability());
    PirReport r;
    r.level = level;
    r.width_mpi_exact = w.mpi_width;
    r.mean_width_pi_exact = w.mean_pi_width();
    r.width_mpi_approx = 2.0 * z * fit.sigma_y_unbiased();
    r.width_pi_approx = 2.0 * z * fit.sigma_eps_unbiased();
    r.pir_s = pir_generalized(w.mpi_width, w.pi_widths);
    r.pir_tilde = pir_tilde(fit);
    r.pir_hat = pir_hat(fit);
    r.pir_tilde_negative = r.pir_tilde < 0.0;
    return r;
}

struct TableRow {
    double rho;
    double rho2;
    double pir;
};

/// The correlations tabulated in the reference rho -> PIR table.
inline const std::vector<double>& default_table_rhos() {
    static const std::vector<double> rhos = {0.0, 0.1,  0.2,   0.3,  0.4,   0.5,   0.6,    0.707, 0.8,
                                             0.866, 0.9, 0.95, 0.99, 0.995, 0.999, 0.9999, 1.0};
    return rhos;
}

/// Decimal places the reference table uses for (rho^2, PIR) in the row of a
/// tabulated correlation; empty for any other rho.
struct TableDecimals {
    int rho2;
    int pir;
};

inline std::optional<TableDecimals> reference_table_decimals(double rho) {
    static const std::vector<std::pair<double, TableDecimals>> decimals = {
        {0.0, {0, 0}},    {0.1, {2, 3}},   {0.2, {2, 2}},   {0.3, {2, 2}},    {0.4, {2, 2}},   {0.5, {2, 2}},
        {0.6, {2, 1}},    {0.707, {1, 2}}, {0.8, {2, 1}},   {0.866, {2, 1}},  {0.9, {2, 2}},   {0.95, {2, 2}},
        {0.99, {2, 2}},   {0.995, {2, 1}}, {0.999, {3, 3}}, {0.9999, {4, 4}}, {1.0, {0, 0}},
    };
    for (const auto& [r, d] : decimals) {
        if (r == rho) return d;
    }
    return std::nullopt;
}

inline std::vector<TableRow> pir_table(std::span<const double> rhos) {
    std::vector<TableRow> rows;
    rows.reserve(rhos.size());
    for (double rho : rhos) {
        if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("table correlations must lie in [0,1]");
        const auto assoc = PopulationAssociation::from_rho(rho);
        rows.push_back({rho, assoc.rho2(), population_pir(assoc)});
    }
    return rows;
}

}  // namespace pir

#endif  // PIR_REDUCTION_HPP
