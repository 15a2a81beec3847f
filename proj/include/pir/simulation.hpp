#ifndef PIR_SIMULATION_HPP
#define PIR_SIMULATION_HPP

// Monte Carlo study of the three sample PIR estimators.
//
// Each replication draws p equicorrelated standard-normal predictors, sets
// Y = 1 + X_1 + ... + X_p + eps with eps ~ N(0, sigma_eps^2), fits OLS and
// records (PIR_s, PIR~, PIR^). Replication r of cell (n, p, rho2, rho_x) owns
// the stream RngStream(seed, derive_stream_id({n, p, bits(rho2), bits(rho_x), r})),
// so a cell's numbers do not depend on the rest of the grid or on scheduling.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "pir/errors.hpp"
#include "pir/intervals.hpp"
#include "pir/linreg.hpp"
#include "pir/reduction.hpp"
#include "pir/rng.hpp"

namespace pir {

/// How the residual variance is calibrated to the target rho^2.
///   AsPrinted: (1 - rho^2)/rho^2 * (1 + (p-1) rho_x)
///   Derived:   (1 - rho^2)/rho^2 * p (1 + (p-1) rho_x), i.e. Var(L) (1-rho^2)/rho^2
///              with Var(L) = 1' Sigma 1 for unit slopes.
/// Only Derived makes the population coefficient of determination equal rho^2
/// when p > 1; the two agree at p = 1.
enum class SigmaMode { AsPrinted, Derived };

inline std::string to_string(SigmaMode m) { return m == SigmaMode::AsPrinted ? "as-printed" : "derived"; }

inline double residual_variance_for_target(double rho2, int p, double rho_x, SigmaMode mode) {
    if (!(rho2 > 0.0 && rho2 < 1.0)) throw DomainError("target rho^2 must lie in (0,1)");
    if (p < 1) throw DomainError("need at least one predictor");
    if (!(rho_x >= 0.0 && rho_x < 1.0)) throw DomainError("rho_x must lie in [0,1)");
    const double block = 1.0 + (p - 1) * rho_x;
    const double odds = (1.0 - rho2) / rho2;
    return mode == SigmaMode::AsPrinted ? odds * block : odds * p * block;
}

/// A failure attributed to one cell of the grid.
class SimulationError : public Error {
public:
    using Error::Error;
};

struct CellKey {
    int n = 0;
    int p = 0;
    double rho2 = 0.0;
    double rho_x = 0.0;

    std::string label() const {
        return "n=" + std::to_string(n) + " p=" + std::to_string(p) + " rho2=" + std::to_string(rho2) +
               " rho_x=" + std::to_string(rho_x);
    }
    bool operator==(const CellKey&) const = default;
};

struct SimulationSpec {
    std::vector<int> n_values = {20, 100, 500};
    std::vector<int> p_values = {1, 5, 10};
    std::vector<double> rho2_values = {0.25, 0.5, 0.9};
    std::vector<double> rho_x_values = {0.0, 0.5};
    int replications = 2000;
    Level level;
    std::uint64_t seed = 20240501;
    SigmaMode sigma_mode = SigmaMode::Derived;
    unsigned workers = 0;  // 0: hardware concurrency

    void validate() const {
        if (replications < 1) throw ValidationError("replications must be >= 1");
        if (n_values.empty() || p_values.empty() || rho2_values.empty() || rho_x_values.empty()) {
            throw ValidationError("every grid dimension needs at least one value");
        }
        const int max_p = *std::max_element(p_values.begin(), p_values.end());
        for (int p : p_values) {
            if (p < 1) throw ValidationError("p values must be >= 1");
        }
        for (int n : n_values) {
            if (n <= max_p + 1) {
                throw ValidationError("every n must exceed max(p) + 1 (n=" + std::to_string(n) + ")");
            }
        }
        for (double r : rho2_values) {
            if (!(r > 0.0 && r < 1.0)) throw ValidationError("rho2 values must lie in (0,1)");
        }
        for (double r : rho_x_values) {
            if (!(r >= 0.0 && r < 1.0)) throw ValidationError("rho_x values must lie in [0,1)");
        }
    }

    /// Grid cells, ordered by rho_x, then p, then rho2, then n.
    std::vector<CellKey> cells() const {
        std::vector<CellKey> out;
        for (double rx : rho_x_values)
            for (int p : p_values)
                for (double r2 : rho2_values)
                    for (int n : n_values) out.push_back({n, p, r2, rx});
        return out;
    }
};

struct BoxplotStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

/// Five-number summary and mean; quartiles use the same interpolation rule as
/// empirical_quantile_sorted. NaN entries (missing replications) are skipped.
inline BoxplotStats boxplot_stats(std::span<const double> values) {
    std::vector<double> v;
    v.reserve(values.size());
    for (double x : values) {
        if (!std::isnan(x)) v.push_back(x);
    }
    if (v.empty()) throw InsufficientDataError("boxplot of an empty sample");
    std::sort(v.begin(), v.end());
    BoxplotStats s;
    s.min = v.front();
    s.max = v.back();
    s.q1 = empirical_quantile_sorted(v, 0.25);
    s.median = empirical_quantile_sorted(v, 0.5);
    s.q3 = empirical_quantile_sorted(v, 0.75);
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    return s;
}

inline double nan_mean(std::span<const double> values) {
    double sum = 0.0;
    std::size_t k = 0;
    for (double x : values) {
        if (!std::isnan(x)) {
            sum += x;
            ++k;
        }
    }
    return k == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(k);
}

/// Per-replication estimates of one cell. Missing replications hold NaN.
struct CellEstimates {
    std::vector<double> pir_s;
    std::vector<double> pir_tilde;
    std::vector<double> pir_hat;
    std::vector<double> r2;  // realized R^2, kept for calibration checks
    std::size_t missing = 0;
};

struct ReplicationOutcome {
    double pir_s = std::numeric_limits<double>::quiet_NaN();
    double pir_tilde = std::numeric_limits<double>::quiet_NaN();
    double pir_hat = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
};

inline RngStream replication_stream(std::uint64_t seed, const CellKey& key, int replication) {
    return RngStream(seed, derive_stream_id({static_cast<std::uint64_t>(key.n), static_cast<std::uint64_t>(key.p),
                                             bits_of(key.rho2), bits_of(key.rho_x),
                                             static_cast<std::uint64_t>(replication)}));
}

/// Draws (X, y) from the linear model with all coefficients equal to 1.
inline Dataset draw_linear_model_sample(RngStream& stream, int n, int p, double rho_x, double sigma_eps) {
    Dataset d;
    d.x = sample_equicorrelated_normal(stream, n, p, rho_x);
    d.y.resize(n);
    for (int i = 0; i < n; ++i) {
        d.y(i) = 1.0 + d.x.row(i).sum() + sigma_eps * stream.standard_normal();
    }
    return d;
}

inline ReplicationOutcome simulate_replication(const CellKey& key, int replication, Level level, std::uint64_t seed,
                                               SigmaMode mode) {
    RngStream stream = replication_stream(seed, key, replication);
    const double sigma_eps = std::sqrt(residual_variance_for_target(key.rho2, key.p, key.rho_x, mode));
    const Dataset d = draw_linear_model_sample(stream, key.n, key.p, key.rho_x, sigma_eps);
    ReplicationOutcome out;
    try {
        const DesignMatrix design = build_design(d);
        const FitResult fit = fit_ols(design, d.y);
        out.pir_s = pir_sample(fit, design, level);
        out.pir_tilde = pir_tilde(fit);
        out.pir_hat = pir_hat(fit);
        out.r2 = fit.r2;
        out.ok = true;
    } catch (const SingularDesignError&) {
    } catch (const DegenerateDataError&) {
    }
    return out;
}

namespace detail {
// Runs body(i) for i in [0, count) on `workers` threads. Each index is
// written by exactly one call, so output order never depends on scheduling.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    failed = true;
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

inline void check_missing_budget(const CellKey& key, std::size_t missing, int replications) {
    if (static_cast<double>(missing) > 0.01 * replications) {
        throw SimulationError("cell " + key.label() + ": " + std::to_string(missing) + " of " +
                              std::to_string(replications) + " replications failed (budget 1%)");
    }
}
}  // namespace detail

inline CellEstimates simulate_cell(const CellKey& key, int replications, Level level, std::uint64_t seed,
                                   SigmaMode mode, unsigned workers = 1) {
    if (replications < 1) throw ValidationError("replications must be >= 1");
    if (key.n <= key.p + 1) throw ValidationError("cell " + key.label() + ": n must exceed p + 1");
    std::vector<ReplicationOutcome> reps(static_cast<std::size_t>(replications));
    detail::parallel_for(reps.size(), workers, [&](std::size_t r) {
        reps[r] = simulate_replication(key, static_cast<int>(r), level, seed, mode);
    });
    CellEstimates est;
    for (const auto& r : reps) {
        est.pir_s.push_back(r.pir_s);
        est.pir_tilde.push_back(r.pir_tilde);
        est.pir_hat.push_back(r.pir_hat);
        est.r2.push_back(r.r2);
        if (!r.ok) ++est.missing;
    }
    detail::check_missing_budget(key, est.missing, replications);
    return est;
}

struct CellResult {
    CellKey key;
    CellEstimates estimates;
    double population_pir = 0.0;
    BoxplotStats pir_s;
    BoxplotStats pir_tilde;
    BoxplotStats pir_hat;
};

struct SimulationResult {
    SimulationSpec spec;
    std::vector<CellResult> cells;

    const CellResult& cell(int n, int p, double rho2, double rho_x) const {
        for (const auto& c : cells) {
            if (c.key == CellKey{n, p, rho2, rho_x}) return c;
        }
        throw DomainError("no such cell: " + CellKey{n, p, rho2, rho_x}.label());
    }
};

inline CellResult summarize_cell(const CellKey& key, CellEstimates est) {
    CellResult c;
    c.key = key;
    c.population_pir = population_pir(PopulationAssociation::from_rho2(key.rho2));
    c.pir_s = boxplot_stats(est.pir_s);
    c.pir_tilde = boxplot_stats(est.pir_tilde);
    c.pir_hat = boxplot_stats(est.pir_hat);
    c.estimates = std::move(est);
    return c;
}

/// Runs the whole grid. Work is spread over replications of all cells at
/// once; the result is identical for any worker count.
inline SimulationResult run(const SimulationSpec& spec) {
    spec.validate();
    const std::vector<CellKey> keys = spec.cells();
    const auto reps = static_cast<std::size_t>(spec.replications);
    std::vector<ReplicationOutcome> outcomes(keys.size() * reps);
    detail::parallel_for(outcomes.size(), spec.workers, [&](std::size_t i) {
        outcomes[i] = simulate_replication(keys[i / reps], static_cast<int>(i % reps), spec.level, spec.seed,
                                           spec.sigma_mode);
    });

    SimulationResult result;
    result.spec = spec;
    result.cells.reserve(keys.size());
    for (std::size_t c = 0; c < keys.size(); ++c) {
        CellEstimates est;
        for (std::size_t r = 0; r < reps; ++r) {
            const auto& o = outcomes[c * reps + r];
            est.pir_s.push_back(o.pir_s);
            est.pir_tilde.push_back(o.pir_tilde);
            est.pir_hat.push_back(o.pir_hat);
            est.r2.push_back(o.r2);
            if (!o.ok) ++est.missing;
        }
        detail::check_missing_budget(keys[c], est.missing, spec.replications);
        result.cells.push_back(summarize_cell(keys[c], std::move(est)));
    }
    return result;
}

/// Realized R^2 of one large sample drawn under the given calibration.
inline double realized_r2(double rho2, int p, double rho_x, SigmaMode mode, int n, std::uint64_t seed) {
    RngStream stream(seed, derive_stream_id({0x52325F6368ULL, static_cast<std::uint64_t>(p), bits_of(rho2),
                                             bits_of(rho_x), static_cast<std::uint64_t>(mode)}));
    const double sigma_eps = std::sqrt(residual_variance_for_target(rho2, p, rho_x, mode));
    const Dataset d = draw_linear_model_sample(stream, n, p, rho_x, sigma_eps);
    return fit_ols(build_design(d), d.y).r2;
}

/// Empirical coverage of the interval constructions over independent
/// (training sample, fresh test point) pairs drawn from the linear model with
/// unit slopes, independent standard-normal predictors and unit error variance.
struct CoverageStudy {
    double pi_exact = 0.0;
    double pi_approx = 0.0;
    double mpi_exact = 0.0;
    double mpi_approx = 0.0;
    int replications = 0;
};

inline CoverageStudy interval_coverage_study(int n, int p, Level level, int replications, std::uint64_t seed,
                                             unsigned workers = 1) {
    if (n <= p + 1 || p < 1) throw ValidationError("coverage study needs p >= 1 and n > p + 1");
    if (replications < 1) throw ValidationError("replications must be >= 1");
    struct Hits {
        bool pi_exact, pi_approx, mpi_exact, mpi_approx;
    };
    std::vector<Hits> hits(static_cast<std::size_t>(replications));
    detail::parallel_for(hits.size(), workers, [&](std::size_t r) {
        RngStream stream(seed, derive_stream_id({0x434F5645ULL, static_cast<std::uint64_t>(n),
                                                 static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(r)}));
        const Dataset train = draw_linear_model_sample(stream, n, p, 0.0, 1.0);
        const Dataset test = draw_linear_model_sample(stream, 1, p, 0.0, 1.0);
        const FitResult fit = fit_ols(build_design(train), train.y);
        const Eigen::VectorXd x0 = test.x.row(0).transpose();
        const double y0 = test.y(0);
        hits[r] = Hits{pi_exact(fit, x0, level).contains(y0), pi_approx(fit, x0, level).contains(y0),
                       mpi_exact(train.y, level).contains(y0), mpi_approx(train.y, level).contains(y0)};
    });
    CoverageStudy s;
    s.replications = replications;
    for (const auto& h : hits) {
        s.pi_exact += h.pi_exact;
        s.pi_approx += h.pi_approx;
        s.mpi_exact += h.mpi_exact;
        s.mpi_approx += h.mpi_approx;
    }
    s.pi_exact /= replications;
    s.pi_approx /= replications;
    s.mpi_exact /= replications;
    s.mpi_approx /= replications;
    return s;
}

}  // namespace pir

#endif  // PIR_SIMULATION_HPP
