#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pir/reduction.hpp"

using pir::Level;
using pir::PopulationAssociation;

namespace {

std::string fixed(double v, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

struct Fitted {
    pir::Dataset data;
    pir::DesignMatrix design;
    pir::FitResult fit;
};

Fitted make(std::mt19937_64& gen, int n, int p, double noise) {
    auto d = oracle::random_dataset(gen, n, p, noise);
    auto design = pir::build_design(d);
    auto f = pir::fit_ols(design, d.y);
    return {std::move(d), std::move(design), std::move(f)};
}

}  // namespace

TEST(PopulationPir, ReferenceValues) {
    EXPECT_NEAR(pir::population_pir(PopulationAssociation::from_rho(0.5)), 0.1340, 5e-5);
    EXPECT_EQ(fixed(pir::population_pir(PopulationAssociation::from_rho(0.5)), 2), "0.13");
    EXPECT_EQ(pir::population_pir(PopulationAssociation::from_rho(0.0)), 0.0);
    EXPECT_EQ(pir::population_pir(PopulationAssociation::from_rho(1.0)), 1.0);
    EXPECT_EQ(fixed(pir::population_pir(PopulationAssociation::from_rho(0.866)), 2), "0.50");
    EXPECT_DOUBLE_EQ(pir::population_pir(PopulationAssociation::from_rho(-0.6)),
                     pir::population_pir(PopulationAssociation::from_rho(0.6)));
    EXPECT_THROW(PopulationAssociation::from_rho2(1.1), pir::DomainError);
    EXPECT_THROW(PopulationAssociation::from_rho(-1.5), pir::DomainError);
}

TEST(PopulationPir, MonotoneAndBelowRho2) {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double r2 = i / 1000.0;
        const double v = pir::population_pir(PopulationAssociation::from_rho2(r2));
        EXPECT_GT(v, prev);
        EXPECT_LE(v, r2 + 1e-15);
        prev = v;
    }
}

TEST(Alienation, Identities) {
    EXPECT_EQ(fixed(pir::alienation(PopulationAssociation::from_rho(0.5)), 2), "0.87");
    EXPECT_EQ(pir::alienation(PopulationAssociation::from_rho(0.0)), 1.0);
    for (int i = 1; i <= 99; ++i) {
        const double rho = i / 100.0;
        const auto a = PopulationAssociation::from_rho(rho);
        const double k = pir::alienation(a);
        EXPECT_NEAR(k * k + a.rho2(), 1.0, 1e-12);
        EXPECT_NEAR(pir::population_pir(a), 1.0 - k, 1e-15);
        EXPECT_GT(rho + k, 1.0);
    }
}

TEST(Table, DefaultRowsAtReferenceRounding) {
    const std::vector<std::string> r2 = {"0",    "0.01", "0.04", "0.09", "0.16", "0.25",  "0.36",   "0.5", "0.64",
                                         "0.75", "0.81", "0.90", "0.98", "0.99", "0.998", "0.9998", "1"};
    const std::vector<std::string> pir = {"0",   "0.005", "0.02", "0.05", "0.08", "0.13",  "0.2",    "0.29", "0.4",
                                          "0.5", "0.56",  "0.69", "0.86", "0.9",  "0.955", "0.9859", "1"};
    const auto rows = pir::pir_table(pir::default_table_rhos());
    ASSERT_EQ(rows.size(), 17u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto d = pir::reference_table_decimals(rows[i].rho);
        ASSERT_TRUE(d.has_value());
        EXPECT_EQ(fixed(rows[i].rho2, d->rho2), r2[i]) << "rho=" << rows[i].rho;
        EXPECT_EQ(fixed(rows[i].pir, d->pir), pir[i]) << "rho=" << rows[i].rho;
        EXPECT_NEAR(rows[i].pir, 1.0 - std::sqrt(1.0 - rows[i].rho2), 1e-12);
    }
}

TEST(Table, EdgeCases) {
    EXPECT_TRUE(pir::pir_table(std::vector<double>{}).empty());
    EXPECT_THROW(pir::pir_table(std::vector<double>{1.2}), pir::DomainError);
    EXPECT_THROW(pir::pir_table(std::vector<double>{-0.1}), pir::DomainError);
    EXPECT_FALSE(pir::reference_table_decimals(0.123).has_value());
}

TEST(PirHat, KnownValues) {
    EXPECT_EQ(fixed(1.0 - std::sqrt(1.0 - 0.5 * 0.5), 2), "0.13");
    pir::Dataset d;
    d.x = Eigen::VectorXd::LinSpaced(8, 1, 8);
    d.y = 4.0 * d.x.col(0).array() - 2.0;
    const auto f = pir::fit_ols(pir::build_design(d), d.y);
    EXPECT_NEAR(pir::pir_hat(f), 1.0, 1e-7);
    EXPECT_NEAR(pir::pir_tilde(f), 1.0, 1e-7);
    EXPECT_NEAR(pir::pir_sample(f, pir::build_design(d)), 1.0, 1e-6);
}

TEST(PirTilde, WidthForm) {
    EXPECT_EQ(fixed((7.15 - 6.19) / 7.15, 2), "0.13");
}

TEST(Pir, DegenerateOutcomeRejected) {
    pir::Dataset d;
    d.x = Eigen::VectorXd::LinSpaced(6, 1, 6);
    d.y = Eigen::VectorXd::Constant(6, 2.0);
    const auto design = pir::build_design(d);
    const auto f = pir::fit_ols(design, d.y);
    EXPECT_THROW(pir::pir_hat(f), pir::DegenerateDataError);
    EXPECT_THROW(pir::pir_tilde(f), pir::DegenerateDataError);
    EXPECT_THROW(pir::pir_sample(f, design), pir::DegenerateDataError);
}

TEST(Pir, DualPathIdentities) {
    std::mt19937_64 gen(10);
    std::uniform_int_distribution<int> pick_p(1, 6);
    std::uniform_real_distribution<double> pick_noise(0.5, 40.0);
    for (int k = 0; k < 200; ++k) {
        const int p = pick_p(gen);
        std::uniform_int_distribution<int> pick_n(p + 3, 80);
        const auto m = make(gen, pick_n(gen), p, pick_noise(gen));
        const auto hat = pir::pir_hat_forms(m.fit);
        const auto tilde = pir::pir_tilde_forms(m.fit);
        EXPECT_NEAR(hat.from_r2, hat.from_sigmas, 1e-10);
        EXPECT_NEAR(tilde.from_r2_adj, tilde.from_sigmas, 1e-10);
        EXPECT_NEAR(tilde.from_sigmas, tilde.from_widths, 1e-10);
        EXPECT_LE(pir::pir_tilde(m.fit), pir::pir_hat(m.fit));
        EXPECT_GE(pir::pir_hat(m.fit), 0.0);
        EXPECT_LE(pir::pir_hat(m.fit), 1.0);
        EXPECT_LE(pir::pir_hat(m.fit), m.fit.r2 + 1e-15);

        const auto w = pir::exact_widths(m.fit, m.design);
        EXPECT_NEAR(pir::pir_sample(m.fit, m.design), pir::pir_generalized(w.mpi_width, w.pi_widths), 1e-12);
        const auto report = pir::pir_report(m.fit, m.design);
        EXPECT_NEAR(report.pir_s, 1.0 - report.mean_width_pi_exact / report.width_mpi_exact, 1e-10);
        EXPECT_NEAR(report.pir_tilde, 1.0 - report.width_pi_approx / report.width_mpi_approx, 1e-10);
        EXPECT_EQ(report.pir_tilde_negative, report.pir_tilde < 0.0);
    }
}

TEST(Pir, ExactWidthsMatchIntervalFunctions) {
    std::mt19937_64 gen(11);
    const auto m = make(gen, 25, 3, 5.0);
    const auto w = pir::exact_widths(m.fit, m.design, Level(0.9));
    for (Eigen::Index i = 0; i < m.fit.n; ++i) {
        EXPECT_NEAR(w.pi_widths[static_cast<std::size_t>(i)],
                    pir::pi_exact(m.fit, m.design.predictor_row(i), Level(0.9)).width(), 1e-10);
    }
    EXPECT_NEAR(w.mpi_width, pir::mpi_exact(m.data.y, Level(0.9)).width(), 1e-10);
}

TEST(Pir, LevelInvariance) {
    std::mt19937_64 gen(12);
    const auto m = make(gen, 30, 4, 10.0);
    const auto base = pir::pir_report(m.fit, m.design, Level(0.95));
    for (double g : {0.8, 0.9, 0.95, 0.99}) {
        const Level lv(g);
        const auto r = pir::pir_report(m.fit, m.design, lv);
        EXPECT_EQ(r.pir_hat, base.pir_hat);
        EXPECT_EQ(r.pir_tilde, base.pir_tilde);
        EXPECT_NEAR(pir::pir_tilde_forms(m.fit, lv).from_widths, base.pir_tilde, 1e-12);
        // Recompute from the quantile ratio and the average root-leverage factor.
        const double q = 0.5 * (1.0 + g);
        const double tc = oracle::invert([&](double x) { return oracle::t_cdf(x, 25.0); }, q, 0.0, 20.0);
        const double tm = oracle::invert([&](double x) { return oracle::t_cdf(x, 29.0); }, q, 0.0, 20.0);
        double root_lev = 0.0;
        for (Eigen::Index i = 0; i < 30; ++i) root_lev += std::sqrt(1.0 + pir::leverage(m.fit, m.design.predictor_row(i)));
        root_lev /= 30.0;
        const double expected = 1.0 - (tc / tm) * m.fit.sigma_eps_unbiased() * root_lev /
                                          (m.fit.sigma_y_unbiased() * std::sqrt(1.0 + 1.0 / 30.0));
        EXPECT_NEAR(r.pir_s, expected, 1e-9) << "gamma=" << g;
    }
}

TEST(Pir, AffineInvariance) {
    std::mt19937_64 gen(13);
    const auto m = make(gen, 35, 3, 6.0);
    const auto base = pir::pir_report(m.fit, m.design);
    pir::Dataset e = m.data;
    e.y = -3.0 * m.data.y.array() + 100.0;
    e.x.col(0) = 2.54 * m.data.x.col(0).array() - 5.0;
    e.x.col(2) = -0.1 * m.data.x.col(2).array() + 1.0;
    const auto design = pir::build_design(e);
    const auto r = pir::pir_report(pir::fit_ols(design, e.y), design);
    EXPECT_NEAR(r.pir_s, base.pir_s, 1e-10);
    EXPECT_NEAR(r.pir_tilde, base.pir_tilde, 1e-10);
    EXPECT_NEAR(r.pir_hat, base.pir_hat, 1e-10);
}

TEST(Pir, PureNoiseNearZero) {
    std::mt19937_64 gen(14);
    std::normal_distribution<double> z;
    pir::Dataset d;
    d.x.resize(1000, 1);
    d.y.resize(1000);
    for (int i = 0; i < 1000; ++i) {
        d.x(i, 0) = z(gen);
        d.y(i) = z(gen);
    }
    const auto design = pir::build_design(d);
    const auto r = pir::pir_report(pir::fit_ols(design, d.y), design);
    EXPECT_NEAR(r.pir_s, 0.0, 0.05);
    EXPECT_NEAR(r.pir_tilde, 0.0, 0.05);
    EXPECT_NEAR(r.pir_hat, 0.0, 0.05);
}

TEST(Pir, NegativeAdjustedEstimateIsKept) {
    pir::Dataset d;
    d.x = Eigen::VectorXd::LinSpaced(8, 1, 8);
    d.y.resize(8);
    d.y << 1, -1, -1, 1, 1, -1, -1, 1;  // orthogonal to the centered predictor
    const auto design = pir::build_design(d);
    const auto r = pir::pir_report(pir::fit_ols(design, d.y), design);
    EXPECT_LT(r.pir_tilde, 0.0);
    EXPECT_TRUE(r.pir_tilde_negative);
}

TEST(PirGeneralized, Cases) {
    EXPECT_EQ(pir::pir_generalized(5.0, std::vector<double>(4, 5.0)), 0.0);
    EXPECT_EQ(pir::pir_generalized(5.0, std::vector<double>(4, 0.0)), 1.0);
    EXPECT_EQ(fixed(pir::pir_generalized(28.0, std::vector<double>(10, 24.3)), 3), "0.132");
    EXPECT_THROW(pir::pir_generalized(0.0, std::vector<double>{1.0}), pir::DomainError);
    EXPECT_THROW(pir::pir_generalized(1.0, std::vector<double>{}), pir::InsufficientDataError);
    EXPECT_THROW(pir::pir_generalized(1.0, std::vector<double>{-1.0}), pir::DomainError);
}
