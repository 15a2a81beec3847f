#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pir/intervals.hpp"
#include "pir/rng.hpp"

using pir::Level;

namespace {

struct Fitted {
    pir::Dataset data;
    pir::DesignMatrix design;
    pir::FitResult fit;
};

Fitted make(std::uint64_t seed, int n, int p, double noise = 1.0) {
    std::mt19937_64 gen(seed);
    auto d = oracle::random_dataset(gen, n, p, noise);
    auto design = pir::build_design(d);
    auto f = pir::fit_ols(design, d.y);
    return {std::move(d), std::move(design), std::move(f)};
}

void expect_symmetric(const pir::Interval& iv) {
    EXPECT_LE(iv.lower, iv.center);
    EXPECT_LE(iv.center, iv.upper);
    EXPECT_NEAR(iv.center, 0.5 * (iv.lower + iv.upper), 1e-10 * std::max(1.0, std::abs(iv.center)));
}

}  // namespace

TEST(LevelType, Validation) {
    EXPECT_DOUBLE_EQ(Level().gamma(), 0.95);
    EXPECT_THROW(Level(1.5), pir::DomainError);
    EXPECT_THROW(Level(0.0), pir::DomainError);
    EXPECT_THROW(Level(1.0), pir::DomainError);
    EXPECT_DOUBLE_EQ(Level(0.9).upper_probability().value(), 0.95);
}

TEST(PiApprox, CenterAndConstantWidth) {
    const auto m = make(1, 30, 2);
    const double z = oracle::invert(oracle::normal_cdf, 0.975, 0.0, 5.0);
    for (Eigen::Index i = 0; i < 5; ++i) {
        const auto iv = pir::pi_approx(m.fit, m.design.predictor_row(i));
        expect_symmetric(iv);
        EXPECT_NEAR(iv.center, pir::fitted_value(m.fit, m.design.predictor_row(i)), 1e-12);
        EXPECT_NEAR(iv.width(), 2.0 * z * m.fit.sigma_eps_unbiased(), 1e-12 * iv.width());
        EXPECT_EQ(iv.method, pir::IntervalMethod::PiApprox);
    }
}

TEST(PiApprox, PerfectFitIsDegenerate) {
    pir::Dataset d;
    d.x = Eigen::VectorXd::LinSpaced(6, 1, 6);
    d.y = 2.0 * d.x.col(0).array() + 1.0;
    const auto f = pir::fit_ols(pir::build_design(d), d.y);
    const auto iv = pir::pi_approx(f, Eigen::VectorXd::Constant(1, 3.5));
    EXPECT_NEAR(iv.width(), 0.0, 1e-6);
    EXPECT_NEAR(iv.center, 8.0, 1e-12);
}

TEST(PiExact, WiderThanApproxEverywhere) {
    const auto m = make(2, 25, 3);
    for (Eigen::Index i = 0; i < m.fit.n; ++i) {
        const auto x = m.design.predictor_row(i);
        const auto ex = pir::pi_exact(m.fit, x);
        expect_symmetric(ex);
        EXPECT_GT(ex.width(), pir::pi_approx(m.fit, x).width());
    }
}

TEST(PiExact, WidthGrowsAlongRayFromMean) {
    const auto m = make(3, 30, 2);
    const Eigen::VectorXd center = m.data.x.colwise().mean().transpose();
    const Eigen::Vector2d dir(0.6, -0.8);
    double prev = 0.0;
    for (int k = 0; k <= 20; ++k) {
        const double w = pir::pi_exact(m.fit, center + k * dir).width();
        EXPECT_GE(w, prev);
        prev = w;
    }
}

TEST(PiExact, WidthRatioAtMeanN20P10) {
    const auto m = make(4, 20, 10);
    const Eigen::VectorXd center = m.data.x.colwise().mean().transpose();
    const double t9 = oracle::invert([](double x) { return oracle::t_cdf(x, 9.0); }, 0.975, 0.0, 10.0);
    const double z = oracle::invert(oracle::normal_cdf, 0.975, 0.0, 5.0);
    const double ratio = pir::pi_exact(m.fit, center).width() / pir::pi_approx(m.fit, center).width();
    EXPECT_NEAR(ratio, t9 / z * std::sqrt(1.0 + 1.0 / 20.0), 1e-9);
}

TEST(MpiApprox, Formula) {
    Eigen::VectorXd y(4);
    y << -1.0, -1.0, 1.0, 1.0;
    y *= std::sqrt(3.0 / 4.0);  // unbiased sd 1
    const auto iv = pir::mpi_approx(y);
    EXPECT_NEAR(iv.center, 0.0, 1e-15);
    EXPECT_NEAR(iv.upper, 1.959964, 1e-6);
    EXPECT_NEAR(iv.lower, -1.959964, 1e-6);
    const auto c = pir::mpi_approx(Eigen::VectorXd::Constant(5, 3.0));
    EXPECT_EQ(c.lower, 3.0);
    EXPECT_EQ(c.upper, 3.0);
    EXPECT_THROW(pir::mpi_approx(Eigen::VectorXd::Ones(1)), pir::InsufficientDataError);
}

TEST(MpiExact, TwoPoints) {
    const auto iv = pir::mpi_exact(Eigen::Vector2d(0.0, 1.0));
    const double t1 = oracle::invert([](double x) { return oracle::t_cdf(x, 1.0); }, 0.975, 0.0, 100.0);
    EXPECT_NEAR(iv.center, 0.5, 1e-15);
    EXPECT_NEAR(iv.upper - iv.center, t1 * std::sqrt(0.5) * std::sqrt(1.5), 1e-7);
    EXPECT_THROW(pir::mpi_exact(Eigen::VectorXd::Ones(1)), pir::InsufficientDataError);
}

TEST(MpiExact, WiderThanApprox) {
    const auto m = make(5, 40, 1);
    EXPECT_GT(pir::mpi_exact(m.data.y).width(), pir::mpi_approx(m.data.y).width());
}

TEST(MpiEmpirical, OneToThousand) {
    const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(1000, 1, 1000);
    const auto iv = pir::mpi_empirical(y);
    // Sort-and-index oracle: h = 999 q, interpolate between y[floor h] and y[floor h + 1].
    auto brute = [&](double q) {
        const double h = 999.0 * q;
        const int lo = static_cast<int>(h);
        return y(lo) + (h - lo) * (y(lo + 1) - y(lo));
    };
    EXPECT_NEAR(iv.lower, brute(0.025), 1e-9);
    EXPECT_NEAR(iv.upper, brute(0.975), 1e-9);
    EXPECT_NEAR(iv.lower, 25.975, 1e-9);
    EXPECT_NEAR(iv.upper, 975.025, 1e-9);
    EXPECT_NEAR(iv.center, 500.5, 1e-12);
}

TEST(MpiEmpirical, MinimumSizeAndConstant) {
    EXPECT_EQ(pir::mpi_empirical_min_size(Level(0.95)), 40);
    EXPECT_EQ(pir::mpi_empirical_min_size(Level(0.9)), 20);
    EXPECT_THROW(pir::mpi_empirical(Eigen::VectorXd::LinSpaced(39, 1, 39)), pir::InsufficientDataError);
    EXPECT_NO_THROW(pir::mpi_empirical(Eigen::VectorXd::LinSpaced(40, 1, 40)));
    const auto c = pir::mpi_empirical(Eigen::VectorXd::Constant(50, 2.5));
    EXPECT_EQ(c.lower, 2.5);
    EXPECT_EQ(c.upper, 2.5);
}

TEST(MpiEmpirical, AgreesWithNormalTheoryOnLargeSample) {
    pir::RngStream s(77, 1);
    const auto v = pir::sample_standard_normal(s, 100000);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(v.data(), 100000);
    const auto emp = pir::mpi_empirical(y);
    const auto app = pir::mpi_approx(y);
    EXPECT_NEAR(emp.lower, app.lower, 0.03);
    EXPECT_NEAR(emp.upper, app.upper, 0.03);
}

TEST(Intervals, NestedInLevel) {
    const auto m = make(6, 60, 2);
    const Eigen::VectorXd x = m.design.predictor_row(3);
    const std::vector<double> gammas = {0.5, 0.8, 0.9, 0.95, 0.99};
    for (std::size_t k = 1; k < gammas.size(); ++k) {
        const Level a(gammas[k - 1]);
        const Level b(gammas[k]);
        auto nested = [](const pir::Interval& in, const pir::Interval& out) {
            EXPECT_GT(in.lower, out.lower);
            EXPECT_LT(in.upper, out.upper);
        };
        nested(pir::pi_approx(m.fit, x, a), pir::pi_approx(m.fit, x, b));
        nested(pir::pi_exact(m.fit, x, a), pir::pi_exact(m.fit, x, b));
        nested(pir::mpi_approx(m.data.y, a), pir::mpi_approx(m.data.y, b));
        nested(pir::mpi_exact(m.data.y, a), pir::mpi_exact(m.data.y, b));
        if (m.data.y.size() >= pir::mpi_empirical_min_size(b)) {
            nested(pir::mpi_empirical(m.data.y, a), pir::mpi_empirical(m.data.y, b));
        }
    }
}

TEST(Intervals, AffineEquivariance) {
    const auto m = make(7, 50, 2, 4.0);
    const double a = 2.54;
    const double b = -10.0;
    pir::Dataset e = m.data;
    e.y = a * m.data.y.array() + b;
    const auto g = pir::fit_ols(pir::build_design(e), e.y);
    const Eigen::VectorXd x = m.design.predictor_row(0);
    auto check = [&](const pir::Interval& base, const pir::Interval& mapped) {
        EXPECT_NEAR(mapped.lower, a * base.lower + b, 1e-8 * std::abs(mapped.lower) + 1e-10);
        EXPECT_NEAR(mapped.upper, a * base.upper + b, 1e-8 * std::abs(mapped.upper) + 1e-10);
    };
    check(pir::pi_approx(m.fit, x), pir::pi_approx(g, x));
    check(pir::pi_exact(m.fit, x), pir::pi_exact(g, x));
    check(pir::mpi_approx(m.data.y), pir::mpi_approx(e.y));
    check(pir::mpi_exact(m.data.y), pir::mpi_exact(e.y));
    check(pir::mpi_empirical(m.data.y), pir::mpi_empirical(e.y));
}

TEST(Coverage, ClosedBoundsAndErrors) {
    const pir::Interval iv{0.0, 1.0, 0.5, Level(), pir::IntervalMethod::MpiExact};
    const std::vector<pir::Interval> ivs(4, iv);
    const std::vector<double> y = {0.0, 1.0, 0.5, 1.0000001};
    EXPECT_EQ(pir::coverage_count(ivs, y), 3u);
    EXPECT_DOUBLE_EQ(pir::coverage(ivs, y), 0.75);
    EXPECT_THROW(pir::coverage(ivs, std::vector<double>{1.0}), pir::DimensionError);
    EXPECT_THROW(pir::coverage(std::vector<pir::Interval>{}, std::vector<double>{}), pir::InsufficientDataError);
    const pir::Interval huge{-1e300, 1e300, 0.0, Level(), pir::IntervalMethod::PiExact};
    EXPECT_DOUBLE_EQ(pir::coverage(std::vector<pir::Interval>(3, huge), std::vector<double>{-5, 0, 1e10}), 1.0);
}
