#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lvr/gbm.hpp"
#include "lvr/rng.hpp"

using namespace lvr;

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("degenerate diffusion is constant") {
    const PricePath path = simulate_gbm({2.0, 0.0}, 5.0, 100, 42);
    for (double p : path.prices) CHECK(p == 2.0);
    CHECK(path.times.front() == 0.0);
    CHECK(path.times.back() == 5.0);
}

TEST_CASE("reproducibility and parameter validation") {
    const PricePath a = simulate_gbm({1.0, 0.05}, 10.0, 1000, 7);
    const PricePath b = simulate_gbm({1.0, 0.05}, 10.0, 1000, 7);
    CHECK(a.prices == b.prices);
    const PricePath c = simulate_gbm({1.0, 0.05}, 10.0, 1000, 8);
    CHECK(a.prices != c.prices);

    CHECK_THROWS_AS(simulate_gbm({1.0, 0.05}, 0.0, 10, 0), DomainError);
    CHECK_THROWS_AS(simulate_gbm({1.0, 0.05}, 1.0, 0, 0), DomainError);
    CHECK_THROWS_AS(simulate_gbm({-1.0, 0.05}, 1.0, 10, 0), DomainError);
}

TEST_CASE("martingale property of the terminal price") {
    const std::size_t n_paths = 10000;
    const double sigma = 0.05, T = 1000.0;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const double pt = simulate_gbm({1.0, sigma}, T, 100, 99, p).prices.back();
        sum += pt;
        sum_sq += pt * pt;
    }
    const double mean = sum / n_paths;
    const double var = sum_sq / n_paths - mean * mean;
    const double se = std::sqrt(var / n_paths);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("per-step log-return variance matches the lognormal law") {
    const double sigma = 0.05, T = 100.0;
    const std::size_t steps = 20000;
    const PricePath path = simulate_gbm({1.0, sigma}, T, steps, 5);
    const double dt = T / steps;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double r = std::log(path.prices[k + 1] / path.prices[k]);
        sum += r;
        sum_sq += r * r;
    }
    const double mean = sum / steps;
    const double var = sum_sq / steps - mean * mean;
    // Variance of the sample variance of N(.,v) is 2 v^2 / n.
    const double v = sigma * sigma * dt;
    const double se = v * std::sqrt(2.0 / steps);
    CHECK(std::abs(var - v) < 3.0 * se);
    CHECK(std::abs(mean + 0.5 * v) < 3.0 * std::sqrt(v / steps));
}

TEST_CASE("single-step distribution is exactly lognormal (KS test)") {
    const double sigma = 0.3, dt = 1.0;
    const std::size_t n = 100000;
    std::vector<double> z(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double p1 = simulate_gbm({1.0, sigma}, dt, 1, 17, p).prices[1];
        z[p] = (std::log(p1) + 0.5 * sigma * sigma * dt) / (sigma * std::sqrt(dt));
    }
    std::sort(z.begin(), z.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = normal_cdf(z[i]);
        ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    // 1% critical value of the one-sample KS statistic.
    CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("realized quadratic variation") {
    PricePath flat;
    flat.times = {0.0, 1.0, 2.0};
    flat.prices = {1.0, 1.0, 1.0};
    CHECK(realized_quadratic_variation(flat) == 0.0);

    PricePath two;
    two.times = {0.0, 1.0};
    two.prices = {1.0, 1.1};
    CHECK(realized_quadratic_variation(two) ==
          doctest::Approx(0.01).epsilon(1e-12));

    // On a fine GBM path the realized QV tracks the integral of sigma^2 P^2 dt
    // computed on the same grid.
    const double sigma = 0.05, T = 1.0;
    const std::size_t steps = 100000;
    const PricePath path = simulate_gbm({1.0, sigma}, T, steps, 3);
    const double dt = T / steps;
    double integral = 0.0;
    for (std::size_t k = 0; k < steps; ++k)
        integral += sigma * sigma * path.prices[k] * path.prices[k] * dt;
    CHECK(realized_quadratic_variation(path) ==
          doctest::Approx(integral).epsilon(0.01));
}

TEST_CASE("multi-asset dynamics") {
    SUBCASE("zero covariance freezes prices") {
        const MultiGbmParams params{{1.0, 2.0}, {{0.0, 0.0}, {0.0, 0.0}}};
        const MultiPricePath path = simulate_multi_gbm(params, 1.0, 50, 1);
        for (const auto& row : path.prices) {
            CHECK(row[0] == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(row[1] == doctest::Approx(2.0).epsilon(1e-14));
        }
    }

    SUBCASE("diagonal covariance gives independent assets") {
        const double s2 = 0.0025;
        const MultiGbmParams params{{1.0, 1.0}, {{s2, 0.0}, {0.0, s2}}};
        const std::size_t steps = 50000;
        const MultiPricePath path = simulate_multi_gbm(params, 50.0, steps, 2);
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            const double rx = std::log(path.prices[k + 1][0] / path.prices[k][0]);
            const double ry = std::log(path.prices[k + 1][1] / path.prices[k][1]);
            sxy += rx * ry;
            sxx += rx * rx;
            syy += ry * ry;
        }
        const double corr = sxy / std::sqrt(sxx * syy);
        CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(steps)));
    }

    SUBCASE("correlated covariance reproduces the target correlation") {
        const double s2 = 0.0025, rho = 0.9;
        const MultiGbmParams params{{1.0, 1.0},
                                    {{s2, rho * s2}, {rho * s2, s2}}};
        const std::size_t steps = 50000;
        const MultiPricePath path = simulate_multi_gbm(params, 50.0, steps, 4);
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            const double rx = std::log(path.prices[k + 1][0] / path.prices[k][0]);
            const double ry = std::log(path.prices[k + 1][1] / path.prices[k][1]);
            sxy += rx * ry;
            sxx += rx * rx;
            syy += ry * ry;
        }
        const double corr = sxy / std::sqrt(sxx * syy);
        const double se = (1.0 - rho * rho) / std::sqrt(static_cast<double>(steps));
        CHECK(std::abs(corr - rho) < 3.0 * se);
    }

    SUBCASE("marginal matches the scalar generator in distribution") {
        const double s2 = 0.0025;
        const MultiGbmParams params{{1.0, 1.0}, {{s2, 0.0}, {0.0, s2}}};
        const std::size_t n_paths = 4000;
        double sum = 0.0;
        for (std::size_t p = 0; p < n_paths; ++p)
            sum += simulate_multi_gbm(params, 10.0, 20, 11, p).prices.back()[0];
        const double mean = sum / n_paths;
        CHECK(std::abs(mean - 1.0) < 0.02);
    }

    SUBCASE("asymmetric or indefinite covariance is rejected") {
        CHECK_THROWS_AS(
            simulate_multi_gbm({{1.0, 1.0}, {{1.0, 0.5}, {0.4, 1.0}}}, 1.0, 10, 0),
            DomainError);
        CHECK_THROWS_AS(
            simulate_multi_gbm({{1.0, 1.0}, {{1.0, 2.0}, {2.0, 1.0}}}, 1.0, 10, 0),
            FactorizationError);
    }
}

TEST_CASE("subsample refines pathwise") {
    const PricePath fine = simulate_gbm({1.0, 0.05}, 1.0, 1000, 9);
    const PricePath coarse = subsample(fine, 10);
    CHECK(coarse.steps() == 100);
    CHECK(coarse.prices.front() == fine.prices.front());
    CHECK(coarse.prices.back() == fine.prices.back());
    CHECK(coarse.prices[1] == fine.prices[10]);
    CHECK_THROWS_AS(subsample(fine, 7), DomainError);
}
