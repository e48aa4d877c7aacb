#include <doctest.h>

#include <cmath>
#include <vector>

#include "lvr/pool.hpp"

using namespace lvr;

namespace {

// Independent oracles: central finite differences of the value function.
double fd_first(const Pool& pool, double P, double h) {
    return (pool_value(pool, P + h) - pool_value(pool, P - h)) / (2.0 * h);
}

double fd_second(const Pool& pool, double P, double h) {
    return (pool_value(pool, P + h) - 2.0 * pool_value(pool, P) +
            pool_value(pool, P - h)) /
           (h * h);
}

BondingFunction product_bonding(double L) {
    return BondingFunction{
        [](double x, double y) { return x * y; },
        [](double x, double y) { return std::pair{y, x}; },
        [](double, double) { return BondingFunction::Hessian{0.0, 1.0, 0.0}; },
        L};
}

BondingFunction sqrt_product_bonding(double L) {
    return BondingFunction{
        [](double x, double y) { return std::sqrt(x * y); },
        [](double x, double y) {
            const double s = std::sqrt(x * y);
            return std::pair{0.5 * s / x, 0.5 * s / y};
        },
        [](double x, double y) {
            const double s = std::sqrt(x * y);
            return BondingFunction::Hessian{-0.25 * s / (x * x), 0.25 / s,
                                            -0.25 * s / (y * y)};
        },
        L};
}

BondingFunction power_bonding(double theta, double L) {
    return BondingFunction{
        [theta](double x, double y) {
            return std::pow(x, theta) * std::pow(y, 1.0 - theta);
        },
        [theta](double x, double y) {
            const double f = std::pow(x, theta) * std::pow(y, 1.0 - theta);
            return std::pair{theta * f / x, (1.0 - theta) * f / y};
        },
        [theta](double x, double y) {
            const double f = std::pow(x, theta) * std::pow(y, 1.0 - theta);
            return BondingFunction::Hessian{
                theta * (theta - 1.0) * f / (x * x),
                theta * (1.0 - theta) * f / (x * y),
                (1.0 - theta) * (-theta) * f / (y * y)};
        },
        L};
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

}  // namespace

TEST_CASE("pool_value closed forms") {
    CHECK(pool_value(Pool::constant_product(1.0), 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(pool_value(Pool::range_order(1.0, 1.0, 4.0), 2.25) ==
          doctest::Approx(0.875).epsilon(1e-14));
    CHECK(pool_value(Pool::linear(2.0, 1.0), 3.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pool_value(Pool::geometric_mean(0.5, 1.0), 0.0) == 0.0);
    CHECK_THROWS_AS(pool_value(Pool::constant_product(1.0), -1.0), DomainError);
}

TEST_CASE("optimal_reserves closed forms") {
    const auto cp = optimal_reserves(Pool::constant_product(1.0), 4.0);
    CHECK(cp.x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cp.y == doctest::Approx(2.0).epsilon(1e-14));

    const auto ro = optimal_reserves(Pool::range_order(1.0, 1.0, 4.0), 2.25);
    CHECK(ro.x == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(ro.y == doctest::Approx(0.5).epsilon(1e-14));

    const auto boundary = optimal_reserves(Pool::range_order(1.0, 1.0, 4.0), 4.0);
    CHECK(boundary.x == 0.0);
    CHECK(boundary.y == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("marginal_value and convexity") {
    CHECK(marginal_value(Pool::constant_product(1.0), 4.0) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(marginal_value(Pool::geometric_mean(0.5, 1.0), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(marginal_value(Pool::generic(product_bonding(1.0)), 4.0) ==
          doctest::Approx(0.5).epsilon(1e-10));
    CHECK_THROWS_AS(marginal_value(Pool::linear(2.0, 1.0), 2.0), NonSmoothPoint);

    CHECK(convexity(Pool::constant_product(1.0), 1.0) ==
          doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(convexity(Pool::range_order(1.0, 1.0, 4.0), 2.25) ==
          doctest::Approx(-1.0 / (2.0 * std::pow(2.25, 1.5))).epsilon(1e-14));
    // Oracle: second central difference of V = 2 sqrt(P) at P=1, h=1e-4.
    const Pool gen = Pool::generic(sqrt_product_bonding(1.0));
    const double oracle = fd_second(Pool::constant_product(1.0), 1.0, 1e-4);
    CHECK(oracle == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(convexity(gen, 1.0) == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("instantaneous_lvr examples") {
    const double sigma = 0.05;
    CHECK(instantaneous_lvr(Pool::constant_product(1.0), 1.0, sigma) ==
          doctest::Approx(0.000625).epsilon(1e-14));
    CHECK(instantaneous_lvr(Pool::range_order(1.0, 1.0, 4.0), 2.25, sigma) ==
          doctest::Approx(0.0009375).epsilon(1e-14));
    CHECK(instantaneous_lvr(Pool::range_order(1.0, 1.0, 4.0), 2.25, 0.0) == 0.0);
    CHECK(instantaneous_lvr(Pool::linear(2.0, 1.0), 3.0, sigma) == 0.0);
    CHECK_THROWS_AS(instantaneous_lvr(Pool::linear(2.0, 1.0), 2.0, sigma),
                    NonSmoothPoint);
}

TEST_CASE("wgmm_theta_from_cost") {
    const double sigma = 0.05;
    CHECK(wgmm_theta_from_cost(sigma * sigma / 8.0, sigma) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(wgmm_theta_from_cost(0.0, sigma) == 0.0);
    CHECK(wgmm_theta_from_cost(0.08 * sigma * sigma, sigma) ==
          doctest::Approx(0.2).epsilon(1e-12));
    CHECK_THROWS_AS(wgmm_theta_from_cost(0.2 * sigma * sigma, sigma), DomainError);
    // Roundtrip: forward cost then inverse weight.
    for (double theta : {0.1, 0.2, 0.3, 0.4, 0.45, 0.5}) {
        const double c = 0.5 * sigma * sigma * theta * (1.0 - theta);
        CHECK(std::abs(wgmm_theta_from_cost(c, sigma) - theta) < 1e-12);
    }
}

TEST_CASE("envelope, concavity, and self-consistency on a price grid") {
    const std::vector<Pool> pools = {
        Pool::geometric_mean(0.3, 1.5), Pool::constant_product(1.0),
        Pool::range_order(1.0, 0.7, 3.3), Pool::generic(product_bonding(1.0))};
    for (const auto& pool : pools) {
        for (double P : log_grid(0.1, 10.0, 25)) {
            const double h = 1e-5 * P;
            const double vp = marginal_value(pool, P);
            CHECK(std::abs(fd_first(pool, P, h) - vp) <=
                  1e-6 * std::max(1.0, std::abs(vp)));
            CHECK(convexity(pool, P) <= 1e-12);
            const auto r = optimal_reserves(pool, P);
            const double v = pool_value(pool, P);
            CHECK(std::abs(P * r.x + r.y - v) <= 1e-10 * std::max(1.0, v));
            CHECK(r.x >= 0.0);
            CHECK(r.y >= 0.0);
        }
    }
}

TEST_CASE("generic pool matches geometric mean closed forms") {
    for (double theta : {0.2, 0.5, 0.8}) {
        const Pool closed = Pool::geometric_mean(theta, 1.0);
        const Pool gen = Pool::generic(power_bonding(theta, 1.0));
        for (double P : {0.25, 0.8, 1.0, 2.5, 7.0}) {
            CHECK(pool_value(gen, P) ==
                  doctest::Approx(pool_value(closed, P)).epsilon(1e-8));
            const auto rg = optimal_reserves(gen, P);
            const auto rc = optimal_reserves(closed, P);
            CHECK(rg.x == doctest::Approx(rc.x).epsilon(1e-8));
            CHECK(rg.y == doctest::Approx(rc.y).epsilon(1e-8));
            CHECK(convexity(gen, P) ==
                  doctest::Approx(convexity(closed, P)).epsilon(1e-8));
        }
    }
}

TEST_CASE("wgmm cost-to-value ratio is constant in price") {
    const double sigma = 0.07;
    for (double theta : {0.2, 0.5, 0.8}) {
        const Pool pool = Pool::geometric_mean(theta, 2.0);
        const double expected = 0.5 * sigma * sigma * theta * (1.0 - theta);
        for (double P : log_grid(0.1, 10.0, 20)) {
            const double ratio =
                instantaneous_lvr(pool, P, sigma) / pool_value(pool, P);
            CHECK(ratio == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("narrowing range orders concentrate the loss rate without bound") {
    const double P = 2.0, sigma = 0.05;
    double prev_ratio = 0.0;
    for (double width : {1.5, 1.0, 0.5, 0.25, 0.1, 0.02}) {
        const Pool pool = Pool::range_order(1.0, P - width, P + width);
        const double ratio = instantaneous_lvr(pool, P, sigma) / pool_value(pool, P);
        CHECK(ratio > prev_ratio);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio > 100.0 * sigma * sigma / 8.0);
}

TEST_CASE("range order clamps outside the band") {
    const Pool pool = Pool::range_order(1.0, 1.0, 4.0);
    CHECK(pool_value(pool, 0.5) == doctest::Approx(0.5 * 0.5).epsilon(1e-14));
    CHECK(pool_value(pool, 9.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(convexity(pool, 0.5) == 0.0);
    CHECK(convexity(pool, 9.0) == 0.0);
    CHECK(instantaneous_lvr(pool, 9.0, 0.05) == 0.0);
    const auto below = optimal_reserves(pool, 0.5);
    CHECK(below.y == 0.0);
    CHECK(below.x == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Pool::geometric_mean(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(Pool::geometric_mean(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(Pool::constant_product(-1.0), DomainError);
    CHECK_THROWS_AS(Pool::range_order(1.0, 4.0, 1.0), DomainError);
    CHECK_THROWS_AS(Pool::linear(0.0, 1.0), DomainError);
}
