#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lvr/gbm.hpp"
#include "lvr/pool.hpp"

namespace lvr {

// Predictable holdings rule: the position held over (t_k, t_{k+1}] may use
// prices only up to index k.
struct BenchmarkStrategy {
    std::function<double(std::size_t k, std::span<const double> prices)> holdings;
    std::string label;
};

struct BenchmarkSeries {
    std::string label;
    std::vector<double> Rbar;   // benchmark strategy value
    std::vector<double> LVB;    // Rbar - V
    std::vector<double> Delta;  // LVB - LVR, the market-risk residual
    double qv_lvb = 0.0;        // sum of squared LVB increments
};

struct DecompositionReport {
    std::vector<double> times;
    std::vector<double> V;            // pool value V(P_k)
    std::vector<double> R;            // rebalancing strategy value
    std::vector<double> LVR;          // closed-form running cost
    std::vector<double> ARB;          // cumulative discrete arbitrage profit
    std::vector<double> market_risk;  // R - V_0
    std::vector<BenchmarkSeries> benchmarks;
};

struct ArbReplay {
    std::vector<double> event_profits;  // one per step, each >= 0 up to roundoff
    std::vector<double> cumulative;     // aligned with the grid, starts at 0
};

std::vector<double> pool_value_path(const Pool& pool, const PricePath& path);

// Left-endpoint Ito sum R_{k+1} = R_k + x*(P_k) (P_{k+1} - P_k), R_0 = V(P_0).
std::vector<double> rebalancing_value(const Pool& pool, const PricePath& path);

// Left-endpoint quadrature of the running cost integral with rate ell(P).
std::vector<double> lvr_closed_form(const Pool& pool, const PricePath& path,
                                    double sigma);

// One arbitrageur per grid step moves reserves to the new price's optimum
// and books  P_k (x_{k-1} - x_k) + (y_{k-1} - y_k).
ArbReplay discrete_arbitrage_replay(const Pool& pool, const PricePath& path);

BenchmarkSeries loss_versus_benchmark(const Pool& pool, const PricePath& path,
                                      const BenchmarkStrategy& benchmark,
                                      double sigma);

BenchmarkStrategy hodl_benchmark(const Pool& pool, double P0);
// Holds pool by reference; keep the pool alive while the strategy is in use.
BenchmarkStrategy rebalancing_benchmark(const Pool& pool);
BenchmarkStrategy constant_benchmark(double holdings, std::string label = "constant");

DecompositionReport decompose(const Pool& pool, const PricePath& path,
                              double sigma,
                              const std::vector<BenchmarkStrategy>& benchmarks);

struct ExpectedLvr {
    double mc_mean = 0.0;
    double mc_std_error = 0.0;
    double analytic = 0.0;       // closed form, NaN when unavailable
    double short_horizon = 0.0;  // ell(P0) * T
};

ExpectedLvr expected_lvr(const Pool& pool, double P0, double sigma, double T,
                         std::size_t n_paths, std::size_t steps,
                         std::uint64_t seed);

}  // namespace lvr
