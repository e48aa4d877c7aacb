#include "lvr/decomposition.hpp"

#include <cmath>
#include <limits>

#include "lvr/rng.hpp"

namespace lvr {

std::vector<double> pool_value_path(const Pool& pool, const PricePath& path) {
    std::vector<double> v(path.prices.size());
    for (std::size_t k = 0; k < path.prices.size(); ++k)
        v[k] = pool_value(pool, path.prices[k]);
    return v;
}

std::vector<double> rebalancing_value(const Pool& pool, const PricePath& path) {
    const std::size_t n = path.prices.size();
    std::vector<double> r(n);
    r[0] = pool_value(pool, path.prices[0]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double x = marginal_value(pool, path.prices[k]);
        r[k + 1] = r[k] + x * (path.prices[k + 1] - path.prices[k]);
    }
    return r;
}

std::vector<double> lvr_closed_form(const Pool& pool, const PricePath& path,
                                    double sigma) {
    const std::size_t n = path.prices.size();
    std::vector<double> lvr(n);
    lvr[0] = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dt = path.times[k + 1] - path.times[k];
        lvr[k + 1] = lvr[k] + instantaneous_lvr(pool, path.prices[k], sigma) * dt;
    }
    return lvr;
}

ArbReplay discrete_arbitrage_replay(const Pool& pool, const PricePath& path) {
    const std::size_t n = path.prices.size();
    ArbReplay replay;
    replay.event_profits.resize(n > 0 ? n - 1 : 0);
    replay.cumulative.resize(n);
    if (n == 0) return replay;
    replay.cumulative[0] = 0.0;
    ReservePoint prev = optimal_reserves(pool, path.prices[0]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double P = path.prices[k + 1];
        const ReservePoint cur = optimal_reserves(pool, P);
        const double profit = P * (prev.x - cur.x) + (prev.y - cur.y);
        replay.event_profits[k] = profit;
        replay.cumulative[k + 1] = replay.cumulative[k] + profit;
        prev = cur;
    }
    return replay;
}

BenchmarkSeries loss_versus_benchmark(const Pool& pool, const PricePath& path,
                                      const BenchmarkStrategy& benchmark,
                                      double sigma) {
    const std::size_t n = path.prices.size();
    const std::vector<double> v = pool_value_path(pool, path);
    const std::vector<double> lvr = lvr_closed_form(pool, path, sigma);

    BenchmarkSeries out;
    out.label = benchmark.label;
    out.Rbar.resize(n);
    out.LVB.resize(n);
    out.Delta.resize(n);
    out.Rbar[0] = v[0];
    out.LVB[0] = 0.0;
    out.Delta[0] = 0.0;
    const std::span<const double> prices(path.prices);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double xbar = benchmark.holdings(k, prices.first(k + 1));
        out.Rbar[k + 1] = out.Rbar[k] + xbar * (prices[k + 1] - prices[k]);
        out.LVB[k + 1] = out.Rbar[k + 1] - v[k + 1];
        out.Delta[k + 1] = out.LVB[k + 1] - lvr[k + 1];
        const double inc = out.LVB[k + 1] - out.LVB[k];
        out.qv_lvb += inc * inc;
    }
    return out;
}

BenchmarkStrategy hodl_benchmark(const Pool& pool, double P0) {
    const double x0 = optimal_reserves(pool, P0).x;
    return {[x0](std::size_t, std::span<const double>) { return x0; }, "HODL"};
}

BenchmarkStrategy rebalancing_benchmark(const Pool& pool) {
    return {[&pool](std::size_t k, std::span<const double> prices) {
                return marginal_value(pool, prices[k]);
            },
            "rebalancing"};
}

BenchmarkStrategy constant_benchmark(double holdings, std::string label) {
    return {[holdings](std::size_t, std::span<const double>) { return holdings; },
            std::move(label)};
}

DecompositionReport decompose(const Pool& pool, const PricePath& path,
                              double sigma,
                              const std::vector<BenchmarkStrategy>& benchmarks) {
    DecompositionReport rep;
    rep.times = path.times;
    rep.V = pool_value_path(pool, path);
    rep.R = rebalancing_value(pool, path);
    rep.LVR = lvr_closed_form(pool, path, sigma);
    rep.ARB = discrete_arbitrage_replay(pool, path).cumulative;
    rep.market_risk.resize(rep.R.size());
    for (std::size_t k = 0; k < rep.R.size(); ++k)
        rep.market_risk[k] = rep.R[k] - rep.V[0];
    for (const auto& b : benchmarks)
        rep.benchmarks.push_back(loss_versus_benchmark(pool, path, b, sigma));
    return rep;
}

ExpectedLvr expected_lvr(const Pool& pool, double P0, double sigma, double T,
                         std::size_t n_paths, std::size_t steps,
                         std::uint64_t seed) {
    if (n_paths == 0) throw DomainError("expected_lvr: need at least one path");
    ExpectedLvr out;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const PricePath path = simulate_gbm({P0, sigma}, T, steps, seed, p);
        const double terminal = lvr_closed_form(pool, path, sigma).back();
        sum += terminal;
        sum_sq += terminal * terminal;
    }
    const double n = static_cast<double>(n_paths);
    out.mc_mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - out.mc_mean * out.mc_mean);
    out.mc_std_error = n_paths > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    out.short_horizon = instantaneous_lvr(pool, P0, sigma) * T;

    // E[sqrt(P_t)] = sqrt(P0) exp(-sigma^2 t / 8) under driftless GBM, so the
    // constant-product expected cost integrates to V(P0)(1 - exp(-sigma^2 T/8)).
    if (std::holds_alternative<ConstantProductPool>(pool.kind())) {
        out.analytic =
            pool_value(pool, P0) * (1.0 - std::exp(-sigma * sigma * T / 8.0));
    } else {
        out.analytic = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace lvr
