#include <benchmark/benchmark.h>

#include <cmath>

#include "lvr/decomposition.hpp"
#include "lvr/gbm.hpp"
#include "lvr/pool.hpp"

namespace {

void BM_PoolValueClosedForm(benchmark::State& state) {
    const lvr::Pool pool = lvr::Pool::range_order(1.0, 0.5, 4.0);
    double p = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lvr::pool_value(pool, p));
        p = p < 4.0 ? p + 1e-3 : 0.5;
    }
}
BENCHMARK(BM_PoolValueClosedForm);

void BM_GenericPoolSolve(benchmark::State& state) {
    lvr::BondingFunction f{
        [](double x, double y) { return x * y; },
        [](double x, double y) { return std::pair{y, x}; },
        [](double, double) { return lvr::BondingFunction::Hessian{0.0, 1.0, 0.0}; },
        1.0};
    const lvr::Pool pool = lvr::Pool::generic(std::move(f));
    double p = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lvr::pool_value(pool, p));
        p = p < 4.0 ? p + 0.1 : 0.5;
    }
}
BENCHMARK(BM_GenericPoolSolve);

void BM_SimulateGbm(benchmark::State& state) {
    const auto steps = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            lvr::simulate_gbm({1.0, 0.05}, 10.0, steps, seed++));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(steps));
}
BENCHMARK(BM_SimulateGbm)->Arg(1000)->Arg(100000);

void BM_ArbitrageReplay(benchmark::State& state) {
    const auto steps = static_cast<std::size_t>(state.range(0));
    const lvr::Pool pool = lvr::Pool::constant_product(1.0);
    const lvr::PricePath path = lvr::simulate_gbm({1.0, 0.05}, 10.0, steps, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lvr::discrete_arbitrage_replay(pool, path));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(steps));
}
BENCHMARK(BM_ArbitrageReplay)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
