#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lvr/errors.hpp"

namespace lvr {

struct GbmParams {
    double P0;     // initial price, > 0
    double sigma;  // volatility per sqrt(time unit), >= 0; drift is zero
};

struct PricePath {
    std::vector<double> times;   // t_0 = 0 < ... < t_N = T
    std::vector<double> prices;  // aligned, all positive
    std::uint64_t seed = 0;
    std::string scheme = "exact-lognormal";

    std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
    double horizon() const { return times.empty() ? 0.0 : times.back(); }
};

struct MultiGbmParams {
    std::vector<double> P0;                  // n initial prices
    std::vector<std::vector<double>> Sigma;  // n x n return covariance per time
};

struct MultiPricePath {
    std::vector<double> times;
    std::vector<std::vector<double>> prices;  // prices[k] has n entries
    std::uint64_t seed = 0;
    std::string scheme = "exact-lognormal";

    std::size_t assets() const { return prices.empty() ? 0 : prices.front().size(); }
    std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
};

// Exact lognormal stepping on a uniform grid:
//   P_{k+1} = P_k * exp(-sigma^2 dt / 2 + sigma sqrt(dt) Z_k),
// with Z_k from the counter-based generator keyed by (seed, path_index, k).
PricePath simulate_gbm(const GbmParams& params, double T, std::size_t steps,
                       std::uint64_t seed, std::uint64_t path_index = 0);

// Multi-asset version using a symmetric square-root factor of Sigma.
MultiPricePath simulate_multi_gbm(const MultiGbmParams& params, double T,
                                  std::size_t steps, std::uint64_t seed,
                                  std::uint64_t path_index = 0);

// Sum of squared price increments along the path.
double realized_quadratic_variation(const PricePath& path);

// Every m-th grid point of a fine path; pathwise refinement for
// convergence studies (exact stepping makes the subsample a valid path).
PricePath subsample(const PricePath& fine, std::size_t stride);

}  // namespace lvr
