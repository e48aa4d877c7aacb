#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lvr/gbm.hpp"
#include "lvr/pool.hpp"

namespace lvr {

struct FeeParams {
    double gamma = 0.0;  // fraction of numeraire volume, in [0, 1)
};

// Noise-trader volume per unit time.  Volume is exogenous: it generates
// fees but never moves the pool reserves.
struct ConstantRateVolume {
    double rate;  // numeraire volume per unit time
};
struct ProportionalVolume {
    double fraction;  // fraction of pool value per unit time
};
using VolumeProcess = std::variant<ConstantRateVolume, ProportionalVolume>;

// Cumulative fee series F_k = sum_{j<k} gamma * volume_rate_j * dt.
std::vector<double> accrue_fees(const VolumeProcess& volume, const FeeParams& fee,
                                const PricePath& path, const Pool& pool);

// Volume, as a fraction of pool value per unit time, at which instantaneous
// fees exactly offset the instantaneous loss rate: (ell(P)/V(P)) / gamma.
double breakeven_volume(const Pool& pool, double P, double sigma,
                        const FeeParams& fee);

struct FairPricingReport {
    double expected_fees = 0.0;
    double expected_lvr = 0.0;
    double gap = 0.0;            // expected_fees - expected_lvr
    double gap_std_error = 0.0;  // SE of the per-path fee-minus-cost gap
    double locked_value = 0.0;   // V(P0) - E[LVR] + E[F]
    double initial_value = 0.0;  // V(P0)
    std::string verdict;         // "fair" | "underpriced" | "overpriced"
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

FairPricingReport fair_pricing_report(const Pool& pool, double P0, double sigma,
                                      double T, const VolumeProcess& volume,
                                      const FeeParams& fee, std::size_t n_paths,
                                      std::size_t steps, std::uint64_t seed);

// Trailing-window comparison of realized fee income against realized
// closed-form cost, for dynamic-fee style reporting.
struct TrailingComparison {
    std::vector<double> times;
    std::vector<double> trailing_fees;
    std::vector<double> trailing_lvr;
};

TrailingComparison trailing_fee_vs_lvr(const Pool& pool, const PricePath& path,
                                       double sigma, const VolumeProcess& volume,
                                       const FeeParams& fee, double window);

}  // namespace lvr
