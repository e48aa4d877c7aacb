#include "lvr/fees.hpp"

#include <cmath>

#include "lvr/decomposition.hpp"

namespace lvr {

namespace {

double volume_rate(const VolumeProcess& volume, const Pool& pool, double price) {
    if (const auto* c = std::get_if<ConstantRateVolume>(&volume)) return c->rate;
    const auto& prop = std::get<ProportionalVolume>(volume);
    return prop.fraction * pool_value(pool, price);
}

void check_fee(const FeeParams& fee) {
    if (fee.gamma < 0.0 || fee.gamma >= 1.0)
        throw DomainError("fees: gamma must be in [0, 1)");
}

}  // namespace

std::vector<double> accrue_fees(const VolumeProcess& volume, const FeeParams& fee,
                                const PricePath& path, const Pool& pool) {
    check_fee(fee);
    const std::size_t n = path.prices.size();
    std::vector<double> fees(n);
    if (n == 0) return fees;
    fees[0] = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dt = path.times[k + 1] - path.times[k];
        fees[k + 1] =
            fees[k] + fee.gamma * volume_rate(volume, pool, path.prices[k]) * dt;
    }
    return fees;
}

double breakeven_volume(const Pool& pool, double P, double sigma,
                        const FeeParams& fee) {
    check_fee(fee);
    if (fee.gamma == 0.0)
        throw DomainError("breakeven_volume: gamma must be positive");
    const double value = pool_value(pool, P);
    if (value == 0.0)
        throw DomainError("breakeven_volume: pool value vanishes at this price");
    return instantaneous_lvr(pool, P, sigma) / value / fee.gamma;
}

FairPricingReport fair_pricing_report(const Pool& pool, double P0, double sigma,
                                      double T, const VolumeProcess& volume,
                                      const FeeParams& fee, std::size_t n_paths,
                                      std::size_t steps, std::uint64_t seed) {
    check_fee(fee);
    if (n_paths == 0) throw DomainError("fair_pricing_report: need paths");

    double sum_f = 0.0, sum_l = 0.0, sum_gap = 0.0, sum_gap_sq = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const PricePath path = simulate_gbm({P0, sigma}, T, steps, seed, p);
        const double f_T = accrue_fees(volume, fee, path, pool).back();
        const double lvr_T = lvr_closed_form(pool, path, sigma).back();
        sum_f += f_T;
        sum_l += lvr_T;
        const double g = f_T - lvr_T;
        sum_gap += g;
        sum_gap_sq += g * g;
    }
    const double n = static_cast<double>(n_paths);
    FairPricingReport rep;
    rep.expected_fees = sum_f / n;
    rep.expected_lvr = sum_l / n;
    rep.gap = rep.expected_fees - rep.expected_lvr;
    const double mean_gap = sum_gap / n;
    const double var = std::max(0.0, sum_gap_sq / n - mean_gap * mean_gap);
    rep.gap_std_error = n_paths > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    rep.initial_value = pool_value(pool, P0);
    rep.locked_value = rep.initial_value - rep.expected_lvr + rep.expected_fees;
    rep.n_paths = n_paths;
    rep.seed = seed;
    // Roundoff floor: a pathwise-exact offset has SE ~ 0 but gap ~ ulp-noise.
    const double floor =
        1e-12 * std::max(rep.expected_fees, rep.expected_lvr);
    if (std::abs(rep.gap) <= 3.0 * rep.gap_std_error + floor)
        rep.verdict = "fair";
    else if (rep.gap < 0.0)
        rep.verdict = "underpriced";
    else
        rep.verdict = "overpriced";
    return rep;
}

TrailingComparison trailing_fee_vs_lvr(const Pool& pool, const PricePath& path,
                                       double sigma, const VolumeProcess& volume,
                                       const FeeParams& fee, double window) {
    if (!(window > 0.0))
        throw DomainError("trailing_fee_vs_lvr: window must be positive");
    const std::vector<double> fees = accrue_fees(volume, fee, path, pool);
    const std::vector<double> lvr = lvr_closed_form(pool, path, sigma);

    TrailingComparison out;
    out.times = path.times;
    out.trailing_fees.resize(fees.size());
    out.trailing_lvr.resize(lvr.size());
    std::size_t lo = 0;
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        while (path.times[k] - path.times[lo] > window) ++lo;
        out.trailing_fees[k] = fees[k] - fees[lo];
        out.trailing_lvr[k] = lvr[k] - lvr[lo];
    }
    return out;
}

}  // namespace lvr
