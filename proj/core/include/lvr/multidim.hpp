#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "lvr/gbm.hpp"

namespace lvr {

// Bonding function on n reserves with gradient and Hessian callbacks.
struct BondingFunctionN {
    std::function<double(const std::vector<double>&)> evaluate;
    std::function<std::vector<double>(const std::vector<double>&)> gradient;
    // Row-major n x n Hessian.
    std::function<std::vector<double>(const std::vector<double>&)> hessian;
    double level = 1.0;
};

struct WeightedGeometricMeanPool {
    std::vector<double> weights;  // positive, summing to 1
    double L;
};

struct GenericNPool {
    BondingFunctionN f;
};

class MultiPool {
  public:
    using Kind = std::variant<WeightedGeometricMeanPool, GenericNPool>;

    static MultiPool weighted_geometric_mean(std::vector<double> weights, double L);
    static MultiPool generic(BondingFunctionN f, std::size_t n_assets);

    const Kind& kind() const { return kind_; }
    std::size_t assets() const { return n_; }

  private:
    MultiPool(Kind k, std::size_t n) : kind_(std::move(k)), n_(n) {}
    Kind kind_;
    std::size_t n_;
};

double pool_value_md(const MultiPool& pool, const std::vector<double>& P);

std::vector<double> optimal_reserves_md(const MultiPool& pool,
                                        const std::vector<double>& P);

// Row-major Hessian of the value function; closed form for the weighted
// geometric mean, central differences of the reserve map otherwise.
std::vector<double> value_hessian_md(const MultiPool& pool,
                                     const std::vector<double>& P);

// Trace formula: -tr[diag(P) Sigma diag(P) Hess V] / 2 >= 0.
double instantaneous_lvr_md(const MultiPool& pool, const std::vector<double>& P,
                            const std::vector<std::vector<double>>& Sigma);

struct DecompositionReportMd {
    std::vector<double> times;
    std::vector<double> V;
    std::vector<double> R;
    std::vector<double> LVR;
    std::vector<double> ARB;
};

DecompositionReportMd decomposition_md(const MultiPool& pool,
                                       const MultiPricePath& path,
                                       const std::vector<std::vector<double>>& Sigma);

}  // namespace lvr
