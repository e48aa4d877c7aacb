#pragma once

#include <functional>
#include <string>
#include <variant>

#include "lvr/errors.hpp"

namespace lvr {

// User-supplied bonding function f(x, y) with first and second derivatives.
// The level set {f = level} restricted to the positive orthant must be a
// strictly decreasing curve (f strictly increasing in each argument).
struct BondingFunction {
    std::function<double(double, double)> evaluate;
    // returns (df/dx, df/dy)
    std::function<std::pair<double, double>(double, double)> gradient;
    struct Hessian {
        double fxx;
        double fxy;
        double fyy;
    };
    std::function<Hessian(double, double)> hessian;
    double level = 1.0;
};

struct ReservePoint {
    double x = 0.0;  // risky asset
    double y = 0.0;  // numeraire
};

// Closed-form pool families plus the generic bonding-function pool.
struct GeometricMeanPool {
    double theta;  // weight on the risky asset, in (0,1)
    double L;
};

struct ConstantProductPool {
    double L;
};

struct RangeOrderPool {
    double L;
    double Pa;  // lower price bound
    double Pb;  // upper price bound
};

struct LinearPool {
    double K;  // limit price
    double L;
};

struct GenericPool {
    BondingFunction f;
};

class Pool {
  public:
    using Kind = std::variant<GeometricMeanPool, ConstantProductPool,
                              RangeOrderPool, LinearPool, GenericPool>;

    static Pool geometric_mean(double theta, double L);
    static Pool constant_product(double L);
    static Pool range_order(double L, double Pa, double Pb);
    static Pool linear(double K, double L);
    static Pool generic(BondingFunction f);

    const Kind& kind() const { return kind_; }

    // Linear pools have a kink at P = K; everything else is smooth.
    bool smooth() const { return !std::holds_alternative<LinearPool>(kind_); }

    std::string describe() const;

  private:
    explicit Pool(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

// V(P): minimum reserve value P*x + y over the bonding curve.
double pool_value(const Pool& pool, double P);

// Minimizer (x*(P), y*(P)) of the pool value program.
ReservePoint optimal_reserves(const Pool& pool, double P);

// V'(P), which equals x*(P) by the envelope identity.
double marginal_value(const Pool& pool, double P);

// V''(P) <= 0.  Generic pools use the bonding-function Hessian formula
//   V'' = df/dy / (fxx - 2 P fxy + P^2 fyy)   at (x*(P), y*(P)).
double convexity(const Pool& pool, double P);

// Instantaneous loss rate ell(P) = -sigma^2 P^2 V''(P) / 2 >= 0.
double instantaneous_lvr(const Pool& pool, double P, double sigma);

// Inverts the constant cost-to-value ratio c = sigma^2 theta (1-theta) / 2
// back to the weight theta in (0, 1/2].  Requires 8c <= sigma^2.
double wgmm_theta_from_cost(double c, double sigma);

}  // namespace lvr
