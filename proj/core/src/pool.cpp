#include "lvr/pool.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lvr {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

// Powers in log space; theta near 0 or 1 is permitted but delicate.
double pow_log(double base, double expo) {
    if (expo == 0.0) return 1.0;
    return std::exp(expo * std::log(base));
}

// ---------------------------------------------------------------------------
// Generic 2-d pool: the value program is solved by nested bisection.
// The level curve y(x) is strictly decreasing, so for fixed x the equation
// f(x, y) = L has at most one root, and the stationarity residual
//   g(x) = P * df/dy - df/dx       (evaluated on the curve)
// changes sign exactly once.
// ---------------------------------------------------------------------------

constexpr int kMaxIter = 200;
constexpr double kStatTol = 1e-12;

// Solves f(x, y) = L for y at fixed x.  Returns NaN when the level is not
// reachable for this x (used as a bracket-probe signal).
double level_y(const BondingFunction& f, double x) {
    const double L = f.level;
    double lo = 0.0;
    double flo = f.evaluate(x, lo);
    if (!std::isfinite(flo)) {
        lo = 1e-300;
        flo = f.evaluate(x, lo);
    }
    if (flo > L) return std::numeric_limits<double>::quiet_NaN();
    double hi = 1.0;
    int it = 0;
    while (f.evaluate(x, hi) < L) {
        hi *= 2.0;
        if (++it > kMaxIter) return std::numeric_limits<double>::quiet_NaN();
    }
    for (int i = 0; i < kMaxIter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f.evaluate(x, mid) < L)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct CurvePoint {
    double x, y, gx, gy;  // point on the curve and gradient of f there
};

CurvePoint curve_point(const BondingFunction& f, double x) {
    const double y = level_y(f, x);
    if (!std::isfinite(y))
        throw NonConvergence("generic pool: level set unreachable at x=" +
                             std::to_string(x));
    const auto [gx, gy] = f.gradient(x, y);
    if (!(gx > 0.0) || !(gy > 0.0))
        throw NonConvergence("generic pool: bonding gradient not positive");
    return {x, y, gx, gy};
}

// Stationarity residual of the value program along the curve.
double stationarity(const BondingFunction& f, double P, double x) {
    const CurvePoint c = curve_point(f, x);
    return P * c.gy - c.gx;
}

ReservePoint solve_generic(const BondingFunction& f, double P) {
    // Bracket the sign change of the residual by geometric expansion.
    double x_lo = 1.0, x_hi = 1.0;
    double g_mid = stationarity(f, P, 1.0);
    if (g_mid < 0.0) {
        int it = 0;
        do {
            x_lo = x_hi;
            x_hi *= 2.0;
            if (++it > kMaxIter)
                throw NonConvergence("generic pool: no upper bracket");
        } while (stationarity(f, P, x_hi) < 0.0);
    } else {
        int it = 0;
        do {
            x_hi = x_lo;
            x_lo *= 0.5;
            if (++it > kMaxIter)
                throw NonConvergence("generic pool: no lower bracket");
        } while (stationarity(f, P, x_lo) > 0.0);
    }
    double best_x = 0.5 * (x_lo + x_hi);
    for (int i = 0; i < kMaxIter; ++i) {
        best_x = 0.5 * (x_lo + x_hi);
        const double g = stationarity(f, P, best_x);
        const CurvePoint c = curve_point(f, best_x);
        const double scale = std::abs(P * c.gy) + std::abs(c.gx);
        if (std::abs(g) <= kStatTol * scale) break;
        if (g < 0.0)
            x_lo = best_x;
        else
            x_hi = best_x;
    }
    const CurvePoint c = curve_point(f, best_x);
    return {c.x, c.y};
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

Pool Pool::geometric_mean(double theta, double L) {
    require(theta > 0.0 && theta < 1.0, "geometric mean: theta must be in (0,1)");
    require(L > 0.0, "geometric mean: L must be positive");
    return Pool(GeometricMeanPool{theta, L});
}

Pool Pool::constant_product(double L) {
    require(L > 0.0, "constant product: L must be positive");
    return Pool(ConstantProductPool{L});
}

Pool Pool::range_order(double L, double Pa, double Pb) {
    require(L > 0.0, "range order: L must be positive");
    require(Pa > 0.0 && Pa < Pb, "range order: need 0 < Pa < Pb");
    return Pool(RangeOrderPool{L, Pa, Pb});
}

Pool Pool::linear(double K, double L) {
    require(K > 0.0, "linear: K must be positive");
    require(L > 0.0, "linear: L must be positive");
    return Pool(LinearPool{K, L});
}

Pool Pool::generic(BondingFunction f) {
    require(static_cast<bool>(f.evaluate), "generic: evaluate missing");
    require(static_cast<bool>(f.gradient), "generic: gradient missing");
    return Pool(GenericPool{std::move(f)});
}

std::string Pool::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GeometricMeanPool>)
                os << "geometric-mean(theta=" << p.theta << ",L=" << p.L << ")";
            else if constexpr (std::is_same_v<T, ConstantProductPool>)
                os << "constant-product(L=" << p.L << ")";
            else if constexpr (std::is_same_v<T, RangeOrderPool>)
                os << "range(L=" << p.L << ",Pa=" << p.Pa << ",Pb=" << p.Pb << ")";
            else if constexpr (std::is_same_v<T, LinearPool>)
                os << "linear(K=" << p.K << ",L=" << p.L << ")";
            else
                os << "generic(level=" << p.f.level << ")";
        },
        kind_);
    return os.str();
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

double pool_value(const Pool& pool, double P) {
    require(P >= 0.0, "pool_value: price must be non-negative");
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GeometricMeanPool>) {
                if (P == 0.0) return 0.0;
                const double th = p.theta;
                return p.L * pow_log(P, th) / (pow_log(th, th) * pow_log(1.0 - th, 1.0 - th));
            } else if constexpr (std::is_same_v<T, ConstantProductPool>) {
                return 2.0 * p.L * std::sqrt(P);
            } else if constexpr (std::is_same_v<T, RangeOrderPool>) {
                if (P <= p.Pa)
                    return P * p.L * (1.0 / std::sqrt(p.Pa) - 1.0 / std::sqrt(p.Pb));
                if (P >= p.Pb)
                    return p.L * (std::sqrt(p.Pb) - std::sqrt(p.Pa));
                return p.L * (2.0 * std::sqrt(P) - P / std::sqrt(p.Pb) - std::sqrt(p.Pa));
            } else if constexpr (std::is_same_v<T, LinearPool>) {
                return p.L * std::min(P / p.K, 1.0);
            } else {
                require(P > 0.0, "pool_value: generic pool needs P > 0");
                const ReservePoint r = solve_generic(p.f, P);
                return P * r.x + r.y;
            }
        },
        pool.kind());
}

ReservePoint optimal_reserves(const Pool& pool, double P) {
    require(P > 0.0, "optimal_reserves: price must be positive");
    return std::visit(
        [&](const auto& p) -> ReservePoint {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GeometricMeanPool>) {
                const double th = p.theta;
                const double x = p.L * pow_log(th / (1.0 - th) / P, 1.0 - th);
                const double y = p.L * pow_log((1.0 - th) / th * P, th);
                return {x, y};
            } else if constexpr (std::is_same_v<T, ConstantProductPool>) {
                return {p.L / std::sqrt(P), p.L * std::sqrt(P)};
            } else if constexpr (std::is_same_v<T, RangeOrderPool>) {
                const double sa = std::sqrt(p.Pa), sb = std::sqrt(p.Pb);
                if (P <= p.Pa) return {p.L * (1.0 / sa - 1.0 / sb), 0.0};
                if (P >= p.Pb) return {0.0, p.L * (sb - sa)};
                return {p.L * (1.0 / std::sqrt(P) - 1.0 / sb),
                        p.L * (std::sqrt(P) - sa)};
            } else if constexpr (std::is_same_v<T, LinearPool>) {
                if (P < p.K) return {p.L / p.K, 0.0};
                return {0.0, p.L};
            } else {
                return solve_generic(p.f, P);
            }
        },
        pool.kind());
}

double marginal_value(const Pool& pool, double P) {
    require(P > 0.0, "marginal_value: price must be positive");
    if (const auto* lin = std::get_if<LinearPool>(&pool.kind())) {
        if (P == lin->K)
            throw NonSmoothPoint("marginal_value: linear pool kink at P=K");
    }
    return optimal_reserves(pool, P).x;
}

double convexity(const Pool& pool, double P) {
    require(P > 0.0, "convexity: price must be positive");
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GeometricMeanPool>) {
                const double th = p.theta;
                return th * (th - 1.0) * pool_value(pool, P) / (P * P);
            } else if constexpr (std::is_same_v<T, ConstantProductPool>) {
                return -p.L / (2.0 * P * std::sqrt(P));
            } else if constexpr (std::is_same_v<T, RangeOrderPool>) {
                if (P <= p.Pa || P >= p.Pb) return 0.0;
                return -p.L / (2.0 * P * std::sqrt(P));
            } else if constexpr (std::is_same_v<T, LinearPool>) {
                if (P == p.K)
                    throw NonSmoothPoint("convexity: linear pool kink at P=K");
                return 0.0;
            } else {
                if (!p.f.hessian)
                    throw NonConvergence("convexity: generic pool has no hessian");
                const ReservePoint r = solve_generic(p.f, P);
                const auto h = p.f.hessian(r.x, r.y);
                const auto [gx, gy] = p.f.gradient(r.x, r.y);
                const double denom = h.fxx - 2.0 * P * h.fxy + P * P * h.fyy;
                if (denom == 0.0)
                    throw NonConvergence("convexity: degenerate bonding hessian");
                return gy / denom;
            }
        },
        pool.kind());
}

double instantaneous_lvr(const Pool& pool, double P, double sigma) {
    require(P > 0.0, "instantaneous_lvr: price must be positive");
    require(sigma >= 0.0, "instantaneous_lvr: sigma must be non-negative");
    if (sigma == 0.0) {
        if (const auto* lin = std::get_if<LinearPool>(&pool.kind()); lin && P == lin->K)
            throw NonSmoothPoint("instantaneous_lvr: linear pool kink at P=K");
        return 0.0;
    }
    return -0.5 * sigma * sigma * P * P * convexity(pool, P);
}

double wgmm_theta_from_cost(double c, double sigma) {
    require(c >= 0.0, "wgmm_theta_from_cost: cost must be non-negative");
    if (c == 0.0) return 0.0;
    require(sigma > 0.0, "wgmm_theta_from_cost: positive cost needs sigma > 0");
    double ratio = 8.0 * c / (sigma * sigma);
    if (ratio > 1.0 + 1e-12)
        throw DomainError("wgmm_theta_from_cost: 8c > sigma^2, no concave solution");
    ratio = std::min(ratio, 1.0);
    return 0.5 * (1.0 - std::sqrt(1.0 - ratio));
}

}  // namespace lvr
