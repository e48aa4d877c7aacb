#include "lvr/multidim.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "lvr/errors.hpp"
#include "lvr/rng.hpp"

namespace lvr {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<Eigen::Index>(v.size()));
}

void check_prices(const std::vector<double>& P, std::size_t n) {
    if (P.size() != n) throw DomainError("multidim: price dimension mismatch");
    for (double p : P)
        if (!(p > 0.0)) throw DomainError("multidim: prices must be positive");
}

// ---------------------------------------------------------------------------
// GenericN: damped Newton on the KKT system of
//   minimize P'x  s.t.  f(x) = L,  x > 0.
// Stationarity: P = lambda * grad f(x).
// ---------------------------------------------------------------------------

double kkt_residual(const BondingFunctionN& f, const Eigen::VectorXd& P,
                    const std::vector<double>& x, double lambda,
                    Eigen::VectorXd& F) {
    const std::vector<double> g = f.gradient(x);
    const Eigen::Index n = P.size();
    F.resize(n + 1);
    for (Eigen::Index i = 0; i < n; ++i)
        F(i) = P(i) - lambda * g[static_cast<std::size_t>(i)];
    F(n) = f.level - f.evaluate(x);
    return F.norm();
}

// Scales a positive seed point onto the level set along its ray.
std::vector<double> project_to_level(const BondingFunctionN& f,
                                     std::vector<double> x) {
    auto scaled = [&](double t) {
        std::vector<double> s(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) s[i] = t * x[i];
        return s;
    };
    double lo = 1.0, hi = 1.0;
    if (f.evaluate(x) < f.level) {
        int it = 0;
        while (f.evaluate(scaled(hi)) < f.level) {
            hi *= 2.0;
            if (++it > 200) throw NonConvergence("multidim: level not reachable");
        }
    } else {
        int it = 0;
        while (f.evaluate(scaled(lo)) > f.level) {
            lo *= 0.5;
            if (++it > 200) throw NonConvergence("multidim: level not reachable");
        }
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f.evaluate(scaled(mid)) < f.level)
            lo = mid;
        else
            hi = mid;
    }
    return scaled(0.5 * (lo + hi));
}

std::vector<double> solve_generic_n(const BondingFunctionN& f,
                                    const std::vector<double>& P_in) {
    if (!f.evaluate || !f.gradient || !f.hessian)
        throw DomainError("multidim: generic pool needs evaluate/gradient/hessian");
    const Eigen::VectorXd P = to_eigen(P_in);
    const Eigen::Index n = P.size();
    const double tol = 1e-10 * (P.norm() + std::abs(f.level) + 1.0);

    for (int attempt = 0; attempt < 5; ++attempt) {
        std::vector<double> x(static_cast<std::size_t>(n), 1.0);
        if (attempt > 0) {
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = 0.25 + 1.5 * rng::uniform(12345, attempt, i, 0);
        }
        try {
            x = project_to_level(f, x);
        } catch (const NonConvergence&) {
            continue;
        }
        std::vector<double> g = f.gradient(x);
        double lambda = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            lambda += P(i) / g[static_cast<std::size_t>(i)];
        lambda /= static_cast<double>(n);

        Eigen::VectorXd F;
        double res = kkt_residual(f, P, x, lambda, F);
        for (int iter = 0; iter < 100 && res > tol; ++iter) {
            g = f.gradient(x);
            const std::vector<double> h = f.hessian(x);
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j)
                    J(i, j) = -lambda *
                              h[static_cast<std::size_t>(i * n + j)];
                J(i, n) = -g[static_cast<std::size_t>(i)];
                J(n, i) = -g[static_cast<std::size_t>(i)];
            }
            const Eigen::VectorXd step = J.fullPivLu().solve(-F);
            if (!step.allFinite()) break;

            double alpha = 1.0;
            bool moved = false;
            for (int bt = 0; bt < 50; ++bt) {
                std::vector<double> x_new(x);
                bool positive = true;
                for (Eigen::Index i = 0; i < n; ++i) {
                    x_new[static_cast<std::size_t>(i)] += alpha * step(i);
                    if (x_new[static_cast<std::size_t>(i)] <= 0.0) positive = false;
                }
                const double lambda_new = lambda + alpha * step(n);
                if (positive && lambda_new > 0.0) {
                    Eigen::VectorXd F_new;
                    const double res_new =
                        kkt_residual(f, P, x_new, lambda_new, F_new);
                    if (res_new < res) {
                        x = std::move(x_new);
                        lambda = lambda_new;
                        F = std::move(F_new);
                        res = res_new;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!moved) break;
        }
        if (res <= tol) return x;
    }
    throw NonConvergence("multidim: KKT solver failed");
}

}  // namespace

MultiPool MultiPool::weighted_geometric_mean(std::vector<double> weights,
                                             double L) {
    if (weights.size() < 2)
        throw DomainError("wgmm: need at least two assets");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw DomainError("wgmm: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw DomainError("wgmm: weights must sum to 1");
    if (!(L > 0.0)) throw DomainError("wgmm: L must be positive");
    const std::size_t n = weights.size();
    return MultiPool(WeightedGeometricMeanPool{std::move(weights), L}, n);
}

MultiPool MultiPool::generic(BondingFunctionN f, std::size_t n_assets) {
    if (n_assets < 2) throw DomainError("multidim: need at least two assets");
    return MultiPool(GenericNPool{std::move(f)}, n_assets);
}

double pool_value_md(const MultiPool& pool, const std::vector<double>& P) {
    check_prices(P, pool.assets());
    if (const auto* w = std::get_if<WeightedGeometricMeanPool>(&pool.kind())) {
        double log_v = std::log(w->L);
        for (std::size_t i = 0; i < P.size(); ++i)
            log_v += w->weights[i] * std::log(P[i] / w->weights[i]);
        return std::exp(log_v);
    }
    const auto& gen = std::get<GenericNPool>(pool.kind());
    const std::vector<double> x = solve_generic_n(gen.f, P);
    return std::inner_product(P.begin(), P.end(), x.begin(), 0.0);
}

std::vector<double> optimal_reserves_md(const MultiPool& pool,
                                        const std::vector<double>& P) {
    check_prices(P, pool.assets());
    if (const auto* w = std::get_if<WeightedGeometricMeanPool>(&pool.kind())) {
        const double v = pool_value_md(pool, P);
        std::vector<double> x(P.size());
        for (std::size_t i = 0; i < P.size(); ++i) x[i] = w->weights[i] * v / P[i];
        return x;
    }
    return solve_generic_n(std::get<GenericNPool>(pool.kind()).f, P);
}

std::vector<double> value_hessian_md(const MultiPool& pool,
                                     const std::vector<double>& P) {
    check_prices(P, pool.assets());
    const std::size_t n = P.size();
    std::vector<double> H(n * n);
    if (const auto* w = std::get_if<WeightedGeometricMeanPool>(&pool.kind())) {
        const double v = pool_value_md(pool, P);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                H[i * n + j] = v * w->weights[i] * w->weights[j] / (P[i] * P[j]);
                if (i == j) H[i * n + j] -= v * w->weights[i] / (P[i] * P[i]);
            }
        }
        return H;
    }
    // Hessian of V = Jacobian of the reserve map; differentiate the solver
    // output by central differences, then symmetrize.
    for (std::size_t j = 0; j < n; ++j) {
        const double h = 1e-4 * P[j];
        std::vector<double> Pp(P), Pm(P);
        Pp[j] += h;
        Pm[j] -= h;
        const std::vector<double> xp = optimal_reserves_md(pool, Pp);
        const std::vector<double> xm = optimal_reserves_md(pool, Pm);
        for (std::size_t i = 0; i < n; ++i)
            H[i * n + j] = (xp[i] - xm[i]) / (2.0 * h);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (H[i * n + j] + H[j * n + i]);
            H[i * n + j] = H[j * n + i] = s;
        }
    return H;
}

double instantaneous_lvr_md(const MultiPool& pool, const std::vector<double>& P,
                            const std::vector<std::vector<double>>& Sigma) {
    check_prices(P, pool.assets());
    const std::size_t n = P.size();
    if (Sigma.size() != n) throw DomainError("multidim: Sigma dimension mismatch");
    const std::vector<double> H = value_hessian_md(pool, P);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (Sigma[i].size() != n)
            throw DomainError("multidim: Sigma must be square");
        for (std::size_t j = 0; j < n; ++j)
            acc += P[i] * Sigma[i][j] * P[j] * H[i * n + j];
    }
    return -0.5 * acc;
}

DecompositionReportMd decomposition_md(
    const MultiPool& pool, const MultiPricePath& path,
    const std::vector<std::vector<double>>& Sigma) {
    const std::size_t n_points = path.prices.size();
    DecompositionReportMd rep;
    rep.times = path.times;
    rep.V.resize(n_points);
    rep.R.resize(n_points);
    rep.LVR.resize(n_points);
    rep.ARB.resize(n_points);
    if (n_points == 0) return rep;

    std::vector<double> prev_x = optimal_reserves_md(pool, path.prices[0]);
    rep.V[0] = pool_value_md(pool, path.prices[0]);
    rep.R[0] = rep.V[0];
    rep.LVR[0] = 0.0;
    rep.ARB[0] = 0.0;
    for (std::size_t k = 0; k + 1 < n_points; ++k) {
        const std::vector<double>& P0 = path.prices[k];
        const std::vector<double>& P1 = path.prices[k + 1];
        const double dt = path.times[k + 1] - path.times[k];
        const std::vector<double> cur_x = optimal_reserves_md(pool, P1);

        double d_r = 0.0, profit = 0.0;
        for (std::size_t i = 0; i < P0.size(); ++i) {
            d_r += prev_x[i] * (P1[i] - P0[i]);
            profit += P1[i] * (prev_x[i] - cur_x[i]);
        }
        rep.V[k + 1] = pool_value_md(pool, P1);
        rep.R[k + 1] = rep.R[k] + d_r;
        rep.LVR[k + 1] = rep.LVR[k] + instantaneous_lvr_md(pool, P0, Sigma) * dt;
        rep.ARB[k + 1] = rep.ARB[k] + profit;
        prev_x = cur_x;
    }
    return rep;
}

}  // namespace lvr
