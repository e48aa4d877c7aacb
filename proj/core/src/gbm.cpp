#include "lvr/gbm.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "lvr/rng.hpp"

namespace lvr {

namespace rng {

double normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    const double u1 = uniform(seed, path, step, 0);
    const double u2 = uniform(seed, path, step, 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rng

namespace {

void check_horizon(double T, std::size_t steps) {
    if (!(T > 0.0)) throw DomainError("simulate: horizon must be positive");
    if (steps == 0) throw DomainError("simulate: need at least one step");
}

// Symmetric PSD square root; tiny negative eigenvalues are clamped to zero.
Eigen::MatrixXd sigma_sqrt(const std::vector<std::vector<double>>& Sigma) {
    const std::size_t n = Sigma.size();
    Eigen::MatrixXd S(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (Sigma[i].size() != n)
            throw DomainError("multi gbm: Sigma must be square");
        for (std::size_t j = 0; j < n; ++j) S(i, j) = Sigma[i][j];
    }
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw DomainError("multi gbm: Sigma must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success)
        throw FactorizationError("multi gbm: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-12 * scale)
            throw FactorizationError("multi gbm: Sigma is not PSD");
        ev(i) = std::max(ev(i), 0.0);
    }
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace

PricePath simulate_gbm(const GbmParams& params, double T, std::size_t steps,
                       std::uint64_t seed, std::uint64_t path_index) {
    if (!(params.P0 > 0.0)) throw DomainError("simulate_gbm: P0 must be positive");
    if (params.sigma < 0.0) throw DomainError("simulate_gbm: sigma must be >= 0");
    check_horizon(T, steps);

    const double dt = T / static_cast<double>(steps);
    const double drift = -0.5 * params.sigma * params.sigma * dt;
    const double vol = params.sigma * std::sqrt(dt);

    PricePath path;
    path.seed = seed;
    path.times.resize(steps + 1);
    path.prices.resize(steps + 1);
    path.prices[0] = params.P0;
    double log_p = std::log(params.P0);
    for (std::size_t k = 0; k < steps; ++k) {
        path.times[k] = dt * static_cast<double>(k);
        log_p += drift + vol * rng::normal(seed, path_index, k);
        path.prices[k + 1] = std::exp(log_p);
    }
    path.times[steps] = T;
    return path;
}

MultiPricePath simulate_multi_gbm(const MultiGbmParams& params, double T,
                                  std::size_t steps, std::uint64_t seed,
                                  std::uint64_t path_index) {
    const std::size_t n = params.P0.size();
    if (n == 0) throw DomainError("multi gbm: need at least one asset");
    for (double p : params.P0)
        if (!(p > 0.0)) throw DomainError("multi gbm: P0 must be positive");
    if (params.Sigma.size() != n)
        throw DomainError("multi gbm: Sigma dimension mismatch");
    check_horizon(T, steps);

    const Eigen::MatrixXd A = sigma_sqrt(params.Sigma);
    const double dt = T / static_cast<double>(steps);
    const double sq_dt = std::sqrt(dt);

    MultiPricePath path;
    path.seed = seed;
    path.times.resize(steps + 1);
    path.prices.assign(steps + 1, std::vector<double>(n));
    std::vector<double> log_p(n);
    for (std::size_t i = 0; i < n; ++i) {
        path.prices[0][i] = params.P0[i];
        log_p[i] = std::log(params.P0[i]);
    }
    Eigen::VectorXd z(n);
    for (std::size_t k = 0; k < steps; ++k) {
        path.times[k] = dt * static_cast<double>(k);
        for (std::size_t i = 0; i < n; ++i)
            z(i) = rng::normal(seed, path_index, k * n + i);
        const Eigen::VectorXd shock = A * z;
        for (std::size_t i = 0; i < n; ++i) {
            log_p[i] += -0.5 * params.Sigma[i][i] * dt + sq_dt * shock(i);
            path.prices[k + 1][i] = std::exp(log_p[i]);
        }
    }
    path.times[steps] = T;
    return path;
}

double realized_quadratic_variation(const PricePath& path) {
    double qv = 0.0;
    for (std::size_t k = 0; k + 1 < path.prices.size(); ++k) {
        const double d = path.prices[k + 1] - path.prices[k];
        qv += d * d;
    }
    return qv;
}

PricePath subsample(const PricePath& fine, std::size_t stride) {
    if (stride == 0 || fine.steps() % stride != 0)
        throw DomainError("subsample: stride must divide the step count");
    PricePath coarse;
    coarse.seed = fine.seed;
    coarse.scheme = fine.scheme;
    for (std::size_t k = 0; k < fine.times.size(); k += stride) {
        coarse.times.push_back(fine.times[k]);
        coarse.prices.push_back(fine.prices[k]);
    }
    return coarse;
}

}  // namespace lvr
