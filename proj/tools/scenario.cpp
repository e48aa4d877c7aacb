#include "scenario.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>
#include <vector>

#include "lvr/decomposition.hpp"
#include "lvr/fees.hpp"
#include "lvr/gbm.hpp"
#include "lvr/io.hpp"
#include "lvr/multidim.hpp"

namespace lvr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// --------------------------- config plumbing -------------------------------

void require_object(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
}

// Strict parsing: unknown keys abort before any computation starts.
void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& ctx) {
    require_object(j, ctx);
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key))
            throw ConfigError(ctx + ": unknown key '" + key + "'");
}

double get_number(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key))
        throw ConfigError(ctx + ": missing required key '" + key + "'");
    if (!j.at(key).is_number())
        throw ConfigError(ctx + ": '" + key + "' must be a number");
    return j.at(key).get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback,
                     const std::string& ctx) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ConfigError(ctx + ": '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::size_t get_count_or(const json& j, const std::string& key,
                         std::size_t fallback, const std::string& ctx) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_unsigned())
        throw ConfigError(ctx + ": '" + key + "' must be a non-negative integer");
    return j.at(key).get<std::size_t>();
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next++; i < n; i = next++) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void write_json(const fs::path& file, const json& j) {
    std::ofstream os(file);
    if (!os) throw Error("cannot open for writing: " + file.string());
    os << j.dump(2) << '\n';
}

struct Stats {
    double mean = 0.0;
    double std_error = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0, sum_sq = 0.0;
    for (double x : xs) {
        sum += x;
        sum_sq += x * x;
    }
    Stats s;
    s.mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - s.mean * s.mean);
    s.std_error = xs.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    return s;
}

// ------------------------------- sections ----------------------------------

struct Dynamics {
    double P0 = 0.0;
    double sigma = 0.0;  // daily
    double T = 0.0;      // days
    std::size_t steps = 10000;
};

Dynamics parse_dynamics(const json& j) {
    check_keys(j, {"P0", "sigma", "T", "steps"}, "dynamics");
    Dynamics d;
    d.P0 = get_number(j, "P0", "dynamics");
    d.sigma = get_number(j, "sigma", "dynamics");
    d.T = get_number(j, "T", "dynamics");
    d.steps = get_count_or(j, "steps", 10000, "dynamics");
    return d;
}

struct MonteCarlo {
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
};

MonteCarlo parse_monte_carlo(const json& j, const RunOptions& opts) {
    MonteCarlo mc;
    if (!j.is_null()) {
        check_keys(j, {"n_paths", "seed"}, "monte_carlo");
        mc.n_paths = get_count_or(j, "n_paths", 1, "monte_carlo");
        mc.seed = get_count_or(j, "seed", 0, "monte_carlo");
    }
    if (opts.seed) mc.seed = *opts.seed;
    return mc;
}

struct Outputs {
    fs::path dir = "out";
    std::size_t max_path_csv = 8;
    bool all_paths = false;
    bool series = true;
};

Outputs parse_outputs(const json& j, const RunOptions& opts) {
    Outputs o;
    if (!j.is_null()) {
        check_keys(j, {"dir", "max_path_csv", "all_paths", "series"}, "outputs");
        if (j.contains("dir")) o.dir = j.at("dir").get<std::string>();
        o.max_path_csv = get_count_or(j, "max_path_csv", 8, "outputs");
        if (j.contains("all_paths")) o.all_paths = j.at("all_paths").get<bool>();
        if (j.contains("series")) o.series = j.at("series").get<bool>();
    }
    if (opts.out_dir) o.dir = *opts.out_dir;
    fs::create_directories(o.dir);
    return o;
}

std::vector<BenchmarkStrategy> parse_benchmarks(const json& j, const Pool& pool,
                                                double P0) {
    std::vector<BenchmarkStrategy> out;
    if (j.is_null()) {
        out.push_back(hodl_benchmark(pool, P0));
        return out;
    }
    if (!j.is_array()) throw ConfigError("benchmarks: expected an array");
    for (const auto& b : j) {
        if (b.is_string()) {
            const auto name = b.get<std::string>();
            if (name == "hodl")
                out.push_back(hodl_benchmark(pool, P0));
            else if (name == "rebalancing")
                out.push_back(rebalancing_benchmark(pool));
            else
                throw ConfigError("benchmarks: unknown benchmark '" + name + "'");
        } else if (b.is_object()) {
            check_keys(b, {"constant"}, "benchmarks");
            out.push_back(constant_benchmark(get_number(b, "constant", "benchmarks")));
        } else {
            throw ConfigError("benchmarks: entries must be strings or objects");
        }
    }
    return out;
}

std::pair<FeeParams, VolumeProcess> parse_fees(const json& j) {
    check_keys(j, {"gamma", "volume"}, "fees");
    FeeParams fee{get_number(j, "gamma", "fees")};
    if (!j.contains("volume"))
        throw ConfigError("fees: missing required key 'volume'");
    const json& v = j.at("volume");
    check_keys(v, {"kind", "rate", "fraction"}, "fees.volume");
    const std::string kind = v.value("kind", "");
    if (kind == "constant")
        return {fee, ConstantRateVolume{get_number(v, "rate", "fees.volume")}};
    if (kind == "proportional")
        return {fee,
                ProportionalVolume{get_number(v, "fraction", "fees.volume")}};
    throw ConfigError("fees.volume: kind must be 'constant' or 'proportional'");
}

json pool_echo(const Pool& pool) { return pool.describe(); }

// realized-variance alternative to the model running cost: the
// sigma^2 P^2 dt weight is replaced by the squared price increment.
std::vector<double> lvr_realized_variance(const Pool& pool,
                                          const PricePath& path) {
    std::vector<double> lvr(path.prices.size());
    lvr[0] = 0.0;
    for (std::size_t k = 0; k + 1 < path.prices.size(); ++k) {
        const double dp = path.prices[k + 1] - path.prices[k];
        lvr[k + 1] = lvr[k] - 0.5 * convexity(pool, path.prices[k]) * dp * dp;
    }
    return lvr;
}

// ------------------------------- modes -------------------------------------

void mode_decompose(const json& cfg, const RunOptions& opts) {
    check_keys(cfg, {"mode", "pool", "dynamics", "monte_carlo", "benchmarks",
                     "outputs"},
               "config");
    const Pool pool = parse_pool_json(cfg.at("pool"));
    const Dynamics dyn = parse_dynamics(cfg.at("dynamics"));
    const MonteCarlo mc =
        parse_monte_carlo(cfg.value("monte_carlo", json()), opts);
    const Outputs outputs = parse_outputs(cfg.value("outputs", json()), opts);
    const auto benchmarks =
        parse_benchmarks(cfg.value("benchmarks", json()), pool, dyn.P0);

    std::vector<double> v_T(mc.n_paths), lvr_T(mc.n_paths), arb_T(mc.n_paths);
    const std::size_t n_csv =
        outputs.all_paths ? mc.n_paths
                          : std::min<std::size_t>(outputs.max_path_csv, mc.n_paths);
    parallel_for(mc.n_paths, opts.threads, [&](std::size_t p) {
        const PricePath path =
            simulate_gbm({dyn.P0, dyn.sigma}, dyn.T, dyn.steps, mc.seed, p);
        const auto rep = decompose(pool, path, dyn.sigma, benchmarks);
        v_T[p] = rep.V.back();
        lvr_T[p] = rep.LVR.back();
        arb_T[p] = rep.ARB.back();
        if (outputs.series && p < n_csv) {
            write_decomposition_csv(
                (outputs.dir / ("path_" + std::to_string(p) + ".csv")).string(),
                rep);
            write_price_path_csv(
                (outputs.dir / ("prices_" + std::to_string(p) + ".csv")).string(),
                path);
        }
    });

    const Stats v = stats_of(v_T), l = stats_of(lvr_T), a = stats_of(arb_T);
    write_json(outputs.dir / "summary.json",
               json{{"mode", "decompose"},
                    {"pool", pool_echo(pool)},
                    {"P0", dyn.P0},
                    {"sigma", dyn.sigma},
                    {"T", dyn.T},
                    {"steps", dyn.steps},
                    {"n_paths", mc.n_paths},
                    {"seed", mc.seed},
                    {"V0", pool_value(pool, dyn.P0)},
                    {"V_T", {{"mean", v.mean}, {"std_error", v.std_error}}},
                    {"LVR_T", {{"mean", l.mean}, {"std_error", l.std_error}}},
                    {"ARB_T", {{"mean", a.mean}, {"std_error", a.std_error}}}});
}

void mode_expected_lvr(const json& cfg, const RunOptions& opts) {
    check_keys(cfg, {"mode", "pool", "dynamics", "monte_carlo", "outputs"},
               "config");
    const Pool pool = parse_pool_json(cfg.at("pool"));
    const Dynamics dyn = parse_dynamics(cfg.at("dynamics"));
    const MonteCarlo mc =
        parse_monte_carlo(cfg.value("monte_carlo", json()), opts);
    const Outputs outputs = parse_outputs(cfg.value("outputs", json()), opts);

    const auto e = expected_lvr(pool, dyn.P0, dyn.sigma, dyn.T, mc.n_paths,
                                dyn.steps, mc.seed);
    json summary{{"mode", "expected-lvr"},
                 {"pool", pool_echo(pool)},
                 {"P0", dyn.P0},
                 {"sigma", dyn.sigma},
                 {"T", dyn.T},
                 {"steps", dyn.steps},
                 {"n_paths", mc.n_paths},
                 {"seed", mc.seed},
                 {"mc_mean", e.mc_mean},
                 {"mc_std_error", e.mc_std_error},
                 {"short_horizon_approx", e.short_horizon}};
    if (std::isfinite(e.analytic)) summary["analytic"] = e.analytic;
    write_json(outputs.dir / "summary.json", summary);
}

void mode_fair_pricing(const json& cfg, const RunOptions& opts) {
    check_keys(cfg, {"mode", "pool", "dynamics", "monte_carlo", "fees",
                     "outputs"},
               "config");
    const Pool pool = parse_pool_json(cfg.at("pool"));
    const Dynamics dyn = parse_dynamics(cfg.at("dynamics"));
    const MonteCarlo mc =
        parse_monte_carlo(cfg.value("monte_carlo", json()), opts);
    const Outputs outputs = parse_outputs(cfg.value("outputs", json()), opts);
    if (!cfg.contains("fees"))
        throw ConfigError("config: fair-pricing mode requires 'fees'");
    const auto [fee, volume] = parse_fees(cfg.at("fees"));

    const auto rep = fair_pricing_report(pool, dyn.P0, dyn.sigma, dyn.T, volume,
                                         fee, mc.n_paths, dyn.steps, mc.seed);
    json vol_echo;
    if (const auto* c = std::get_if<ConstantRateVolume>(&volume))
        vol_echo = {{"kind", "constant"}, {"rate", c->rate}};
    else
        vol_echo = {{"kind", "proportional"},
                    {"fraction", std::get<ProportionalVolume>(volume).fraction}};
    write_json(outputs.dir / "summary.json",
               json{{"mode", "fair-pricing"},
                    {"pool", pool_echo(pool)},
                    {"P0", dyn.P0},
                    {"sigma", dyn.sigma},
                    {"T", dyn.T},
                    {"steps", dyn.steps},
                    {"n_paths", rep.n_paths},
                    {"seed", rep.seed},
                    {"gamma", fee.gamma},
                    {"volume", vol_echo},
                    {"expected_fees", rep.expected_fees},
                    {"expected_lvr", rep.expected_lvr},
                    {"gap", rep.gap},
                    {"gap_std_error", rep.gap_std_error},
                    {"locked_value", rep.locked_value},
                    {"initial_value", rep.initial_value},
                    {"verdict", rep.verdict}});
}

void mode_breakeven(const json& cfg, const RunOptions& opts) {
    check_keys(cfg, {"mode", "pool", "dynamics", "fees", "outputs"}, "config");
    const Pool pool = parse_pool_json(cfg.at("pool"));
    const Dynamics dyn = parse_dynamics(cfg.at("dynamics"));
    const Outputs outputs = parse_outputs(cfg.value("outputs", json()), opts);
    if (!cfg.contains("fees"))
        throw ConfigError("config: breakeven mode requires 'fees'");
    const json& fees = cfg.at("fees");
    check_keys(fees, {"gamma"}, "fees");
    const FeeParams fee{get_number(fees, "gamma", "fees")};

    const double v = breakeven_volume(pool, dyn.P0, dyn.sigma, fee);
    write_json(outputs.dir / "summary.json",
               json{{"mode", "breakeven"},
                    {"pool", pool_echo(pool)},
                    {"P0", dyn.P0},
                    {"sigma", dyn.sigma},
                    {"gamma", fee.gamma},
                    {"lvr_per_value", instantaneous_lvr(pool, dyn.P0, dyn.sigma) /
                                          pool_value(pool, dyn.P0)},
                    {"breakeven_volume_fraction", v}});
}

void mode_convergence_study(const json& cfg, const RunOptions& opts) {
    check_keys(cfg, {"mode", "pool", "dynamics", "monte_carlo", "convergence",
                     "outputs"},
               "config");
    const Pool pool = parse_pool_json(cfg.at("pool"));
    const Dynamics dyn = parse_dynamics(cfg.at("dynamics"));
    const MonteCarlo mc =
        parse_monte_carlo(cfg.value("monte_carlo", json()), opts);
    const Outputs outputs = parse_outputs(cfg.value("outputs", json()), opts);

    std::vector<std::size_t> grid = {100, 1000, 10000, 100000};
    std::size_t n_seeds = 64;
    if (cfg.contains("convergence")) {
        const json& c = cfg.at("convergence");
        check_keys(c, {"grid", "n_seeds"}, "convergence");
        if (c.contains("grid")) grid = c.at("grid").get<std::vector<std::size_t>>();
        n_seeds = get_count_or(c, "n_seeds", 64, "convergence");
    }
    if (grid.empty()) throw ConfigError("convergence: grid must not be empty");
    const std::size_t fine = grid.back();
    for (std::size_t n : grid)
        if (n == 0 || fine % n != 0)
            throw ConfigError("convergence: every grid size must divide the finest");

    // Mean |ARB_N - LVR_N| per grid size, pathwise-refined: every coarse
    // path is a subsample of the same fine path.
    std::vector<std::vector<double>> gaps(grid.size(),
                                          std::vector<double>(n_seeds));
    std::vector<std::vector<double>> lvrs(grid.size(),
                                          std::vector<double>(n_seeds));
    parallel_for(n_seeds, opts.threads, [&](std::size_t s) {
        const PricePath fine_path =
            simulate_gbm({dyn.P0, dyn.sigma}, dyn.T, fine, mc.seed, s);
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            const PricePath path = subsample(fine_path, fine / grid[gi]);
            const double arb = discrete_arbitrage_replay(pool, path).cumulative.back();
            const double lvr = lvr_closed_form(pool, path, dyn.sigma).back();
            gaps[gi][s] = std::abs(arb - lvr);
            lvrs[gi][s] = lvr;
        }
    });

    json table = json::array();
    std::ofstream csv(outputs.dir / "convergence.csv");
    csv << "N,mean_abs_gap,mean_lvr,gap_over_lvr\n";
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const Stats g = stats_of(gaps[gi]);
        const Stats l = stats_of(lvrs[gi]);
        table.push_back(json{{"N", grid[gi]},
                             {"mean_abs_gap", g.mean},
                             {"gap_std_error", g.std_error},
                             {"mean_lvr", l.mean},
                             {"gap_over_lvr", g.mean / l.mean}});
        csv << grid[gi] << ',' << g.mean << ',' << l.mean << ','
            << g.mean / l.mean << '\n';
    }
    write_json(outputs.dir / "summary.json",
               json{{"mode", "convergence-study"},
                    {"pool", pool_echo(pool)},
                    {"P0", dyn.P0},
                    {"sigma", dyn.sigma},
                    {"T", dyn.T},
                    {"n_seeds", n_seeds},
                    {"seed", mc.seed},
                    {"table", table}});
}

void mode_multidim(const json& cfg, const RunOptions& opts) {
    check_keys(cfg, {"mode", "pool", "dynamics", "monte_carlo", "outputs"},
               "config");
    const json& pj = cfg.at("pool");
    check_keys(pj, {"kind", "weights", "L"}, "pool");
    if (pj.value("kind", "") != "wgmm")
        throw ConfigError("pool: multidim mode supports kind 'wgmm'");
    const auto pool = MultiPool::weighted_geometric_mean(
        pj.at("weights").get<std::vector<double>>(),
        get_number(pj, "L", "pool"));

    const json& dj = cfg.at("dynamics");
    check_keys(dj, {"P0", "Sigma", "T", "steps"}, "dynamics");
    MultiGbmParams params;
    params.P0 = dj.at("P0").get<std::vector<double>>();
    params.Sigma = dj.at("Sigma").get<std::vector<std::vector<double>>>();
    const double T = get_number(dj, "T", "dynamics");
    const std::size_t steps = get_count_or(dj, "steps", 10000, "dynamics");
    const MonteCarlo mc =
        parse_monte_carlo(cfg.value("monte_carlo", json()), opts);
    const Outputs outputs = parse_outputs(cfg.value("outputs", json()), opts);

    std::vector<double> v_T(mc.n_paths), lvr_T(mc.n_paths), arb_T(mc.n_paths);
    const std::size_t n_csv =
        outputs.all_paths ? mc.n_paths
                          : std::min<std::size_t>(outputs.max_path_csv, mc.n_paths);
    parallel_for(mc.n_paths, opts.threads, [&](std::size_t p) {
        const auto path = simulate_multi_gbm(params, T, steps, mc.seed, p);
        const auto rep = decomposition_md(pool, path, params.Sigma);
        v_T[p] = rep.V.back();
        lvr_T[p] = rep.LVR.back();
        arb_T[p] = rep.ARB.back();
        if (outputs.series && p < n_csv)
            write_decomposition_md_csv(
                (outputs.dir / ("path_" + std::to_string(p) + ".csv")).string(),
                path, rep);
    });
    const Stats v = stats_of(v_T), l = stats_of(lvr_T), a = stats_of(arb_T);
    write_json(outputs.dir / "summary.json",
               json{{"mode", "multidim"},
                    {"weights", std::get<WeightedGeometricMeanPool>(pool.kind()).weights},
                    {"P0", params.P0},
                    {"Sigma", params.Sigma},
                    {"T", T},
                    {"steps", steps},
                    {"n_paths", mc.n_paths},
                    {"seed", mc.seed},
                    {"V_T", {{"mean", v.mean}, {"std_error", v.std_error}}},
                    {"LVR_T", {{"mean", l.mean}, {"std_error", l.std_error}}},
                    {"ARB_T", {{"mean", a.mean}, {"std_error", a.std_error}}}});
}

}  // namespace

Pool parse_pool_json(const json& j) {
    check_keys(j, {"kind", "L", "theta", "Pa", "Pb", "K"}, "pool");
    const std::string kind = j.value("kind", "");
    if (kind == "constant-product")
        return Pool::constant_product(get_number(j, "L", "pool"));
    if (kind == "geometric-mean")
        return Pool::geometric_mean(get_number(j, "theta", "pool"),
                                    get_number(j, "L", "pool"));
    if (kind == "range")
        return Pool::range_order(get_number(j, "L", "pool"),
                                 get_number(j, "Pa", "pool"),
                                 get_number(j, "Pb", "pool"));
    if (kind == "linear")
        return Pool::linear(get_number(j, "K", "pool"),
                            get_number(j, "L", "pool"));
    throw ConfigError("pool: unknown kind '" + kind + "'");
}

Pool parse_pool_string(const std::string& spec) {
    const auto colon = spec.find(':');
    json j{{"kind", spec.substr(0, colon)}};
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            const std::string item = rest.substr(pos, comma - pos);
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw ConfigError("pool spec: expected key=value in '" + item + "'");
            try {
                j[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw ConfigError("pool spec: bad number in '" + item + "'");
            }
            pos = comma + 1;
        }
    }
    return parse_pool_json(j);
}

void run_scenario(const std::string& config_file, const RunOptions& opts) {
    std::ifstream is(config_file);
    if (!is) throw ConfigError("cannot open config file: " + config_file);
    json cfg;
    try {
        cfg = json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    require_object(cfg, "config");
    if (!cfg.contains("mode"))
        throw ConfigError("config: missing required key 'mode'");
    const std::string mode = cfg.at("mode").get<std::string>();
    if (mode == "decompose")
        mode_decompose(cfg, opts);
    else if (mode == "expected-lvr")
        mode_expected_lvr(cfg, opts);
    else if (mode == "fair-pricing")
        mode_fair_pricing(cfg, opts);
    else if (mode == "breakeven")
        mode_breakeven(cfg, opts);
    else if (mode == "convergence-study")
        mode_convergence_study(cfg, opts);
    else if (mode == "multidim")
        mode_multidim(cfg, opts);
    else
        throw ConfigError("config: unknown mode '" + mode + "'");
}

void run_historical_decompose(const std::string& prices_file,
                              const std::string& pool_spec, double sigma,
                              const std::string& out_dir,
                              bool realized_variance) {
    if (!(sigma >= 0.0))
        throw ConfigError("decompose: sigma must be non-negative");
    const Pool pool = parse_pool_string(pool_spec);
    const PricePath path = read_price_path_csv(prices_file);
    fs::create_directories(out_dir);

    auto rep = decompose(pool, path, sigma, {hodl_benchmark(pool, path.prices[0])});
    if (realized_variance) rep.LVR = lvr_realized_variance(pool, path);
    write_decomposition_csv((fs::path(out_dir) / "decomposition.csv").string(), rep);
    write_json(fs::path(out_dir) / "summary.json",
               json{{"mode", "decompose"},
                    {"prices", prices_file},
                    {"scheme", path.scheme},
                    {"pool", pool.describe()},
                    {"sigma", sigma},
                    {"realized_variance", realized_variance},
                    {"T", path.horizon()},
                    {"steps", path.steps()},
                    {"V0", rep.V.front()},
                    {"V_T", rep.V.back()},
                    {"LVR_T", rep.LVR.back()},
                    {"ARB_T", rep.ARB.back()},
                    {"LVB_hodl_T", rep.benchmarks.front().LVB.back()},
                    {"realized_qv", realized_quadratic_variation(path)}});
}

}  // namespace lvr::cli
