#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

#include "scenario.hpp"

namespace {

int fail(const std::exception& e, const std::string& kind, bool json_errors) {
    if (json_errors) {
        std::cerr << nlohmann::json{{"error", kind}, {"message", e.what()}}.dump()
                  << '\n';
    } else {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CFMM liquidity-provision P&L lab"};
    app.require_subcommand(1);
    bool json_errors = false;
    app.add_flag("--json-errors", json_errors,
                 "report failures as a JSON object on stderr");

    // lvr-lab run <config> [--out DIR] [--threads N] [--seed S]
    auto* run = app.add_subcommand("run", "execute a scenario config file");
    std::string config_file;
    lvr::cli::RunOptions opts;
    std::string out_dir;
    std::uint64_t seed = 0;
    run->add_option("config", config_file, "scenario config (JSON)")->required();
    auto* out_opt = run->add_option("--out", out_dir, "output directory override");
    run->add_option("--threads", opts.threads, "worker threads for path fan-out")
        ->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "base seed override");

    // lvr-lab decompose --prices FILE --pool SPEC --sigma X [--out DIR]
    auto* dec = app.add_subcommand("decompose",
                                   "decompose an externally supplied price path");
    std::string prices_file, pool_spec, dec_out = "out";
    double sigma = 0.0;
    bool realized_variance = false;
    dec->add_option("--prices", prices_file, "price path CSV (t,price)")
        ->required();
    dec->add_option("--pool", pool_spec,
                    "pool spec, e.g. constant-product:L=1 or range:L=1,Pa=1,Pb=4")
        ->required();
    dec->add_option("--sigma", sigma, "assumed volatility per sqrt(day)")
        ->required();
    dec->add_option("--out", dec_out, "output directory");
    dec->add_flag("--realized-variance", realized_variance,
                  "weight the running cost by squared price increments "
                  "instead of sigma^2 P^2 dt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (json_errors && e.get_exit_code() != 0) {
            std::cerr << nlohmann::json{{"error", "usage"},
                                        {"message", e.what()}}.dump()
                      << '\n';
            return e.get_exit_code();
        }
        return app.exit(e);
    }

    try {
        if (run->parsed()) {
            if (*out_opt) opts.out_dir = out_dir;
            if (*seed_opt) opts.seed = seed;
            lvr::cli::run_scenario(config_file, opts);
        } else {
            lvr::cli::run_historical_decompose(prices_file, pool_spec, sigma,
                                               dec_out, realized_variance);
        }
    } catch (const lvr::cli::ConfigError& e) {
        return fail(e, "config", json_errors);
    } catch (const lvr::ParseError& e) {
        return fail(e, "parse", json_errors);
    } catch (const lvr::ValidationError& e) {
        return fail(e, "validation", json_errors);
    } catch (const lvr::Error& e) {
        return fail(e, "domain", json_errors);
    } catch (const std::exception& e) {
        return fail(e, "internal", json_errors);
    }
    return 0;
}
