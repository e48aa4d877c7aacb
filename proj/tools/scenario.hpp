#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "lvr/errors.hpp"
#include "lvr/pool.hpp"

namespace lvr::cli {

struct ConfigError : Error {
    using Error::Error;
};

// Overrides supplied on the command line on top of the config file.
struct RunOptions {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

// Executes a scenario config file; writes artifacts into the output
// directory and always emits summary.json.  Throws on any failure.
void run_scenario(const std::string& config_file, const RunOptions& opts);

// One-shot historical decomposition: ingest a price CSV and decompose it
// under an assumed volatility.  When realized_variance is set the running
// cost leg uses squared price increments instead of sigma^2 P^2 dt.
void run_historical_decompose(const std::string& prices_file,
                              const std::string& pool_spec, double sigma,
                              const std::string& out_dir,
                              bool realized_variance);

// Pool spec string, e.g. "constant-product:L=1" or "range:L=1,Pa=1,Pb=4".
Pool parse_pool_string(const std::string& spec);
Pool parse_pool_json(const nlohmann::json& j);

}  // namespace lvr::cli
