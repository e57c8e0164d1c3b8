#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/table.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Fully resolved parameters of one CLI run. Fields that a subcommand ignores keep
/// their defaults so every output file carries the same schema.
struct RunConfig {
    std::string subcommand;

    std::int64_t d = 31;
    std::int64_t q = 1;
    std::int64_t q_prime = 7;
    std::string coin_name = "hadamard"; // hadamard, identity or custom
    CoinParams coin = CoinParams::hadamard();

    // dynamics
    std::string scenario = "left"; // constant, left, middle, right, custom
    std::string schedule;          // custom: "length:q,length:q,..."
    std::size_t steps = 800;
    std::size_t switch_step = 100;
    std::size_t record_every = 1;

    // dirac
    double mass = 1.0;
    double mu = 1.0;
    double mu_prime = 0.0;
    double k = 0.0;
    double k_prime = 1.0;
    int band = 1;
    int band_prime = 1;
    double window = 20.0;
    int doublings = 3;

    // sweep
    std::vector<std::int64_t> d_list;
    std::string pairs = "labelled"; // labelled, all, or "q:q',..."
    std::size_t random_coins = 0;
    std::uint64_t seed = 1;

    bool full_grid = false;
    std::string format = "csv";
    std::string output_path;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

io::Json to_json(const RunConfig& config);
/// Inverse of to_json. Missing keys keep their defaults; wrong types throw InvalidArgument.
RunConfig run_config_from_json(const io::Json& json);

} // namespace qwalk
