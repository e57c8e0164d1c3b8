#include "qwalk/run_config.hpp"

#include "qwalk/errors.hpp"

namespace qwalk {

io::Json to_json(const RunConfig& c) {
    io::Json j;
    j["subcommand"] = c.subcommand;
    j["d"] = c.d;
    j["q"] = c.q;
    j["q_prime"] = c.q_prime;
    j["coin"] = c.coin_name;
    j["theta"] = c.coin.theta;
    j["gamma"] = c.coin.gamma;
    j["sigma"] = c.coin.sigma;
    j["delta"] = c.coin.delta;
    j["scenario"] = c.scenario;
    j["schedule"] = c.schedule;
    j["steps"] = c.steps;
    j["switch_step"] = c.switch_step;
    j["record_every"] = c.record_every;
    j["mass"] = c.mass;
    j["mu"] = c.mu;
    j["mu_prime"] = c.mu_prime;
    j["k"] = c.k;
    j["k_prime"] = c.k_prime;
    j["band"] = c.band;
    j["band_prime"] = c.band_prime;
    j["window"] = c.window;
    j["doublings"] = c.doublings;
    j["d_list"] = c.d_list;
    j["pairs"] = c.pairs;
    j["random_coins"] = c.random_coins;
    j["seed"] = c.seed;
    j["full_grid"] = c.full_grid;
    j["format"] = c.format;
    j["output_path"] = c.output_path;
    return j;
}

namespace {

template <typename T>
void read(const io::Json& j, const char* key, T& field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        field = it->get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("config field '") + key + "': " + e.what());
    }
}

} // namespace

RunConfig run_config_from_json(const io::Json& j) {
    if (!j.is_object()) throw InvalidArgument("run config must be a JSON object");
    RunConfig c;
    read(j, "subcommand", c.subcommand);
    read(j, "d", c.d);
    read(j, "q", c.q);
    read(j, "q_prime", c.q_prime);
    read(j, "coin", c.coin_name);
    read(j, "theta", c.coin.theta);
    read(j, "gamma", c.coin.gamma);
    read(j, "sigma", c.coin.sigma);
    read(j, "delta", c.coin.delta);
    read(j, "scenario", c.scenario);
    read(j, "schedule", c.schedule);
    read(j, "steps", c.steps);
    read(j, "switch_step", c.switch_step);
    read(j, "record_every", c.record_every);
    read(j, "mass", c.mass);
    read(j, "mu", c.mu);
    read(j, "mu_prime", c.mu_prime);
    read(j, "k", c.k);
    read(j, "k_prime", c.k_prime);
    read(j, "band", c.band);
    read(j, "band_prime", c.band_prime);
    read(j, "window", c.window);
    read(j, "doublings", c.doublings);
    read(j, "d_list", c.d_list);
    read(j, "pairs", c.pairs);
    read(j, "random_coins", c.random_coins);
    read(j, "seed", c.seed);
    read(j, "full_grid", c.full_grid);
    read(j, "format", c.format);
    read(j, "output_path", c.output_path);
    return c;
}

} // namespace qwalk
