#include "qwalk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <system_error>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qwalk/complementarity.hpp"
#include "qwalk/dirac.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/numtheory.hpp"
#include "qwalk/run_config.hpp"
#include "qwalk/spectra.hpp"
#include "qwalk/table.hpp"
#include "qwalk/version.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

namespace {

using io::Cell;
using io::Json;
using io::Table;

class UsageError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

constexpr double kResidualTolerance = 1e-9;
constexpr double kNormTolerance = 1e-9;
constexpr double kDiracConvergence = 1e-3;
constexpr std::int64_t kTopGridEntries = 100;
constexpr std::int64_t kFullGridLimit = 256;

struct Outcome {
    io::Document doc;
    int status = kExitSuccess;
};

std::int64_t i64(std::size_t v) { return static_cast<std::int64_t>(v); }

std::string out_dir_default() {
    const char* env = std::getenv(kOutDirEnv);
    return env && *env ? std::string(env) : std::string(".");
}

CoinParams named_coin(const std::string& name) {
    if (name == "hadamard") return CoinParams::hadamard();
    if (name == "identity") return CoinParams::identity();
    throw UsageError("unknown coin '" + name + "' (hadamard, identity)");
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

std::int64_t parse_int(const std::string& text) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw UsageError("expected an integer, got '" + text + "'");
    }
    if (used != text.size()) throw UsageError("expected an integer, got '" + text + "'");
    return v;
}

// "3,5,7" or ranges "3-31", optionally mixed.
std::vector<std::int64_t> parse_d_list(const std::string& text, bool primes_only) {
    std::vector<std::int64_t> values;
    for (const auto& part : split(text, ',')) {
        const auto dash = part.find('-', 1);
        if (dash == std::string::npos) {
            values.push_back(parse_int(part));
        } else {
            const auto lo = parse_int(part.substr(0, dash));
            const auto hi = parse_int(part.substr(dash + 1));
            for (auto v = lo; v <= hi; ++v) values.push_back(v);
        }
    }
    for (auto v : values)
        if (v < 2) throw UsageError("cycle length must be >= 2, got " + std::to_string(v));
    if (primes_only)
        std::erase_if(values, [](std::int64_t v) { return !numtheory::is_prime(static_cast<std::uint64_t>(v)); });
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::vector<std::pair<std::int64_t, std::int64_t>> parse_pairs(const std::string& text) {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    for (const auto& part : split(text, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) throw UsageError("pair '" + part + "' is not of the form q:q'");
        pairs.emplace_back(parse_int(part.substr(0, colon)), parse_int(part.substr(colon + 1)));
    }
    if (pairs.empty()) throw UsageError("empty pair list");
    return pairs;
}

QSchedule parse_schedule(const std::string& text) {
    QSchedule schedule;
    for (const auto& part : split(text, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) throw UsageError("schedule segment '" + part + "' is not length:q");
        const auto length = parse_int(part.substr(0, colon));
        if (length < 0) throw UsageError("negative schedule segment length");
        schedule.append(static_cast<std::size_t>(length), parse_int(part.substr(colon + 1)));
    }
    return schedule;
}

Json report_json(const ComplementarityReport& r) {
    Json j;
    j["d"] = r.d;
    j["q"] = r.q;
    j["q_prime"] = r.q_prime;
    j["source_q"] = to_string(r.source_q);
    j["source_q_prime"] = to_string(r.source_q_prime);
    j["max_overlap"] = r.max_overlap;
    j["max_overlap_sq"] = r.max_overlap_sq;
    j["bound"] = r.bound;
    j["bound_sq"] = 1.0 / static_cast<double>(r.d);
    j["bound_satisfied"] = r.bound_satisfied;
    j["amub"] = r.amub;
    j["violation_count"] = r.violation_count;
    Json v = Json::array();
    for (const auto& x : r.violations) {
        v.push_back({{"m", x.label.m},
                     {"tau", x.label.tau},
                     {"m_prime", x.label_prime.m},
                     {"tau_prime", x.label_prime.tau},
                     {"overlap_sq", x.overlap_sq}});
    }
    j["violations"] = std::move(v);
    return j;
}

// ---------------------------------------------------------------------------

Outcome cmd_spectrum(const RunConfig& cfg) {
    const WalkConfig walk(cfg.d, cfg.q, cfg.coin);
    const Eigenbasis basis = eigenbasis(walk.q(), cfg.coin, cfg.d);
    const auto branch = analytic_branch(walk.q(), cfg.coin, cfg.d);

    Outcome o;
    o.doc.table.columns = {"m", "tau", "eigenvalue_re", "eigenvalue_im", "angle", "residual"};
    double worst = 0.0;
    for (const auto& p : basis.pairs) {
        const double r = residual(walk, p);
        worst = std::max(worst, r);
        o.doc.table.add_row({p.label.m, std::int64_t{p.label.tau}, p.eigenvalue.real(), p.eigenvalue.imag(),
                             std::arg(p.eigenvalue), r});
    }
    const bool pass = worst <= kResidualTolerance;
    if (basis.source == BasisSource::Numerical) {
        o.doc.warnings.push_back("no closed form for gcd(q, d) > 1; eigenpairs come from the dense oracle and "
                                 "labels are synthetic");
    }
    o.doc.summary["source"] = to_string(basis.source);
    o.doc.summary["closed_form"] = branch.has_value();
    o.doc.summary["eigenpairs"] = basis.pairs.size();
    o.doc.summary["max_residual"] = worst;
    o.doc.summary["residual_tolerance"] = kResidualTolerance;
    o.doc.summary["all_residuals_pass"] = pass;
    o.status = pass ? kExitSuccess : kExitInvariant;
    return o;
}

Outcome cmd_overlaps(const RunConfig& cfg) {
    const WalkConfig a_cfg(cfg.d, cfg.q, cfg.coin);
    const WalkConfig b_cfg(cfg.d, cfg.q_prime, cfg.coin);
    if (a_cfg.q() == b_cfg.q()) throw UsageError("q and q' must differ mod d");

    const Eigenbasis a = eigenbasis(a_cfg.q(), cfg.coin, cfg.d);
    const Eigenbasis b = eigenbasis(b_cfg.q(), cfg.coin, cfg.d);
    const OverlapMatrix om = overlap_matrix(a.pairs, b.pairs);
    ComplementarityReport report = summarize(om, cfg.coin);
    report.source_q = a.source;
    report.source_q_prime = b.source;

    struct Entry {
        Eigen::Index row, col;
        double sq;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(om.entries.size()));
    for (Eigen::Index i = 0; i < om.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < om.entries.cols(); ++j)
            entries.push_back({i, j, om.entries(i, j) * om.entries(i, j)});

    const bool truncated = cfg.d > kFullGridLimit && !cfg.full_grid;
    if (truncated) {
        const auto keep = std::min<std::size_t>(entries.size(), kTopGridEntries);
        std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.sq > y.sq; });
        entries.resize(keep);
    }

    Outcome o;
    o.doc.table.columns = {"m", "tau", "m_prime", "tau_prime", "overlap_sq"};
    for (const auto& e : entries) {
        const auto& col = om.col_labels[static_cast<std::size_t>(e.col)];
        const auto& row = om.row_labels[static_cast<std::size_t>(e.row)];
        o.doc.table.add_row({col.m, std::int64_t{col.tau}, row.m, std::int64_t{row.tau}, e.sq});
    }
    if (truncated) {
        o.doc.warnings.push_back("grid truncated to the largest " + std::to_string(kTopGridEntries) +
                                 " entries; pass --full-grid for all of them");
    }
    o.doc.summary = report_json(report);
    o.doc.summary["stochastic_defect"] = om.stochastic_defect();
    o.doc.summary["grid_truncated"] = truncated;
    o.doc.summary["grid_entries"] = entries.size();

    const bool prime = numtheory::is_prime(static_cast<std::uint64_t>(cfg.d));
    o.status = (prime && !report.bound_satisfied) ? kExitInvariant : kExitSuccess;
    return o;
}

Outcome cmd_dynamics(const RunConfig& cfg) {
    if (cfg.d < 2) throw UsageError("d must be >= 2");
    cfg.coin.validate();

    QSchedule schedule;
    std::optional<std::size_t> switch_step;
    if (cfg.scenario == "custom") {
        schedule = parse_schedule(cfg.schedule);
    } else if (cfg.scenario == "constant") {
        schedule = QSchedule::constant(cfg.q, cfg.steps);
    } else {
        SwitchScenario s;
        if (cfg.scenario == "left") s = SwitchScenario::Left;
        else if (cfg.scenario == "middle") s = SwitchScenario::Middle;
        else if (cfg.scenario == "right") s = SwitchScenario::Right;
        else throw UsageError("unknown scenario '" + cfg.scenario + "' (constant, left, middle, right, custom)");
        if (cfg.switch_step < 1) throw UsageError("switch step must be >= 1");
        schedule = switch_schedule(s, cfg.steps, cfg.switch_step);
        switch_step = cfg.switch_step;
    }
    if (schedule.length() < cfg.steps)
        throw UsageError("schedule covers " + std::to_string(schedule.length()) + " steps, " +
                         std::to_string(cfg.steps) + " requested");

    const Evolution ev = evolve_schedule(uniform_initial_state(cfg.d), cfg.coin, schedule, cfg.steps,
                                         std::max<std::size_t>(cfg.record_every, 1));

    Outcome o;
    o.doc.table.columns = {"step", "q", "tv", "p"};
    double max_tv = 0.0, max_tv_before = 0.0;
    std::int64_t max_tv_step = 0;
    for (const auto& rec : ev.records) {
        const double tv = tv_from_uniform(rec.distribution);
        if (tv > max_tv) {
            max_tv = tv;
            max_tv_step = i64(rec.step);
        }
        if (switch_step && rec.step < *switch_step) max_tv_before = std::max(max_tv_before, tv);
        o.doc.table.add_row({i64(rec.step), rec.q, tv, rec.distribution});
    }
    const double drift = std::abs(ev.final_state.norm() - 1.0);
    o.doc.summary["records"] = ev.records.size();
    o.doc.summary["max_tv"] = max_tv;
    o.doc.summary["max_tv_step"] = max_tv_step;
    if (switch_step) o.doc.summary["max_tv_before_switch"] = max_tv_before;
    o.doc.summary["final_tv"] = ev.records.empty() ? 0.0 : tv_from_uniform(ev.records.back().distribution);
    o.doc.summary["norm_drift"] = drift;
    o.status = drift <= kNormTolerance ? kExitSuccess : kExitInvariant;
    return o;
}

Outcome cmd_dirac(const RunConfig& cfg) {
    if (cfg.band != 1 && cfg.band != -1) throw UsageError("band must be +1 or -1");
    if (cfg.band_prime != 1 && cfg.band_prime != -1) throw UsageError("band' must be +1 or -1");
    if (!(cfg.mass >= 0.0)) throw UsageError("mass must be >= 0");
    if (!(cfg.window >= 0.0)) throw UsageError("window must be >= 0");
    if (cfg.doublings < 0 || cfg.doublings > 12) throw UsageError("doublings must lie in [0, 12]");

    const dirac::DiracMode a{cfg.mass, cfg.mu, cfg.k, cfg.band};
    const dirac::DiracMode b{cfg.mass, cfg.mu_prime, cfg.k_prime, cfg.band_prime};
    const auto closed = dirac::overlap_closed_form(a, b);
    const double bound = dirac::overlap_bound(cfg.mu, cfg.mu_prime);
    const auto gamma = dirac::gamma_factor(cfg.k, cfg.k_prime, cfg.band, cfg.band_prime, cfg.mass);

    Outcome o;
    o.doc.table.columns = {"window",       "value_re", "value_im",        "corrected_re",
                           "corrected_im", "error",    "truncation_bound", "evaluations"};
    double last_error = 0.0;
    const int windows = cfg.window == 0.0 ? 1 : cfg.doublings + 1;
    for (int i = 0; i < windows; ++i) {
        const double w = std::ldexp(cfg.window, i);
        const auto qr = dirac::quadrature_overlap(a, b, w);
        last_error = std::abs(qr.tail_corrected - closed);
        o.doc.table.add_row({w, qr.value.real(), qr.value.imag(), qr.tail_corrected.real(), qr.tail_corrected.imag(),
                             last_error, qr.truncation_estimate, i64(qr.evaluations)});
    }
    const bool within = std::abs(closed) <= bound + 1e-12;
    o.doc.summary["closed_re"] = closed.real();
    o.doc.summary["closed_im"] = closed.imag();
    o.doc.summary["closed_abs"] = std::abs(closed);
    o.doc.summary["gamma_re"] = gamma.real();
    o.doc.summary["gamma_im"] = gamma.imag();
    o.doc.summary["bound"] = bound;
    o.doc.summary["within_bound"] = within;
    if (cfg.window > 0.0) o.doc.summary["converged"] = last_error <= kDiracConvergence;
    o.status = within ? kExitSuccess : kExitInvariant;
    return o;
}

Outcome cmd_sweep(const RunConfig& cfg, unsigned threads) {
    std::vector<SweepCoin> coins{{cfg.coin, std::nullopt}};
    for (std::size_t i = 0; i < cfg.random_coins; ++i) {
        const std::uint64_t s = cfg.seed + i;
        coins.push_back({random_coin(s), s});
    }
    SweepOptions opts;
    opts.threads = threads;
    if (cfg.pairs == "labelled") {
        opts.selection = PairSelection::Labelled;
    } else if (cfg.pairs == "all") {
        opts.selection = PairSelection::All;
    } else {
        opts.selection = PairSelection::Explicit;
        opts.pairs = parse_pairs(cfg.pairs);
    }
    const auto rows = sweep(cfg.d_list, coins, opts);

    Outcome o;
    o.doc.table.columns = {"d",        "coin_index",     "coin_seed",      "theta",          "gamma",
                           "sigma",    "delta",          "q",              "q_prime",        "source_q",
                           "source_q_prime", "max_overlap_sq", "bound_sq", "bound_satisfied", "amub",
                           "violation_count", "error"};
    double global_sq = 0.0;
    std::int64_t global_d = 0;
    std::size_t violations = 0, prime_violations = 0, failures = 0;
    for (const auto& row : rows) {
        const auto& coin = coins[row.coin_index];
        const std::int64_t seed = coin.seed ? static_cast<std::int64_t>(*coin.seed) : -1;
        const double bound_sq = 1.0 / static_cast<double>(row.d);
        if (!row.report) {
            ++failures;
            o.doc.table.add_row({row.d, i64(row.coin_index), seed, coin.coin.theta, coin.coin.gamma, coin.coin.sigma,
                                 coin.coin.delta, row.q, row.q_prime, std::string("-"), std::string("-"),
                                 std::nan(""), bound_sq, std::int64_t{0}, std::int64_t{0}, std::int64_t{0},
                                 row.error});
            continue;
        }
        const auto& r = *row.report;
        if (r.max_overlap_sq > global_sq) {
            global_sq = r.max_overlap_sq;
            global_d = row.d;
        }
        if (!r.bound_satisfied) {
            ++violations;
            if (numtheory::is_prime(static_cast<std::uint64_t>(row.d))) ++prime_violations;
        }
        o.doc.table.add_row({row.d, i64(row.coin_index), seed, coin.coin.theta, coin.coin.gamma, coin.coin.sigma,
                             coin.coin.delta, row.q, row.q_prime, std::string(to_string(r.source_q)),
                             std::string(to_string(r.source_q_prime)), r.max_overlap_sq, bound_sq,
                             std::int64_t{r.bound_satisfied}, std::int64_t{r.amub}, i64(r.violation_count),
                             std::string()});
    }
    o.doc.summary["cells"] = rows.size();
    o.doc.summary["global_max_overlap_sq"] = global_sq;
    o.doc.summary["global_max_overlap"] = std::sqrt(global_sq);
    o.doc.summary["global_max_d"] = global_d;
    o.doc.summary["violation_cells"] = violations;
    o.doc.summary["prime_violation_cells"] = prime_violations;
    o.doc.summary["failed_cells"] = failures;
    o.status = prime_violations == 0 ? kExitSuccess : kExitInvariant;
    return o;
}

// ---------------------------------------------------------------------------

void write_output(const RunConfig& cfg, const io::Document& doc, std::ostream& out) {
    const auto format = io::parse_format(cfg.format);
    if (cfg.output_path == "-") {
        io::write_document(out, doc, format);
        return;
    }
    namespace fs = std::filesystem;
    const fs::path path(cfg.output_path);
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    io::write_document(file, doc, format);
    file.flush();
    if (!file) throw IoError("write to " + path.string() + " failed");
    out << "wrote " << path.string() << " (" << doc.table.rows.size() << " rows)\n";
}

struct Parsed {
    RunConfig config;
    unsigned threads = 0;
    std::string out_dir;
    std::string name;
};

struct CoinOptions {
    std::string name = "hadamard";
    CLI::Option* theta = nullptr;
    CLI::Option* gamma = nullptr;
    CLI::Option* sigma = nullptr;
    CLI::Option* delta = nullptr;
    double values[4] = {0, 0, 0, 0};
};

void add_common(CLI::App* sub, Parsed& p, CoinOptions& coin, bool with_coin) {
    sub->add_option("--format", p.config.format, "csv, json or dat")
        ->check(CLI::IsMember({"csv", "json", "dat"}))
        ->capture_default_str();
    sub->add_option("--out-dir", p.out_dir, std::string("Output directory (default: $") + kOutDirEnv + " or .)");
    sub->add_option("--name", p.name, "File stem (default: subcommand name)");
    sub->add_option("--output", p.config.output_path, "Explicit output path; '-' writes to stdout");
    if (!with_coin) return;
    sub->add_option("--coin", coin.name, "Base coin: hadamard or identity")
        ->check(CLI::IsMember({"hadamard", "identity"}))
        ->capture_default_str();
    coin.theta = sub->add_option("--theta", coin.values[0], "Coin angle theta in [0, pi/2] (radians)");
    coin.gamma = sub->add_option("--gamma", coin.values[1], "Coin phase gamma (radians)");
    coin.sigma = sub->add_option("--sigma", coin.values[2], "Coin phase sigma (radians)");
    coin.delta = sub->add_option("--delta", coin.values[3], "Global coin phase delta (radians)");
}

void resolve_coin(const CoinOptions& c, RunConfig& cfg) {
    cfg.coin_name = c.name;
    cfg.coin = named_coin(c.name);
    if (!c.theta) return;
    bool custom = false;
    if (c.theta->count()) { cfg.coin.theta = c.values[0]; custom = true; }
    if (c.gamma->count()) { cfg.coin.gamma = c.values[1]; custom = true; }
    if (c.sigma->count()) { cfg.coin.sigma = c.values[2]; custom = true; }
    if (c.delta->count()) { cfg.coin.delta = c.values[3]; custom = true; }
    if (custom) cfg.coin_name = "custom";
    cfg.coin.validate();
}

int run_parsed(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Phase-shifted quantum walk on a cycle: spectra, overlaps, dynamics and Dirac overlaps", "qwalk"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("qwalk ") + kVersion);

    Parsed p;
    std::map<const CLI::App*, CoinOptions> coin_options; // one per subcommand
    std::string d_list, pairs = "labelled";
    bool primes_only = false;
    auto& cfg = p.config;

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and residuals of U for one (d, q)");
    add_common(spectrum, p, coin_options[spectrum], true);
    spectrum->add_option("--d", cfg.d, "Cycle length")->capture_default_str();
    spectrum->add_option("--q", cfg.q, "Phase index")->capture_default_str();

    auto* overlaps = app.add_subcommand("overlaps", "Squared overlap grid between the q and q' eigenbases");
    add_common(overlaps, p, coin_options[overlaps], true);
    overlaps->add_option("--d", cfg.d, "Cycle length")->capture_default_str();
    overlaps->add_option("--q", cfg.q, "Phase index of the column basis")->capture_default_str();
    overlaps->add_option("--q-prime", cfg.q_prime, "Phase index of the row basis")->capture_default_str();
    overlaps->add_flag("--full-grid", cfg.full_grid, "Emit every entry even when d > 256");

    auto* dynamics = app.add_subcommand("dynamics", "Position distributions under a q schedule");
    add_common(dynamics, p, coin_options[dynamics], true);
    dynamics->add_option("--d", cfg.d, "Cycle length")->capture_default_str();
    dynamics->add_option("--scenario", cfg.scenario, "constant, left, middle, right or custom")
        ->check(CLI::IsMember({"constant", "left", "middle", "right", "custom"}))
        ->capture_default_str();
    dynamics->add_option("--steps", cfg.steps, "Number of walk steps")->capture_default_str();
    dynamics->add_option("--switch-step", cfg.switch_step, "First step (1-based) that leaves q = 0")
        ->capture_default_str();
    dynamics->add_option("--record-every", cfg.record_every, "Recording cadence in steps")->capture_default_str();
    auto* dynamics_q = dynamics->add_option("--q", cfg.q, "q for the constant scenario (default 0)");
    dynamics->add_option("--schedule", cfg.schedule, "custom scenario: length:q,length:q,...");

    auto* dirac_cmd = app.add_subcommand("dirac", "Overlap of two Dirac modes with different gauge slopes");
    add_common(dirac_cmd, p, coin_options[dirac_cmd], false);
    dirac_cmd->add_option("--m", cfg.mass, "Mass")->capture_default_str();
    dirac_cmd->add_option("--mu", cfg.mu, "Gauge slope of the first mode")->capture_default_str();
    dirac_cmd->add_option("--mu-prime", cfg.mu_prime, "Gauge slope of the second mode")->capture_default_str();
    dirac_cmd->add_option("--k", cfg.k, "Wave number of the first mode")->capture_default_str();
    dirac_cmd->add_option("--k-prime", cfg.k_prime, "Wave number of the second mode")->capture_default_str();
    dirac_cmd->add_option("--band", cfg.band, "Energy band of the first mode (+1/-1)")->capture_default_str();
    dirac_cmd->add_option("--band-prime", cfg.band_prime, "Energy band of the second mode")->capture_default_str();
    dirac_cmd->add_option("--window", cfg.window, "Half-width of the first quadrature window")->capture_default_str();
    dirac_cmd->add_option("--doublings", cfg.doublings, "Number of window doublings")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "Complementarity check over many (d, q, q') cells");
    add_common(sweep_cmd, p, coin_options[sweep_cmd], true);
    sweep_cmd->add_option("--d-list", d_list, "Comma list of cycle lengths; ranges like 3-31 allowed");
    sweep_cmd->add_flag("--primes-only", primes_only, "Keep only prime entries of the list");
    sweep_cmd->add_option("--pairs", pairs, "labelled, all, or q:q',q:q',...")->capture_default_str();
    sweep_cmd->add_option("--random-coins", cfg.random_coins, "Extra seeded random coins")->capture_default_str();
    sweep_cmd->add_option("--seed", cfg.seed, "Seed of the first random coin")->capture_default_str();
    sweep_cmd->add_option("--threads", p.threads, "Worker threads (0: hardware concurrency)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    if (chosen != dirac_cmd) resolve_coin(coin_options.at(chosen), cfg);
    if (chosen == dynamics && !dynamics_q->count()) cfg.q = 0;
    if (chosen == sweep_cmd) {
        cfg.d_list = parse_d_list(d_list, primes_only);
        cfg.pairs = pairs;
    }
    if (cfg.output_path.empty()) {
        const std::string dir = p.out_dir.empty() ? out_dir_default() : p.out_dir;
        const std::string stem = p.name.empty() ? cfg.subcommand : p.name;
        cfg.output_path = (std::filesystem::path(dir) / (stem + "." + cfg.format)).string();
    }

    Outcome o;
    if (chosen == spectrum) o = cmd_spectrum(cfg);
    else if (chosen == overlaps) o = cmd_overlaps(cfg);
    else if (chosen == dynamics) o = cmd_dynamics(cfg);
    else if (chosen == dirac_cmd) o = cmd_dirac(cfg);
    else o = cmd_sweep(cfg, p.threads);

    o.doc.config = to_json(cfg);
    write_output(cfg, o.doc, out);
    if (cfg.output_path != "-") out << "summary " << o.doc.summary.dump() << '\n';
    for (const auto& w : o.doc.warnings) err << "warning: " << w << '\n';
    if (o.status == kExitInvariant) err << "error: invariant violation detected, see summary\n";
    return o.status;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run_parsed(args, out, err);
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const NonUnitaryInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const Error& e) {
        // Remaining library errors are rejected inputs: bad angles, equal slopes, regime gates.
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvariant;
    }
}

} // namespace qwalk
