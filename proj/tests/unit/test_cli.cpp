#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qwalk/cli.hpp"
#include "qwalk/run_config.hpp"
#include "qwalk/table.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

io::Json run_json(std::vector<std::string> args, int expected = 0) {
    args.insert(args.end(), {"--format", "json", "--output", "-"});
    const auto r = run(args);
    REQUIRE_MESSAGE(r.code == expected, r.err);
    return io::Json::parse(r.out);
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("qwalk_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("spectrum on a prime cycle") {
    const auto j = run_json({"spectrum", "--d", "31", "--q", "1", "--theta", "0.7853981633974483"});
    CHECK(j["rows"].size() == 62);
    CHECK(j["summary"]["all_residuals_pass"] == true);
    CHECK(j["summary"]["source"] == "analytic");
    CHECK(j["config"]["coin"] == "custom");
    for (const auto& row : j["rows"]) CHECK(row["residual"].get<double>() <= 1e-9);
}

TEST_CASE("spectrum falls back to the dense oracle with a warning") {
    const auto j = run_json({"spectrum", "--d", "4", "--q", "2", "--theta", "0.3"});
    CHECK(j["summary"]["source"] == "numerical");
    CHECK(j["warnings"].size() == 1);
    CHECK(j["rows"].size() == 8);
}

TEST_CASE("pure shift spectrum on two sites") {
    const auto j = run_json({"spectrum", "--d", "2", "--q", "0", "--theta", "0"});
    REQUIRE(j["rows"].size() == 4);
    for (const auto& row : j["rows"]) {
        CHECK(std::abs(row["eigenvalue_im"].get<double>()) < 1e-15);
        CHECK(std::abs(std::abs(row["eigenvalue_re"].get<double>()) - 1.0) < 1e-15);
    }
}

TEST_CASE("overlaps") {
    auto j = run_json({"overlaps", "--d", "31", "--q", "1", "--q-prime", "7"});
    CHECK(j["rows"].size() == 62 * 62);
    CHECK(j["summary"]["bound_satisfied"] == true);
    double worst = 0;
    for (const auto& row : j["rows"]) worst = std::max(worst, row["overlap_sq"].get<double>());
    CHECK(worst <= 1.0 / 31 + 1e-10);

    j = run_json({"overlaps", "--d", "33", "--q", "1", "--q-prime", "7"});
    CHECK(j["summary"]["bound_satisfied"] == false);
    CHECK(j["summary"]["violation_count"].get<int>() > 0);

    CHECK(run({"overlaps", "--d", "31", "--q", "3", "--q-prime", "34", "--output", "-"}).code == kExitUsage);

    j = run_json({"overlaps", "--d", "257", "--q", "1", "--q-prime", "2"});
    CHECK(j["rows"].size() == 100);
    CHECK(j["summary"]["grid_truncated"] == true);
}

TEST_CASE("dynamics") {
    auto j = run_json({"dynamics", "--d", "101", "--scenario", "left", "--steps", "200", "--switch-step", "100"});
    CHECK(j["rows"].size() == 201);
    for (const auto& row : j["rows"]) {
        if (row["step"].get<int>() < 100) CHECK(row["tv"].get<double>() < 1e-10);
        CHECK(row["p"].size() == 101);
    }
    CHECK(j["summary"]["max_tv"].get<double>() > 0.01);

    j = run_json({"dynamics", "--d", "7", "--steps", "0"});
    REQUIRE(j["rows"].size() == 1);
    CHECK(j["rows"][0]["tv"].get<double>() < 1e-15);

    j = run_json({"dynamics", "--d", "9", "--scenario", "constant", "--steps", "50"});
    CHECK(j["config"]["q"] == 0);
    CHECK(j["summary"]["max_tv"].get<double>() < 1e-10);

    j = run_json({"dynamics", "--d", "9", "--scenario", "custom", "--schedule", "5:0,5:2", "--steps", "10",
                  "--record-every", "5"});
    CHECK(j["rows"].size() == 3);
    CHECK(j["rows"][2]["q"] == 2);

    CHECK(run({"dynamics", "--d", "9", "--scenario", "custom", "--schedule", "5:0", "--steps", "10", "--output", "-"})
              .code == kExitUsage);
    CHECK(run({"dynamics", "--scenario", "sideways"}).code == kExitUsage);
}

TEST_CASE("dirac") {
    auto j = run_json({"dirac", "--m", "1", "--mu", "1", "--mu-prime", "0", "--k", "0", "--k-prime", "1"});
    CHECK(j["summary"]["within_bound"] == true);
    CHECK(j["summary"]["converged"] == true);
    CHECK(j["rows"].back()["error"].get<double>() < 1e-3);

    j = run_json({"dirac", "--band", "1", "--band-prime", "-1", "--k", "0", "--k-prime", "0"});
    CHECK(j["summary"]["closed_abs"].get<double>() < 1e-15);

    const auto closed = run_json({"dirac"})["summary"]["closed_abs"];
    j = run_json({"dirac", "--window", "0"});
    REQUIRE(j["rows"].size() == 1);
    CHECK(j["rows"][0]["value_re"] == 0.0);
    CHECK(j["summary"]["closed_abs"] == closed);

    CHECK(run({"dirac", "--mu", "1", "--mu-prime", "1", "--output", "-"}).code == kExitUsage);
    CHECK(run({"dirac", "--band", "2", "--output", "-"}).code == kExitUsage);
}

TEST_CASE("sweep") {
    auto j = run_json({"sweep", "--d-list", "3-13", "--primes-only", "--pairs", "all", "--random-coins", "2"});
    CHECK(j["summary"]["violation_cells"] == 0);
    CHECK(j["rows"].size() == 3 * (3 * 2 + 5 * 4 + 7 * 6 + 11 * 10 + 13 * 12));

    j = run_json({"sweep", "--d-list", "16"});
    CHECK(std::abs(j["summary"]["global_max_overlap_sq"].get<double>() - 0.5) < 1e-6);

    j = run_json({"sweep", "--d-list", "33", "--pairs", "1:7"});
    CHECK(j["summary"]["violation_cells"] == 1);
    CHECK(j["summary"]["prime_violation_cells"] == 0);

    j = run_json({"sweep"});
    CHECK(j["rows"].empty());

    CHECK(run({"sweep", "--d-list", "1,3", "--output", "-"}).code == kExitUsage);
    CHECK(run({"sweep", "--d-list", "5", "--pairs", "1-2", "--output", "-"}).code == kExitUsage);
}

TEST_CASE("usage errors and help") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"spectrum", "--d", "abc"}).code == kExitUsage);
    CHECK(run({"spectrum", "--theta", "3", "--output", "-"}).code == kExitUsage);
    CHECK(run({"spectrum", "--coin", "pauli"}).code == kExitUsage);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("spectrum") != std::string::npos);
}

TEST_CASE("files land in the output directory and are byte-identical across runs") {
    const auto dir = scratch("files");
    for (const char* fmt : {"csv", "json", "dat"}) {
        const std::vector<std::string> args{"sweep", "--d-list", "5,7", "--random-coins", "2", "--seed", "42",
                                            "--format", fmt, "--out-dir", dir.string()};
        REQUIRE(run(args).code == 0);
        const auto path = dir / (std::string("sweep.") + fmt);
        REQUIRE(fs::exists(path));
        const auto first = slurp(path);
        auto threaded = args;
        threaded.insert(threaded.end(), {"--threads", "3"});
        REQUIRE(run(threaded).code == 0);
        CHECK(slurp(path) == first);
        CHECK(first.find("0.1.0") != std::string::npos);
    }
}

TEST_CASE("embedded config reproduces the run") {
    const auto j = run_json({"dynamics", "--d", "11", "--scenario", "right", "--steps", "30", "--switch-step", "4"});
    const RunConfig cfg = run_config_from_json(j["config"]);
    CHECK(cfg.scenario == "right");
    CHECK(cfg.switch_step == 4);
    CHECK(cfg.d == 11);
    const auto again = run_json({"dynamics", "--d", std::to_string(cfg.d), "--scenario", cfg.scenario, "--steps",
                                 std::to_string(cfg.steps), "--switch-step", std::to_string(cfg.switch_step)});
    CHECK(again.dump() == j.dump());
}

TEST_CASE("output directory from the environment and io failures") {
    const auto dir = scratch("env");
    ::setenv(kOutDirEnv, dir.string().c_str(), 1);
    const auto r = run({"spectrum", "--d", "5", "--q", "1", "--name", "five"});
    ::unsetenv(kOutDirEnv);
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "five.csv"));

    const auto blocker = dir / "file";
    std::ofstream(blocker) << "x";
    CHECK(run({"spectrum", "--d", "5", "--out-dir", (blocker / "sub").string()}).code == kExitIo);
}
