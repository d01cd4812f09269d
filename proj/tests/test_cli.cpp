#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aoidl/cli.hpp"
#include "aoidl/report_io.hpp"

namespace fs = std::filesystem;

#ifndef AOIDL_SCENARIO_DIR
#error "AOIDL_SCENARIO_DIR must be defined"
#endif

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = aoidl::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scenario(const char* name) { return std::string(AOIDL_SCENARIO_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const char* leaf) const { return (path / leaf).string(); }
};

}  // namespace

TEST_CASE("analyze reports MPR class and writes both formats") {
    TempDir dir("aoidl_cli_analyze");
    const auto r = run({"analyze", "--scenario", scenario("strong_mpr_m5db.ini"), "--out", dir / "a"});
    CHECK(r.code == 0);
    CHECK(r.out.find("delta=1.5195") != std::string::npos);
    CHECK(r.out.find("(strong)") != std::string::npos);
    CHECK(fs::exists(dir.path / "a.csv"));
    const auto rows = aoidl::rows_from_json(slurp(dir.path / "a.json"));
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].simulation.has_value());

    const auto weak = run({"analyze", "--scenario", scenario("weak_mpr_p1db.ini"), "--out", dir / "b"});
    CHECK(weak.out.find("(weak)") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == aoidl::cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == aoidl::cli::kExitUsage);
    CHECK(run({"analyze"}).code == aoidl::cli::kExitUsage);
    CHECK(run({"--help"}).code == aoidl::cli::kExitOk);
    const auto missing = run({"analyze", "--scenario", "/nonexistent.ini"});
    CHECK(missing.code == aoidl::cli::kExitFailure);
    CHECK(missing.err.find("io-error") != std::string::npos);

    TempDir dir("aoidl_cli_codes");
    std::ofstream(dir.path / "bad.ini") << "[receiver]\nnoise_power_dbm = -100\n[system]\nq1 = 1.2\n";
    const auto bad = run({"analyze", "--scenario", dir / "bad.ini", "--out", dir / "x"});
    CHECK(bad.code == aoidl::cli::kExitFailure);
    CHECK(bad.err.find("q1") != std::string::npos);
    CHECK(run({"simulate", "--scenario", scenario("boundary_0db.ini"), "--mode", "loose"}).code ==
          aoidl::cli::kExitUsage);
}

TEST_CASE("simulate is byte-reproducible and echoes the seed") {
    TempDir dir("aoidl_cli_sim");
    const std::vector<std::string> common{"simulate", "--scenario", scenario("strong_mpr_m5db.ini"),
                                          "--slots", "50000", "--replications", "2", "--seed", "17"};
    auto a_args = common;
    a_args.insert(a_args.end(), {"--out", dir / "a"});
    auto b_args = common;
    b_args.insert(b_args.end(), {"--out", dir / "b"});
    const auto a = run(a_args);
    const auto b = run(b_args);
    CHECK(a.code == 0);
    CHECK(a.out.find("seed 17") != std::string::npos);
    CHECK(slurp(dir.path / "a.csv") == slurp(dir.path / "b.csv"));
    CHECK(slurp(dir.path / "a.json") == slurp(dir.path / "b.json"));
}

TEST_CASE("simulate with replications fills confidence intervals") {
    TempDir dir("aoidl_cli_ci");
    const auto r = run({"simulate", "--scenario", scenario("boundary_0db.ini"), "--slots", "20000",
                        "--replications", "8", "--out", dir / "s"});
    REQUIRE(r.code == 0);
    const auto rows = aoidl::rows_from_json(slurp(dir.path / "s.json"));
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].simulation.has_value());
    CHECK(rows[0].simulation->replications == 8);
    CHECK(rows[0].simulation->aoi_average_ci > 0.0);
    CHECK(rows[0].simulation->drop_rate_ci > 0.0);
}

TEST_CASE("decoupled simulation matches the closed-form AoI") {
    TempDir dir("aoidl_cli_dec");
    const auto r = run({"simulate", "--scenario", scenario("weak_mpr_p1db.ini"), "--mode", "decoupled",
                        "--out", dir / "s"});
    REQUIRE(r.code == 0);
    const auto row = aoidl::rows_from_json(slurp(dir.path / "s.json")).at(0);
    CHECK(row.simulation->aoi_average == doctest::Approx(row.analytical.aoi_average).epsilon(0.01));
}

TEST_CASE("sweep") {
    TempDir dir("aoidl_cli_sweep");
    const auto r = run({"sweep", "--scenario", scenario("strong_mpr_m5db.ini"), "--axis", "q2", "--values",
                        "0.1:0.2:0.9", "--out", dir / "sw"});
    REQUIRE(r.code == 0);
    const auto rows = aoidl::rows_from_csv(slurp(dir.path / "sw.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].axis == "q2");
    CHECK(rows[2].params.q2 == 0.5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].analytical.aoi_average < rows[i - 1].analytical.aoi_average);
    }

    CHECK(run({"sweep", "--scenario", scenario("strong_mpr_m5db.ini"), "--axis", "colour", "--values", "1"})
              .code == aoidl::cli::kExitUsage);
    CHECK(run({"sweep", "--scenario", scenario("strong_mpr_m5db.ini"), "--axis", "q1", "--values", ""}).code ==
          aoidl::cli::kExitFailure);
    CHECK(run({"sweep", "--scenario", scenario("strong_mpr_m5db.ini"), "--axis", "q1", "--values", "1.5",
               "--out", dir / "bad"})
              .code == aoidl::cli::kExitFailure);
}

TEST_CASE("output directory from the environment") {
    TempDir dir("aoidl_cli_env");
    ::setenv(aoidl::cli::kOutDirEnv, dir.path.c_str(), 1);
    const auto r = run({"analyze", "--scenario", scenario("boundary_0db.ini")});
    ::unsetenv(aoidl::cli::kOutDirEnv);
    CHECK(r.code == 0);
    CHECK(fs::exists(dir.path / "analyze.csv"));
    CHECK(fs::exists(dir.path / "analyze.json"));
}

TEST_CASE("validate on a small grid passes and catches an injected fault") {
    TempDir dir("aoidl_cli_validate");
    const std::vector<std::string> common{"validate", "--slots", "200000", "--max-scenarios", "3",
                                          "--deadlines", "1,6", "--out", dir / "v"};
    const auto ok = run(common);
    CHECK(ok.code == aoidl::cli::kExitOk);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(fs::exists(dir.path / "v.json"));

    auto faulty = common;
    faulty.insert(faulty.end(), {"--inject-fault", "negate-drop-rate"});
    const auto bad = run(faulty);
    CHECK(bad.code == aoidl::cli::kExitFailure);
    CHECK(bad.out.find("FAIL") != std::string::npos);

    CHECK(run({"validate", "--deadlines", "0,2"}).code == aoidl::cli::kExitUsage);
}
