#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "aoidl/error.hpp"
#include "aoidl/report_io.hpp"
#include "aoidl/scenario.hpp"

using namespace aoidl;

namespace {

std::string link_section(const char* name, const char* power, const char* gamma) {
    return std::string("[") + name + "]\n" + power +
           "\ndistance_m = 30\npath_loss_exp = 4\n" + gamma + "\n";
}

std::string scenario_text(const std::string& system = "q1 = 0.5\nq2 = 0.5\narrival_prob = 0.5\ndeadline = 3\n",
                          const char* power = "tx_power_w = 0.005",
                          const char* noise = "noise_power_dbm = -100",
                          const char* gamma = "sinr_threshold_db = -5") {
    return std::string("[receiver]\n") + noise + "\n" + link_section("link1", power, gamma) +
           link_section("link2", power, gamma) + "[system]\n" + system;
}

Error parse_error_of(const std::string& text) {
    try {
        parse_scenario(text, "test.ini");
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected an exception");
    return Error(ErrorKind::io_error, "");
}

}  // namespace

TEST_CASE("parse a minimal scenario") {
    const auto s = parse_scenario(scenario_text());
    CHECK(s.params.q1 == 0.5);
    CHECK(s.params.deadline == 3);
    CHECK(s.params.rx.noise_power_w == doctest::Approx(1e-13));
    CHECK(s.params.link1.fading_scale == 1.0);
    CHECK(s.params.link2.sinr_threshold == doctest::Approx(db_to_linear(-5.0)));
    CHECK(s.sim.params.q2 == 0.5);
    CHECK_FALSE(s.sweep.axis.has_value());
}

TEST_CASE("sim and sweep sections") {
    const auto s = parse_scenario(scenario_text() +
                                  "[sim]\nslots = 5000\nseed = 9\nmode = decoupled\n"
                                  "[sweep]\naxis = q2\nvalues = 0.1:0.2:0.9\nwith_sim = true\n");
    CHECK(s.sim.slots == 5000);
    CHECK(s.sim.warmup_slots == 500);
    CHECK(s.sim.seed == 9);
    CHECK(s.sim.mode == SimMode::decoupled);
    REQUIRE(s.sweep.axis.has_value());
    CHECK(*s.sweep.axis == SweepAxis::q2);
    CHECK(s.sweep.values == std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9});
    CHECK(s.sweep.with_sim);
}

TEST_CASE("out-of-range probability names the field") {
    const auto e = parse_error_of(scenario_text("q1 = 1.2\nq2 = 0.5\narrival_prob = 0.5\ndeadline = 3\n"));
    CHECK(e.kind() == ErrorKind::invalid_config);
    CHECK(std::string(e.what()).find("q1") != std::string::npos);
}

TEST_CASE("all problems are reported together") {
    const auto e = parse_error_of(scenario_text("q1 = 1.2\nq2 = -1\narrival_prob = 0.5\ndeadline = 0\n"));
    const std::string msg = e.what();
    CHECK(msg.find("q1") != std::string::npos);
    CHECK(msg.find("q2") != std::string::npos);
    CHECK(msg.find("deadline") != std::string::npos);
}

TEST_CASE("missing, unknown and conflicting keys") {
    CHECK(parse_error_of(scenario_text("q1 = 0.5\nq2 = 0.5\ndeadline = 3\n")).kind() == ErrorKind::invalid_config);
    const auto unknown = parse_error_of(scenario_text() + "colour = blue\n");
    CHECK(std::string(unknown.what()).find("colour") != std::string::npos);
    CHECK(parse_error_of(scenario_text() + "[extra]\nx = 1\n").kind() == ErrorKind::invalid_config);
    const auto conflict =
        parse_error_of(scenario_text("q1 = 0.5\nq2 = 0.5\narrival_prob = 0.5\ndeadline = 3\n",
                                     "tx_power_w = 0.005\ntx_power_dbm = 7"));
    CHECK(std::string(conflict.what()).find("tx_power") != std::string::npos);
    CHECK(parse_error_of(scenario_text("q1 = abc\nq2 = 0.5\narrival_prob = 0.5\ndeadline = 3\n")).kind() ==
          ErrorKind::invalid_config);
}

TEST_CASE("syntax errors carry the line number") {
    const auto e = parse_error_of("[receiver]\nnoise_power_dbm = -100\n[link1\n");
    CHECK(e.kind() == ErrorKind::parse_error);
    CHECK(std::string(e.what()).find("test.ini:3") != std::string::npos);
}

TEST_CASE("dBm and watts give identical reports") {
    const auto w = parse_scenario(scenario_text());
    const auto dbm = parse_scenario(scenario_text("q1 = 0.5\nq2 = 0.5\narrival_prob = 0.5\ndeadline = 3\n",
                                                  "tx_power_dbm = 6.98970004336018804786",
                                                  "noise_power_w = 1e-13"));
    const auto a = analyze(w.params);
    const auto b = analyze(dbm.params);
    CHECK(a.delta == doctest::Approx(b.delta).epsilon(1e-12));
    CHECK(a.queue.drop_rate == doctest::Approx(b.queue.drop_rate).epsilon(1e-12));
    CHECK(a.aoi_average == doctest::Approx(b.aoi_average).epsilon(1e-12));
}

TEST_CASE("missing file") {
    try {
        load_scenario("/nonexistent/scenario.ini");
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io_error);
    }
}

TEST_CASE("value lists") {
    CHECK(parse_value_list("0.1,0.2, 0.5") == std::vector<double>{0.1, 0.2, 0.5});
    CHECK(parse_value_list("1:1:4") == std::vector<double>{1, 2, 3, 4});
    CHECK(parse_value_list("0:0.1:1").size() == 11);
    CHECK(parse_value_list("0:0.1:1").back() == 1.0);
    CHECK_THROWS_AS(parse_value_list(""), Error);
    CHECK_THROWS_AS(parse_value_list("1:0:3"), Error);
    CHECK_THROWS_AS(parse_value_list("a,b"), Error);
}

namespace {

ResultRow make_row(double g, double q1, double q2, double lambda, int d, bool with_sim) {
    ResultRow row;
    row.axis = "q2";
    row.axis_value = q2;
    row.params = reference_scenario(g, q1, q2, lambda, d);
    row.analytical = analyze(row.params);
    if (with_sim) {
        SimConfig cfg;
        cfg.params = row.params;
        cfg.slots = 5000;
        cfg.warmup_slots = 100;
        cfg.replications = 2;
        row.simulation = simulate(cfg);
    }
    return row;
}

void check_same(const ResultRow& a, const ResultRow& b) {
    CHECK(a.axis == b.axis);
    CHECK(a.axis_value == b.axis_value);
    CHECK(a.params.q1 == b.params.q1);
    CHECK(a.params.deadline == b.params.deadline);
    CHECK(a.params.link1.sinr_threshold == b.params.link1.sinr_threshold);
    CHECK(a.params.rx.noise_power_w == b.params.rx.noise_power_w);
    CHECK(a.analytical.sp == b.analytical.sp);
    CHECK(a.analytical.mu1 == b.analytical.mu1);
    CHECK(a.analytical.mpr == b.analytical.mpr);
    CHECK(a.analytical.queue.stationary.probs == b.analytical.queue.stationary.probs);
    CHECK(a.analytical.queue.drop_rate == b.analytical.queue.drop_rate);
    CHECK(a.analytical.aoi_violation == b.analytical.aoi_violation);
    if (std::isinf(a.analytical.aoi_average)) {
        CHECK(std::isinf(b.analytical.aoi_average));
    } else {
        CHECK(a.analytical.aoi_average == b.analytical.aoi_average);
    }
    REQUIRE(a.simulation.has_value() == b.simulation.has_value());
    if (a.simulation) {
        const auto& s = *a.simulation;
        const auto& t = *b.simulation;
        CHECK(s.seed == t.seed);
        CHECK(s.drop_rate == t.drop_rate);
        CHECK(s.aoi_average == t.aoi_average);
        CHECK(s.aoi_average_ci == t.aoi_average_ci);
        CHECK(s.aoi_violation == t.aoi_violation);
        CHECK(s.aoi_histogram == t.aoi_histogram);
        CHECK(s.waiting_time_occupancy == t.waiting_time_occupancy);
    }
}

}  // namespace

TEST_CASE("CSV and JSON round trips") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ResultRow> rows;
    for (int i = 0; i < 12; ++i) {
        rows.push_back(make_row(-5.0 + 6.0 * u(rng), u(rng), i == 3 ? 0.0 : u(rng), u(rng), 1 + i % 5, i % 2 == 0));
    }
    const auto from_csv = rows_from_csv(rows_to_csv(rows));
    const auto from_json = rows_from_json(rows_to_json(rows));
    REQUIRE(from_csv.size() == rows.size());
    REQUIRE(from_json.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        check_same(rows[i], from_csv[i]);
        check_same(rows[i], from_json[i]);
    }
    CHECK(rows_to_csv(from_csv) == rows_to_csv(rows));
    CHECK(rows_to_json(from_json) == rows_to_json(rows));
}

TEST_CASE("unbounded AoI serialization") {
    const std::vector<ResultRow> rows{make_row(0.0, 0.5, 0.0, 0.5, 3, false)};
    CHECK(rows_to_csv(rows).find(",inf,") != std::string::npos);
    const auto json = nlohmann::json::parse(rows_to_json(rows));
    CHECK(json.at("schema_version") == 1);
    CHECK(json.at("rows").at(0).at("aoi_average") == nlohmann::json{{"unbounded", true}, {"sign", 1}});
}

TEST_CASE("CSV header is the column list") {
    const auto cols = csv_columns();
    const std::vector<ResultRow> rows{make_row(0.0, 0.5, 0.5, 0.5, 3, false)};
    const auto csv = rows_to_csv(rows);
    std::string header;
    for (std::size_t i = 0; i < cols.size(); ++i) header += (i ? "," : "") + cols[i];
    CHECK(csv.substr(0, csv.find('\n')) == header);
    CHECK_THROWS_AS(rows_from_csv("axis,bogus\n"), Error);
    CHECK_THROWS_AS(rows_from_json("{\"schema_version\":2,\"rows\":[]}"), Error);
}

TEST_CASE("numbers round-trip exactly") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, i % 20 - 10);
        CHECK(std::stod(format_number(v)) == v);
    }
}

TEST_CASE("atomic writes") {
    const auto dir = std::filesystem::temp_directory_path() / "aoidl_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.txt";
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "second");
    std::filesystem::remove_all(dir);
}
