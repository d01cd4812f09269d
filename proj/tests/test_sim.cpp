#include <doctest.h>

#include <cmath>

#include "aoidl/error.hpp"
#include "aoidl/sim.hpp"

using namespace aoidl;

namespace {

SimConfig base_config(double lambda, int d, std::uint64_t slots = 200'000) {
    SimConfig cfg;
    cfg.params = reference_scenario(-5.0, 0.5, 0.5, lambda, d);
    cfg.slots = slots;
    cfg.warmup_slots = slots / 10;
    cfg.seed = 42;
    return cfg;
}

const SuccessProbs kPerfect{.p_1_solo = 1.0, .p_1_joint = 1.0, .p_2_solo = 1.0, .p_2_joint = 1.0};

}  // namespace

TEST_CASE("no traffic means no drops and an idle queue") {
    const auto r = simulate(base_config(0.0, 3));
    CHECK(r.drop_rate == 0.0);
    CHECK(r.throughput == 0.0);
    CHECK(r.busy_prob == 0.0);
    CHECK(r.per_packet_drop_prob == 0.0);
}

TEST_CASE("perfect channel with full access") {
    auto cfg = base_config(0.6, 2);
    cfg.params.q1 = 1.0;
    cfg.params.q2 = 1.0;
    cfg.success_override = kPerfect;
    const auto r = simulate(cfg);
    CHECK(r.drop_rate == 0.0);
    CHECK(r.aoi_average == 1.0);
    CHECK(r.aoi_violation[1] == 0.0);
}

TEST_CASE("counting identity") {
    for (int d : {1, 3, 6}) {
        for (double lambda : {0.2, 0.9}) {
            const auto c = run_replication(base_config(lambda, d, 50'000), 7);
            CHECK(c.total_arrivals == c.total_deliveries + c.total_drops + c.residual_queue);
            CHECK(c.residual_queue <= static_cast<std::uint64_t>(d));
            std::uint64_t visits = 0;
            for (auto v : c.state_visits) visits += v;
            CHECK(visits == c.measured_slots);
        }
    }
}

TEST_CASE("decoupled AoI histogram follows the geometric law") {
    auto cfg = base_config(0.5, 3, 1'000'000);
    cfg.mode = SimMode::decoupled;
    const auto r = simulate(cfg);
    const double mu2 = analyze(cfg.params).mu2;
    double total = 0.0;
    for (std::size_t i = 1; i < r.aoi_histogram.size(); ++i) total += static_cast<double>(r.aoi_histogram[i]);
    double tv = 0.0;
    double covered = 0.0;
    for (std::size_t i = 1; i < r.aoi_histogram.size(); ++i) {
        const double pmf = mu2 * std::pow(1.0 - mu2, static_cast<double>(i) - 1.0);
        covered += pmf;
        tv += std::abs(static_cast<double>(r.aoi_histogram[i]) / total - pmf);
    }
    tv = 0.5 * (tv + (1.0 - covered));
    CHECK(tv < 0.01);
    CHECK(r.aoi_average == doctest::Approx(1.0 / mu2).epsilon(0.01));
}

TEST_CASE("seeded runs are reproducible") {
    auto cfg = base_config(0.5, 3, 50'000);
    cfg.replications = 3;
    const auto a = simulate_detailed(cfg);
    const auto b = simulate_detailed(cfg);
    CHECK(a.report.drop_rate == b.report.drop_rate);
    CHECK(a.report.aoi_average == b.report.aoi_average);
    CHECK(a.report.aoi_histogram == b.report.aoi_histogram);
    CHECK(a.counters.transition_counts == b.counters.transition_counts);
    cfg.seed = 43;
    CHECK(simulate(cfg).aoi_histogram != a.report.aoi_histogram);
}

TEST_CASE("replication seeds are seed + r") {
    auto cfg = base_config(0.5, 3, 20'000);
    cfg.replications = 2;
    const auto merged = simulate_detailed(cfg).counters;
    auto expect = run_replication(cfg, cfg.seed);
    expect.merge(run_replication(cfg, cfg.seed + 1));
    CHECK(merged.aoi_histogram == expect.aoi_histogram);
    CHECK(merged.drops == expect.drops);
}

TEST_CASE("confidence intervals") {
    auto cfg = base_config(0.5, 3, 20'000);
    CHECK(std::isnan(simulate(cfg).aoi_average_ci));
    cfg.replications = 8;
    const auto r = simulate(cfg);
    CHECK(r.aoi_average_ci > 0.0);
    CHECK(r.drop_rate_ci > 0.0);
    CHECK(r.aoi_violation_ci.size() == kViolationHorizon + 1);
}

TEST_CASE("occupancy against the stationary vector") {
    const auto idle = occupancy_vs_stationary(base_config(0.0, 3, 20'000));
    REQUIRE(idle.empirical.size() == 4);
    CHECK(idle.empirical[0] == 1.0);
    CHECK(idle.max_deviation == doctest::Approx(0.0).epsilon(1e-12));

    auto cfg = base_config(0.4, 1, 500'000);
    cfg.params.q1 = 1.0;
    cfg.success_override = SuccessProbs{.p_1_solo = 0.9, .p_1_joint = 0.9, .p_2_solo = 0.8, .p_2_joint = 0.5};
    const auto occ = occupancy_vs_stationary(cfg);
    CHECK(occ.analytical[0] == doctest::Approx(0.6));
    CHECK(occ.empirical[0] == doctest::Approx(0.6).epsilon(0.01));
    CHECK(occ.max_deviation < 0.005);

    auto decoupled = base_config(0.4, 1, 1000);
    decoupled.mode = SimMode::decoupled;
    CHECK_THROWS_AS(occupancy_vs_stationary(decoupled), Error);
}

TEST_CASE("transition frequencies") {
    auto cfg = base_config(0.5, 3, 400'000);
    const auto check = transition_frequency_check(cfg);
    CHECK(check.all_passed);
    CHECK(check.insufficient.empty());

    auto sure = base_config(0.5, 3, 100'000);
    sure.params.q1 = 1.0;
    sure.success_override = kPerfect;
    const auto served = transition_frequency_check(sure, 100);
    for (const auto& cell : served.cells) {
        if (cell.from == 1 && cell.to == 2) CHECK(cell.empirical == 0.0);
    }

    // With lambda = 1 the queue is never empty.
    auto full = base_config(1.0, 3, 50'000);
    const auto saturated = transition_frequency_check(full);
    REQUIRE_FALSE(saturated.insufficient.empty());
    CHECK(saturated.insufficient.front() == 0);
}

TEST_CASE("invalid simulation settings") {
    auto cfg = base_config(0.5, 3);
    cfg.slots = 0;
    CHECK_THROWS_AS(simulate(cfg), Error);
    cfg = base_config(0.5, 3);
    cfg.replications = 0;
    CHECK_THROWS_AS(simulate(cfg), Error);
    CHECK(parse_sim_mode("decoupled") == SimMode::decoupled);
    CHECK_THROWS_AS(parse_sim_mode("loose"), Error);
}
