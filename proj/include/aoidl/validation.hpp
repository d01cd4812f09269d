#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aoidl/sim.hpp"
#include "aoidl/system.hpp"

namespace aoidl::validation {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string summary;
    std::vector<std::string> details;  // per-scenario lines, failures first
};

struct Options {
    std::uint64_t slots = 1'000'000;  // per replication
    std::uint32_t decoupled_replications = 4;
    std::uint32_t coupled_replications = 16;
    std::uint64_t seed = 20211;
    std::vector<double> levels{0.2, 0.5, 0.8};  // shared by q1, q2 and arrival_prob
    std::vector<int> deadlines{1, 3, 5};
    std::vector<double> sinr_thresholds_db{-5.0, 0.0, 1.0};
    std::size_t max_scenarios = 0;  // 0 keeps the whole grid
    // Test hook: flips the sign of the analytical drop rate before the
    // simulation comparisons; the suite must then fail.
    bool inject_negated_drop_rate = false;
};

/// Every (q1, q2, lambda) combination of `levels`; deadline and SINR
/// threshold are assigned in a balanced cyclic pattern so each value of each
/// factor appears equally often.
std::vector<SystemParams> scenario_grid(const Options& opts);

/// Analytical report and both simulation modes for one grid scenario.
struct ScenarioRun {
    SystemParams params;
    AnalyticalReport analytical;
    SimulationReport decoupled;
    SimulationReport coupled;
};

std::vector<ScenarioRun> run_scenarios(const Options& opts);

/// Relative-or-absolute tolerance used for analytical vs decoupled simulation.
bool within_tolerance(double simulated, double analytical);

std::string describe(const SystemParams& p);

CheckResult check_mpr_strength();                        // 1
CheckResult check_printed_matrix(std::uint64_t seed);    // 2
CheckResult check_aoi_closed_forms();                    // 3
CheckResult check_lumpability();                         // 4
CheckResult check_decoupled_agreement(const std::vector<ScenarioRun>& runs,
                                      const Options& opts);  // 5
CheckResult check_coupled_user1(const std::vector<ScenarioRun>& runs,
                                const Options& opts);        // 6
CheckResult check_coupled_aoi_and_tradeoffs(const std::vector<ScenarioRun>& runs);  // 7
CheckResult check_dtmc_empirical(const Options& opts);  // 8
CheckResult check_determinism(const Options& opts);     // 9

/// Runs checks 1..9 in order; `on_result` fires as each completes.
std::vector<CheckResult> run_all(const Options& opts,
                                 const std::function<void(const CheckResult&)>& on_result = {});

std::string verdict_json(const std::vector<CheckResult>& results);

}  // namespace aoidl::validation
