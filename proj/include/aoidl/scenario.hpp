#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aoidl/sim.hpp"
#include "aoidl/system.hpp"

namespace aoidl {

struct SweepSpec {
    std::optional<SweepAxis> axis;
    std::vector<double> values;
    bool with_sim = false;
};

/// A scenario document. INI-style sections; every physical quantity carries
/// its unit in the key name:
///
///   [receiver]  noise_power_dbm | noise_power_w
///   [link1] / [link2]
///               tx_power_dbm | tx_power_w, distance_m, path_loss_exp,
///               fading_scale (optional, default 1),
///               sinr_threshold_db | sinr_threshold_linear
///   [system]    q1, q2, arrival_prob, deadline
///   [sim]       slots, warmup_slots, seed, replications, mode   (optional)
///   [sweep]     axis, values, with_sim                          (optional)
///
/// Unknown sections or keys are rejected.
struct Scenario {
    SystemParams params;
    SimConfig sim;
    SweepSpec sweep;
};

Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

/// "0.1,0.2,0.5" or an inclusive range "start:step:stop".
std::vector<double> parse_value_list(std::string_view text);

}  // namespace aoidl
