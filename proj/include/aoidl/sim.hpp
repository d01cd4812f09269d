#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aoidl/system.hpp"

namespace aoidl {

enum class SimMode {
    coupled,    // user 2 succeeds with P_{2/2} or P_{2/2,1} given the actual user-1 activity
    decoupled,  // user 2 succeeds i.i.d. with the analytical mu2
};

SimMode parse_sim_mode(std::string_view name);
const char* to_string(SimMode mode);

/// Ages >= this value share the last histogram bucket.
inline constexpr std::size_t kAoiHistogramCap = 1000;

struct SimConfig {
    SystemParams params;
    std::uint64_t slots = 1'000'000;
    std::uint64_t warmup_slots = 100'000;
    std::uint64_t seed = 1;
    std::uint32_t replications = 1;
    SimMode mode = SimMode::coupled;
    /// Replaces the link-budget success probabilities (e.g. a perfect channel).
    std::optional<SuccessProbs> success_override;

    void validate() const;
};

/// Raw event counts of one or more replications (measurement window only,
/// except for the `total_*` run-wide counters used by the counting identity).
struct SimCounters {
    std::uint64_t measured_slots = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t deliveries = 0;
    std::uint64_t drops = 0;
    std::uint64_t busy_slots = 0;
    std::uint64_t aoi_sum = 0;
    std::vector<std::uint64_t> aoi_histogram;     // index = age (index 0 unused)
    std::vector<std::uint64_t> state_visits;      // head-of-line age at slot start, 0..d
    std::vector<std::uint64_t> transition_counts;  // (d+1)^2, row-major from -> to

    std::uint64_t total_arrivals = 0;
    std::uint64_t total_deliveries = 0;
    std::uint64_t total_drops = 0;
    std::uint64_t residual_queue = 0;  // packets still queued after the last slot

    void merge(const SimCounters& other);
};

/// Runs one replication with the given seed.
SimCounters run_replication(const SimConfig& cfg, std::uint64_t seed);

struct SimulationReport {
    SimMode mode = SimMode::coupled;
    std::uint64_t seed = 0;
    std::uint64_t slots = 0;
    std::uint64_t warmup_slots = 0;
    std::uint32_t replications = 0;

    double drop_rate = 0.0;
    double throughput = 0.0;
    double busy_prob = 0.0;
    double per_packet_drop_prob = 0.0;
    double aoi_average = 0.0;
    std::vector<double> aoi_violation;  // x = 0..kViolationHorizon

    // 95% normal-approximation half-widths across replications; NaN with a
    // single replication.
    double drop_rate_ci = 0.0;
    double throughput_ci = 0.0;
    double busy_prob_ci = 0.0;
    double per_packet_drop_prob_ci = 0.0;
    double aoi_average_ci = 0.0;
    std::vector<double> aoi_violation_ci;

    std::vector<std::uint64_t> aoi_histogram;  // summed over replications
    std::vector<double> waiting_time_occupancy;
};

struct SimulationRun {
    SimulationReport report;
    SimCounters counters;  // merged over replications
};

/// Replication r uses seed cfg.seed + r. Replications run concurrently; the
/// result does not depend on scheduling.
SimulationRun simulate_detailed(const SimConfig& cfg);
SimulationReport simulate(const SimConfig& cfg);

struct OccupancyComparison {
    std::vector<double> empirical;
    std::vector<double> analytical;
    double max_deviation = 0.0;
};

/// Head-of-line age occupancy of a coupled run against the stationary vector.
OccupancyComparison occupancy_vs_stationary(const SimConfig& cfg);

struct TransitionCell {
    std::size_t from = 0;
    std::size_t to = 0;
    double empirical = 0.0;
    double analytical = 0.0;
    double standard_error = 0.0;
    bool passed = true;
};

struct TransitionCheck {
    std::vector<TransitionCell> cells;        // only rows with enough visits
    std::vector<std::size_t> insufficient;    // states below the visit minimum
    std::vector<std::uint64_t> visits;
    bool all_passed = true;
};

/// Empirical one-step transition frequencies of the head-of-line age process
/// vs the waiting-time matrix. A cell fails when off by more than three
/// standard errors plus 0.005.
TransitionCheck transition_frequency_check(const SimConfig& cfg,
                                           std::uint64_t min_visits = 10'000);

}  // namespace aoidl
