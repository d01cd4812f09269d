#pragma once

#include <optional>
#include <vector>

#include "aoidl/channel.hpp"
#include "aoidl/markov.hpp"

namespace aoidl {

/// User 1: Bernoulli arrivals, per-slot service probability, common deadline.
struct QueueParams {
    double arrival_prob = 0.0;
    double service_prob = 0.0;
    int deadline = 1;

    void validate() const;
};

struct QueueMetrics {
    StationaryDistribution stationary;  // head-of-line age, states 0..d
    double drop_rate = 0.0;             // drops per slot
    double per_packet_drop_prob = 0.0;  // drop_rate / arrival_prob, 0 when no traffic
    double throughput = 0.0;            // derived: arrival_prob - drop_rate
    double busy_prob = 0.0;             // 1 - pi_0
};

/// Head-of-line waiting-time chain over states 0..d. State 0 is an empty
/// queue; state k is the age of the head packet, which may be attempted at
/// ages 1..d and is dropped after a failed attempt at age d.
StochasticMatrix build_waiting_time_matrix(const QueueParams& p);

QueueMetrics queue_metrics(const QueueParams& p);

/// Index of state (action, age) in the 2D chain: action * (d + 1) + age.
std::size_t action_chain_index(int action, int age, int deadline);

/// Joint chain of (user-2 action in the most recent slot, head-of-line age).
/// The transition out of any state draws the current slot's user-2 action
/// (active w.p. q2), serves user 1 with q1*P_{1/1,2} or q1*P_{1/1}
/// accordingly and records that action in the destination state.
/// `p.service_prob` is ignored; the conditional service rates come from `sp`.
StochasticMatrix build_2d_action_chain(const QueueParams& p, double q2, const SuccessProbs& sp,
                                       double q1);

using Partition = std::vector<std::vector<std::size_t>>;

/// Blocks {(0,j), (1,j)} for j = 0..d.
Partition waiting_time_partition(int deadline);

struct LumpabilityReport {
    bool lumpable = false;
    double max_discrepancy = 0.0;  // worst within-block spread of block-entry mass
    std::optional<StochasticMatrix> lumped;
};

/// Strong-lumpability test: within every block, all states must send the same
/// total probability into every block (tolerance 1e-12).
LumpabilityReport verify_lumpability(const StochasticMatrix& m, const Partition& partition,
                                     double tol = 1e-12);

}  // namespace aoidl
