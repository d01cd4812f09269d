#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aoidl/channel.hpp"
#include "aoidl/deadline_queue.hpp"

namespace aoidl {

/// AoI violation probabilities are tabulated for x = 0..kViolationHorizon.
inline constexpr int kViolationHorizon = 20;

struct SystemParams {
    LinkParams link1;
    LinkParams link2;
    ReceiverParams rx;
    double q1 = 0.0;            // user-1 access probability (when backlogged)
    double q2 = 0.0;            // user-2 sample-and-transmit probability
    double arrival_prob = 0.0;  // lambda
    int deadline = 1;

    void validate() const;
};

/// The symmetric reference scenario: 5 mW, 30 m, alpha = 4, unit fading
/// scale, -100 dBm noise, both users at the given SINR threshold.
SystemParams reference_scenario(double sinr_threshold_db, double q1, double q2,
                                double arrival_prob, int deadline);

struct AnalyticalReport {
    SuccessProbs sp;
    double p1 = 0.0;
    double p2 = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double delta = 0.0;
    MprClass mpr = MprClass::weak;
    QueueMetrics queue;
    double aoi_average = 0.0;          // +inf when mu2 == 0
    std::vector<double> aoi_violation;  // index x = 0..kViolationHorizon
};

double service_prob_user1(const SystemParams& params, const SuccessProbs& sp);
double service_prob_user2(const SystemParams& params, const SuccessProbs& sp, double busy_prob);

/// Feed-forward evaluation: success probabilities, mu1, waiting-time chain,
/// Pr{Q>0}, mu2, AoI metrics. The second overload bypasses the link budget
/// and uses the supplied success probabilities.
AnalyticalReport analyze(const SystemParams& params);
AnalyticalReport analyze(const SystemParams& params, const SuccessProbs& sp);

enum class SweepAxis { q1, q2, arrival_prob, deadline, sinr_threshold_db };

SweepAxis parse_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

/// Copy of `base` with `axis` set to `value`. The SINR axis sets both links.
SystemParams with_axis_value(SystemParams base, SweepAxis axis, double value);

std::vector<AnalyticalReport> sweep(const SystemParams& base, SweepAxis axis,
                                    std::span<const double> values);

}  // namespace aoidl
