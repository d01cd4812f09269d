#include "aoidl/system.hpp"

#include <cmath>
#include <string>

#include "aoidl/aoi.hpp"
#include "aoidl/error.hpp"

namespace aoidl {

void SystemParams::validate() const {
    link1.validate();
    link2.validate();
    rx.validate();
    detail::require_probability(q1, "q1");
    detail::require_probability(q2, "q2");
    detail::require_probability(arrival_prob, "arrival_prob");
    detail::require(deadline >= 1, ErrorKind::invalid_parameter,
                    "deadline must be >= 1, got " + std::to_string(deadline));
}

SystemParams reference_scenario(double sinr_threshold_db, double q1, double q2,
                                double arrival_prob, int deadline) {
    const LinkParams link{
        .tx_power_w = 5e-3,
        .distance_m = 30.0,
        .path_loss_exp = 4.0,
        .fading_scale = 1.0,
        .sinr_threshold = db_to_linear(sinr_threshold_db),
    };
    return SystemParams{
        .link1 = link,
        .link2 = link,
        .rx = ReceiverParams{.noise_power_w = dbm_to_watts(-100.0)},
        .q1 = q1,
        .q2 = q2,
        .arrival_prob = arrival_prob,
        .deadline = deadline,
    };
}

namespace {

// Average success probability of user 1 given it transmits.
double average_success_user1(const SystemParams& params, const SuccessProbs& sp) {
    return (1.0 - params.q2) * sp.p_1_solo + params.q2 * sp.p_1_joint;
}

// Average success probability of user 2; user 1 interferes only when backlogged.
double average_success_user2(const SystemParams& params, const SuccessProbs& sp,
                             double busy_prob) {
    const double interfered = params.q1 * busy_prob;
    return (1.0 - interfered) * sp.p_2_solo + interfered * sp.p_2_joint;
}

}  // namespace

double service_prob_user1(const SystemParams& params, const SuccessProbs& sp) {
    return params.q1 * average_success_user1(params, sp);
}

double service_prob_user2(const SystemParams& params, const SuccessProbs& sp, double busy_prob) {
    detail::require_probability(busy_prob, "busy_prob");
    return params.q2 * average_success_user2(params, sp, busy_prob);
}

AnalyticalReport analyze(const SystemParams& params) {
    params.validate();
    return analyze(params, success_probs(params.link1, params.link2, params.rx));
}

AnalyticalReport analyze(const SystemParams& params, const SuccessProbs& sp) {
    params.validate();
    sp.validate();

    AnalyticalReport r;
    r.sp = sp;
    r.p1 = average_success_user1(params, sp);
    r.mu1 = service_prob_user1(params, sp);
    r.delta = mpr_strength(sp);
    r.mpr = classify_mpr(r.delta);

    r.queue = queue_metrics(QueueParams{
        .arrival_prob = params.arrival_prob,
        .service_prob = r.mu1,
        .deadline = params.deadline,
    });

    r.p2 = average_success_user2(params, sp, r.queue.busy_prob);
    r.mu2 = service_prob_user2(params, sp, r.queue.busy_prob);

    const AoiParams aoi{.update_success_prob = r.mu2};
    r.aoi_average = average_aoi(aoi);
    r.aoi_violation.reserve(kViolationHorizon + 1);
    for (int x = 0; x <= kViolationHorizon; ++x) {
        r.aoi_violation.push_back(aoi_violation(aoi, x));
    }
    return r;
}

SweepAxis parse_axis(std::string_view name) {
    if (name == "q1") return SweepAxis::q1;
    if (name == "q2") return SweepAxis::q2;
    if (name == "arrival_prob" || name == "lambda") return SweepAxis::arrival_prob;
    if (name == "deadline" || name == "d") return SweepAxis::deadline;
    if (name == "sinr_threshold_db" || name == "gamma_db") return SweepAxis::sinr_threshold_db;
    throw Error(ErrorKind::unknown_axis,
                "unknown sweep axis '" + std::string(name) +
                    "' (expected q1, q2, arrival_prob, deadline or sinr_threshold_db)");
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::q1: return "q1";
        case SweepAxis::q2: return "q2";
        case SweepAxis::arrival_prob: return "arrival_prob";
        case SweepAxis::deadline: return "deadline";
        case SweepAxis::sinr_threshold_db: return "sinr_threshold_db";
    }
    return "?";
}

SystemParams with_axis_value(SystemParams base, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::q1: base.q1 = value; break;
        case SweepAxis::q2: base.q2 = value; break;
        case SweepAxis::arrival_prob: base.arrival_prob = value; break;
        case SweepAxis::deadline:
            detail::require(value >= 1.0 && value == std::floor(value) && value < 1e6,
                            ErrorKind::invalid_parameter,
                            "deadline sweep values must be positive integers, got " +
                                std::to_string(value));
            base.deadline = static_cast<int>(value);
            break;
        case SweepAxis::sinr_threshold_db:
            base.link1.sinr_threshold = db_to_linear(value);
            base.link2.sinr_threshold = db_to_linear(value);
            break;
    }
    return base;
}

std::vector<AnalyticalReport> sweep(const SystemParams& base, SweepAxis axis,
                                    std::span<const double> values) {
    detail::require(!values.empty(), ErrorKind::invalid_parameter, "sweep needs at least one value");
    std::vector<AnalyticalReport> out;
    out.reserve(values.size());
    for (double v : values) {
        out.push_back(analyze(with_axis_value(base, axis, v)));
    }
    return out;
}

}  // namespace aoidl
