#include "aoidl/channel.hpp"

#include <cmath>
#include <string>

#include "aoidl/error.hpp"

namespace aoidl {

namespace {

void require_positive(double value, const char* name) {
    detail::require(std::isfinite(value) && value > 0.0, ErrorKind::invalid_parameter,
                    std::string(name) + " must be positive and finite, got " +
                        std::to_string(value));
}

}  // namespace

void LinkParams::validate() const {
    require_positive(tx_power_w, "tx_power");
    require_positive(distance_m, "distance");
    require_positive(path_loss_exp, "path_loss_exp");
    require_positive(fading_scale, "fading_scale");
    require_positive(sinr_threshold, "sinr_threshold");
}

void ReceiverParams::validate() const { require_positive(noise_power_w, "noise_power"); }

void SuccessProbs::validate() const {
    detail::require_probability(p_1_solo, "p_1_solo");
    detail::require_probability(p_1_joint, "p_1_joint");
    detail::require_probability(p_2_solo, "p_2_solo");
    detail::require_probability(p_2_joint, "p_2_joint");
    detail::require(p_1_joint <= p_1_solo && p_2_joint <= p_2_solo,
                    ErrorKind::invalid_parameter,
                    "joint success probability exceeds solo success probability");
}

const char* to_string(MprClass c) { return c == MprClass::strong ? "strong" : "weak"; }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double received_power_factor(const LinkParams& link) {
    link.validate();
    return link.tx_power_w * std::pow(link.distance_m, -link.path_loss_exp);
}

double success_prob_solo(const LinkParams& link, const ReceiverParams& rx) {
    rx.validate();
    const double s = received_power_factor(link);
    return std::exp(-link.sinr_threshold * rx.noise_power_w / (link.fading_scale * s));
}

double success_prob_joint(const LinkParams& link, const LinkParams& interferer,
                          const ReceiverParams& rx) {
    const double own = link.fading_scale * received_power_factor(link);
    const double other = interferer.fading_scale * received_power_factor(interferer);
    return success_prob_solo(link, rx) / (1.0 + link.sinr_threshold * other / own);
}

SuccessProbs success_probs(const LinkParams& link1, const LinkParams& link2,
                           const ReceiverParams& rx) {
    return SuccessProbs{
        .p_1_solo = success_prob_solo(link1, rx),
        .p_1_joint = success_prob_joint(link1, link2, rx),
        .p_2_solo = success_prob_solo(link2, rx),
        .p_2_joint = success_prob_joint(link2, link1, rx),
    };
}

double mpr_strength(const SuccessProbs& sp) {
    sp.validate();
    detail::require(sp.p_1_solo > 0.0 && sp.p_2_solo > 0.0, ErrorKind::domain_error,
                    "MPR strength undefined: a solo success probability is zero");
    return sp.p_1_joint / sp.p_1_solo + sp.p_2_joint / sp.p_2_solo;
}

MprClass classify_mpr(double delta) { return delta > 1.0 ? MprClass::strong : MprClass::weak; }

}  // namespace aoidl
