#pragma once

// Rayleigh block-fading SINR link model for the two-user uplink.
//
// The received power of user i is h_i * s_i with h_i exponential of mean v_i
// and s_i = P_tx * r^-alpha. A transmission succeeds iff SINR >= threshold.

namespace aoidl {

struct LinkParams {
    double tx_power_w = 0.0;
    double distance_m = 0.0;
    double path_loss_exp = 0.0;
    double fading_scale = 1.0;
    double sinr_threshold = 0.0;  // linear ratio

    void validate() const;
};

struct ReceiverParams {
    double noise_power_w = 0.0;

    void validate() const;
};

/// Per-slot success probabilities of both users, alone and under interference.
struct SuccessProbs {
    double p_1_solo = 0.0;   // user 1 transmits alone
    double p_1_joint = 0.0;  // user 1 while user 2 also transmits
    double p_2_solo = 0.0;
    double p_2_joint = 0.0;

    void validate() const;

    friend bool operator==(const SuccessProbs&, const SuccessProbs&) = default;
};

enum class MprClass { weak, strong };

const char* to_string(MprClass c);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

/// s = P_tx * r^(-alpha), in watts.
double received_power_factor(const LinkParams& link);

/// exp(-gamma * eta / (v * s)).
double success_prob_solo(const LinkParams& link, const ReceiverParams& rx);

/// Success probability of `link` while `interferer` transmits in the same slot.
double success_prob_joint(const LinkParams& link, const LinkParams& interferer,
                          const ReceiverParams& rx);

SuccessProbs success_probs(const LinkParams& link1, const LinkParams& link2,
                           const ReceiverParams& rx);

/// Multi-packet-reception strength: P_{1/1,2}/P_{1/1} + P_{2/2,1}/P_{2/2}.
/// The receiver is classified strong when the value exceeds one.
double mpr_strength(const SuccessProbs& sp);

MprClass classify_mpr(double delta);

}  // namespace aoidl
