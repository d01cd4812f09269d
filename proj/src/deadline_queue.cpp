#include "aoidl/deadline_queue.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aoidl/error.hpp"

namespace aoidl {

namespace {

// Fills rows of the waiting-time chain into `out`, offsetting the destination
// columns by `column_offset` and scaling by `weight`. Shared by the 1D and
// the 2D constructions so both carry identical arithmetic.
void add_waiting_time_rows(Eigen::MatrixXd& out, Eigen::Index row_offset, Eigen::Index column_offset,
                           double lambda, double mu, int d, double weight) {
    const double idle = 1.0 - lambda;
    auto at = [&](int from, int to) -> double& {
        return out(row_offset + from, column_offset + to);
    };

    at(0, 0) += weight * idle;
    at(0, 1) += weight * lambda;
    for (int k = 1; k < d; ++k) {
        at(k, 0) += weight * mu * std::pow(idle, k);
        for (int j = 1; j <= k; ++j) {
            at(k, j) += weight * mu * lambda * std::pow(idle, k - j);
        }
        at(k, k + 1) += weight * (1.0 - mu);
    }
    // Age d: the head leaves whether or not its last attempt succeeds.
    at(d, 0) += weight * std::pow(idle, d);
    for (int j = 1; j <= d; ++j) {
        at(d, j) += weight * lambda * std::pow(idle, d - j);
    }
}

// Clamp accumulated round-off so entries stay inside [0,1].
void clamp_unit(Eigen::MatrixXd& m) { m = m.cwiseMax(0.0).cwiseMin(1.0); }

}  // namespace

void QueueParams::validate() const {
    detail::require_probability(arrival_prob, "arrival_prob");
    detail::require_probability(service_prob, "service_prob");
    detail::require(deadline >= 1, ErrorKind::invalid_parameter,
                    "deadline must be >= 1, got " + std::to_string(deadline));
}

StochasticMatrix build_waiting_time_matrix(const QueueParams& p) {
    p.validate();
    const auto n = static_cast<Eigen::Index>(p.deadline + 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    add_waiting_time_rows(m, 0, 0, p.arrival_prob, p.service_prob, p.deadline, 1.0);
    clamp_unit(m);
    return StochasticMatrix(std::move(m));
}

QueueMetrics queue_metrics(const QueueParams& p) {
    QueueMetrics out;
    out.stationary = stationary(build_waiting_time_matrix(p));
    const auto d = static_cast<std::size_t>(p.deadline);
    out.drop_rate = out.stationary[d] * (1.0 - p.service_prob);
    out.busy_prob = 1.0 - out.stationary[0];
    out.throughput = p.arrival_prob - out.drop_rate;
    out.per_packet_drop_prob = p.arrival_prob > 0.0 ? out.drop_rate / p.arrival_prob : 0.0;
    return out;
}

std::size_t action_chain_index(int action, int age, int deadline) {
    return static_cast<std::size_t>(action * (deadline + 1) + age);
}

StochasticMatrix build_2d_action_chain(const QueueParams& p, double q2, const SuccessProbs& sp,
                                       double q1) {
    p.validate();
    sp.validate();
    detail::require_probability(q1, "q1");
    detail::require_probability(q2, "q2");

    const int d = p.deadline;
    const auto block = static_cast<Eigen::Index>(d + 1);
    const double mu_silent = q1 * sp.p_1_solo;
    const double mu_active = q1 * sp.p_1_joint;

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * block, 2 * block);
    for (int origin = 0; origin < 2; ++origin) {
        const Eigen::Index rows = origin * block;
        add_waiting_time_rows(m, rows, 0, p.arrival_prob, mu_silent, d, 1.0 - q2);
        add_waiting_time_rows(m, rows, block, p.arrival_prob, mu_active, d, q2);
    }
    clamp_unit(m);
    return StochasticMatrix(std::move(m));
}

Partition waiting_time_partition(int deadline) {
    Partition blocks;
    for (int age = 0; age <= deadline; ++age) {
        blocks.push_back({action_chain_index(0, age, deadline), action_chain_index(1, age, deadline)});
    }
    return blocks;
}

LumpabilityReport verify_lumpability(const StochasticMatrix& m, const Partition& partition,
                                     double tol) {
    const std::size_t n = m.size();
    std::vector<int> owner(n, -1);
    for (std::size_t b = 0; b < partition.size(); ++b) {
        detail::require(!partition[b].empty(), ErrorKind::invalid_partition, "empty block in partition");
        for (auto s : partition[b]) {
            detail::require(s < n, ErrorKind::invalid_partition,
                            "partition references state " + std::to_string(s) + " outside the chain");
            detail::require(owner[s] < 0, ErrorKind::invalid_partition,
                            "state " + std::to_string(s) + " appears in two blocks");
            owner[s] = static_cast<int>(b);
        }
    }
    detail::require(std::none_of(owner.begin(), owner.end(), [](int o) { return o < 0; }),
                    ErrorKind::invalid_partition, "partition does not cover every state");

    const auto k = static_cast<Eigen::Index>(partition.size());
    // mass(s, B): probability of moving from state s into block B.
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), k);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            mass(static_cast<Eigen::Index>(s), owner[t]) += m(s, t);
        }
    }

    LumpabilityReport report;
    Eigen::MatrixXd lumped(k, k);
    for (Eigen::Index b = 0; b < k; ++b) {
        const auto& members = partition[static_cast<std::size_t>(b)];
        const auto ref = static_cast<Eigen::Index>(members.front());
        lumped.row(b) = mass.row(ref);
        for (auto s : members) {
            const double spread =
                (mass.row(static_cast<Eigen::Index>(s)) - mass.row(ref)).cwiseAbs().maxCoeff();
            report.max_discrepancy = std::max(report.max_discrepancy, spread);
        }
    }
    report.lumpable = report.max_discrepancy <= tol;
    if (report.lumpable) {
        clamp_unit(lumped);
        report.lumped.emplace(std::move(lumped));
    }
    return report;
}

}  // namespace aoidl
