#include "aoidl/markov.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "aoidl/error.hpp"

namespace aoidl {

namespace {

using Reachability = std::vector<std::vector<bool>>;

// Reflexive-transitive closure of the nonzero pattern.
Reachability reachability(const StochasticMatrix& m) {
    const std::size_t n = m.size();
    Reachability reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (m(i, j) > 0.0) reach[i][j] = true;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[k][j]) reach[i][j] = true;
            }
        }
    }
    return reach;
}

std::vector<std::size_t> recurrent_states(const Reachability& reach) {
    const std::size_t n = reach.size();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        bool closed = true;
        for (std::size_t j = 0; j < n && closed; ++j) {
            if (reach[i][j] && !reach[j][i]) closed = false;
        }
        if (closed) out.push_back(i);
    }
    return out;
}

bool single_class(const Reachability& reach, const std::vector<std::size_t>& recurrent) {
    if (recurrent.empty()) return false;
    const std::size_t root = recurrent.front();
    return std::all_of(recurrent.begin(), recurrent.end(),
                       [&](std::size_t s) { return reach[root][s]; });
}

void require_single_class(const StochasticMatrix& m) {
    if (!has_single_recurrent_class(m)) {
        throw Error(ErrorKind::not_irreducible,
                    "chain has more than one closed class; stationary distribution is not unique");
    }
}

}  // namespace

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    detail::require(entries_.rows() > 0 && entries_.rows() == entries_.cols(),
                    ErrorKind::not_stochastic, "transition matrix must be square and non-empty");
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
            const double v = entries_(i, j);
            detail::require(v >= 0.0 && v <= 1.0, ErrorKind::not_stochastic,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside [0,1]: " + std::to_string(v));
            sum += v;
        }
        detail::require(std::abs(sum - 1.0) <= kRowSumTolerance, ErrorKind::not_stochastic,
                        "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
}

double stationarity_residual(const StochasticMatrix& m, const StationaryDistribution& pi) {
    const Eigen::Map<const Eigen::RowVectorXd> row(pi.probs.data(),
                                                   static_cast<Eigen::Index>(pi.probs.size()));
    return (row * m.entries() - row).cwiseAbs().maxCoeff();
}

bool has_single_recurrent_class(const StochasticMatrix& m) {
    const auto reach = reachability(m);
    return single_class(reach, recurrent_states(reach));
}

std::size_t recurrent_period(const StochasticMatrix& m) {
    const auto reach = reachability(m);
    const auto recurrent = recurrent_states(reach);
    require_single_class(m);

    const std::size_t n = m.size();
    std::vector<bool> in_class(n, false);
    for (auto s : recurrent) in_class[s] = true;

    // BFS levels inside the class; the period is the gcd of level defects
    // over all intra-class edges.
    constexpr std::size_t unseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> level(n, unseen);
    std::deque<std::size_t> frontier{recurrent.front()};
    level[recurrent.front()] = 0;
    std::size_t period = 0;
    while (!frontier.empty()) {
        const auto u = frontier.front();
        frontier.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_class[v] || m(u, v) <= 0.0) continue;
            if (level[v] == unseen) {
                level[v] = level[u] + 1;
                frontier.push_back(v);
            } else {
                const auto lu = static_cast<long long>(level[u]);
                const auto lv = static_cast<long long>(level[v]);
                period = std::gcd(period, static_cast<std::size_t>(std::llabs(lu + 1 - lv)));
            }
        }
    }
    return period == 0 ? 1 : period;
}

StationaryDistribution stationary(const StochasticMatrix& m) {
    require_single_class(m);
    const auto n = static_cast<Eigen::Index>(m.size());

    Eigen::MatrixXd system = m.entries().transpose() - Eigen::MatrixXd::Identity(n, n);
    system.row(0).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(0) = 1.0;
    const Eigen::VectorXd solution = system.fullPivLu().solve(rhs);

    StationaryDistribution pi;
    pi.probs.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = solution(i);
        detail::require(std::isfinite(v) && v > -1e-12, ErrorKind::numerical_failure,
                        "stationary solve produced entry " + std::to_string(v));
        pi.probs[static_cast<std::size_t>(i)] = std::max(v, 0.0);
    }
    const double total = std::accumulate(pi.probs.begin(), pi.probs.end(), 0.0);
    for (auto& p : pi.probs) p /= total;

    const double residual = stationarity_residual(m, pi);
    detail::require(residual < 1e-10, ErrorKind::numerical_failure,
                    "stationary residual too large: " + std::to_string(residual));
    return pi;
}

StationaryDistribution stationary_power_iteration(const StochasticMatrix& m,
                                                  std::size_t max_steps, double tol) {
    require_single_class(m);
    if (recurrent_period(m) != 1) {
        throw Error(ErrorKind::non_convergence, "power iteration does not converge on a periodic chain");
    }
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::RowVectorXd current = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (std::size_t step = 0; step < max_steps; ++step) {
        Eigen::RowVectorXd next = current * m.entries();
        next /= next.sum();
        const double change = (next - current).cwiseAbs().maxCoeff();
        current = std::move(next);
        if (change < tol) {
            return StationaryDistribution{{current.data(), current.data() + n}};
        }
    }
    throw Error(ErrorKind::non_convergence,
                "power iteration did not converge within " + std::to_string(max_steps) + " steps");
}

}  // namespace aoidl
