#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace aoidl {

/// Dense row-stochastic matrix. Entry (from, to) is the one-step probability
/// of moving from state `from` to state `to`. Validated on construction.
class StochasticMatrix {
public:
    static constexpr double kRowSumTolerance = 1e-12;

    explicit StochasticMatrix(Eigen::MatrixXd entries);

    std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
    double operator()(std::size_t from, std::size_t to) const {
        return entries_(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to));
    }
    const Eigen::MatrixXd& entries() const { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

struct StationaryDistribution {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
    double operator[](std::size_t i) const { return probs[i]; }
};

/// ||pi P - pi||_inf
double stationarity_residual(const StochasticMatrix& m, const StationaryDistribution& pi);

/// True when the chain has exactly one closed communicating class; transient
/// states are allowed and receive zero stationary mass.
bool has_single_recurrent_class(const StochasticMatrix& m);

/// Period of the (unique) recurrent class; 1 means aperiodic.
std::size_t recurrent_period(const StochasticMatrix& m);

/// Solves (P^T - I) pi = 0 with one balance equation replaced by sum(pi) = 1.
/// Throws not-irreducible when the stationary vector is not unique and
/// numerical-failure when the residual exceeds 1e-10.
StationaryDistribution stationary(const StochasticMatrix& m);

/// Left power iteration from the uniform vector until successive iterates
/// differ by less than `tol` in the sup norm. Independent cross-check for
/// stationary(); periodic chains are rejected as non-convergent.
StationaryDistribution stationary_power_iteration(const StochasticMatrix& m,
                                                  std::size_t max_steps = 1'000'000,
                                                  double tol = 1e-14);

}  // namespace aoidl
