#include <doctest.h>

#include <random>

#include "aoidl/error.hpp"
#include "aoidl/markov.hpp"

using namespace aoidl;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an exception");
    return ErrorKind::invalid_parameter;
}

StochasticMatrix random_chain(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            m(i, j) = u(rng) + 1e-3;
            sum += m(i, j);
        }
        m.row(i) /= sum;
    }
    return StochasticMatrix(m);
}

}  // namespace

TEST_CASE("two-state chain") {
    Eigen::MatrixXd m(2, 2);
    m << 0.9, 0.1, 0.5, 0.5;
    const StochasticMatrix p(m);
    const auto pi = stationary(p);
    CHECK(pi[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(stationarity_residual(p, pi) < 1e-12);
    const auto oracle = stationary_power_iteration(p);
    CHECK(oracle[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("identity on one state") {
    const StochasticMatrix p(Eigen::MatrixXd::Identity(1, 1));
    CHECK(stationary(p)[0] == 1.0);
}

TEST_CASE("transient states receive no mass") {
    Eigen::MatrixXd m(3, 3);
    m << 0.5, 0.5, 0.0,
         0.0, 0.3, 0.7,
         0.0, 0.6, 0.4;
    const StochasticMatrix p(m);
    CHECK(has_single_recurrent_class(p));
    const auto pi = stationary(p);
    CHECK(pi[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(pi[1] + pi[2] == doctest::Approx(1.0));
}

TEST_CASE("periodic chain") {
    Eigen::MatrixXd m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    const StochasticMatrix p(m);
    CHECK(recurrent_period(p) == 2);
    const auto pi = stationary(p);
    CHECK(pi[0] == doctest::Approx(0.5));
    CHECK(kind_of([&] { stationary_power_iteration(p); }) == ErrorKind::non_convergence);
}

TEST_CASE("reducible chain is rejected") {
    const StochasticMatrix p(Eigen::MatrixXd::Identity(3, 3));
    CHECK_FALSE(has_single_recurrent_class(p));
    CHECK(kind_of([&] { stationary(p); }) == ErrorKind::not_irreducible);
}

TEST_CASE("malformed matrices are rejected") {
    Eigen::MatrixXd rows(2, 2);
    rows << 0.5, 0.4, 0.5, 0.5;
    CHECK(kind_of([&] { StochasticMatrix{rows}; }) == ErrorKind::not_stochastic);
    Eigen::MatrixXd negative(2, 2);
    negative << 1.1, -0.1, 0.5, 0.5;
    CHECK(kind_of([&] { StochasticMatrix{negative}; }) == ErrorKind::not_stochastic);
    CHECK_THROWS_AS(StochasticMatrix(Eigen::MatrixXd(2, 3)), Error);
}

TEST_CASE("linear solve agrees with power iteration on random chains") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> size(2, 50);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_chain(rng, size(rng));
        const auto pi = stationary(p);
        const auto oracle = stationary_power_iteration(p);
        REQUIRE(pi.size() == p.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < pi.size(); ++i) {
            CHECK(pi[i] >= 0.0);
            CHECK(std::abs(pi[i] - oracle[i]) < 1e-9);
            sum += pi[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(stationarity_residual(p, pi) < 1e-10);
    }
}
