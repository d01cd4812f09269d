#include "aoidl/aoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aoidl/error.hpp"

namespace aoidl {

void AoiParams::validate() const { detail::require_probability(update_success_prob, "mu2"); }

double aoi_pmf(const AoiParams& p, std::int64_t i) {
    p.validate();
    detail::require(i >= 1, ErrorKind::domain_error,
                    "AoI takes values >= 1, asked for " + std::to_string(i));
    const double mu = p.update_success_prob;
    return std::pow(1.0 - mu, static_cast<double>(i - 1)) * mu;
}

double average_aoi(const AoiParams& p) {
    p.validate();
    if (p.update_success_prob == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / p.update_success_prob;
}

double aoi_violation(const AoiParams& p, std::int64_t x) {
    p.validate();
    detail::require(x >= 0, ErrorKind::domain_error,
                    "violation threshold must be >= 0, got " + std::to_string(x));
    return std::pow(1.0 - p.update_success_prob, static_cast<double>(x));
}

StochasticMatrix build_aoi_matrix_truncated(const AoiParams& p, int n) {
    p.validate();
    detail::require(n >= 2, ErrorKind::invalid_parameter, "truncated AoI chain needs n >= 2");
    const double mu = p.update_success_prob;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, 0) += mu;
        m(i, std::min(i + 1, n - 1)) += 1.0 - mu;
    }
    return StochasticMatrix(std::move(m));
}

}  // namespace aoidl
