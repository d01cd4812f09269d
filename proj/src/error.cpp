#include "aoidl/error.hpp"

namespace aoidl {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_parameter: return "invalid-parameter";
        case ErrorKind::not_stochastic: return "not-stochastic";
        case ErrorKind::not_irreducible: return "not-irreducible";
        case ErrorKind::numerical_failure: return "numerical-failure";
        case ErrorKind::non_convergence: return "non-convergence";
        case ErrorKind::invalid_partition: return "invalid-partition";
        case ErrorKind::domain_error: return "domain-error";
        case ErrorKind::unknown_axis: return "unknown-axis";
        case ErrorKind::invalid_config: return "invalid-config";
        case ErrorKind::parse_error: return "parse-error";
        case ErrorKind::io_error: return "io-error";
    }
    return "unknown";
}

}  // namespace aoidl
