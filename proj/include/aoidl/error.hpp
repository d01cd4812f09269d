#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aoidl {

enum class ErrorKind {
    invalid_parameter,
    not_stochastic,
    not_irreducible,
    numerical_failure,
    non_convergence,
    invalid_partition,
    domain_error,
    unknown_axis,
    invalid_config,
    parse_error,
    io_error,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. Every failure raised by aoidl carries a kind so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

namespace detail {

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) {
        throw Error(kind, message);
    }
}

inline void require_probability(double value, const char* name) {
    require(value >= 0.0 && value <= 1.0, ErrorKind::invalid_parameter,
            std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
}

}  // namespace detail
}  // namespace aoidl
