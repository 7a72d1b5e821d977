// errors.hpp: error kinds shared by all omstirap modules

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace omstirap {

enum class ErrorKind {
    invalid_dimension,
    out_of_range,
    invalid_argument,
    invalid_state,
    undefined_mode,
    domain,
    truncation,
    stiffness,
    diverged,
    oracle_too_large,
    undefined_steady_state,
    config,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised by the integrator; carries the last time at which the state was valid.
class IntegrationError : public Error {
public:
    IntegrationError(ErrorKind kind, const std::string& what, double last_good_time)
        : Error(kind, what), last_good_time_(last_good_time) {}

    double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

} // namespace omstirap
