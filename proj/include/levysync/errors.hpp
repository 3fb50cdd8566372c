#pragma once

#include <stdexcept>
#include <string>

namespace levysync {

// Base for everything thrown by this library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument values: alpha outside (1,2), dt <= 0, bad horizons, ...
struct parameter_error : error {
    using error::error;
};

// Evaluation outside a path's time domain.
struct path_domain_error : error {
    using error::error;
};

// Request outside what an operation supports (infinite-activity F-channel,
// oracle called with too many jumps, vector jump channels, ...).
struct capability_error : error {
    using error::error;
};

// Iterative procedure failed its convergence contract.
struct non_convergence_error : error {
    using error::error;
};

// State blew past the divergence guard during integration.
struct divergence_error : error {
    using error::error;
};

// Malformed config or CSV input.
struct config_error : error {
    using error::error;
};

} // namespace levysync
