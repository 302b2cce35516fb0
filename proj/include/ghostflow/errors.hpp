#pragma once

#include <stdexcept>
#include <string>

namespace ghostflow {

// Overlapping particles (pair distance exactly zero). Clamping instead of
// failing would silently corrupt correlation statistics downstream.
struct degenerate_configuration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// NaN/Inf appeared while integrating; carries the step index in the message.
struct propagation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_ensemble_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ghostflow
