#ifndef UNICORN_ERRORS_HPP
#define UNICORN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace unicorn {

// Bad user-supplied configuration (window too large, shape mismatch, ...).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A window whose samples carry no usable variance information.
struct degenerate_window_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pointwise estimator denominator vanished (r too close to sqrt(omega)).
struct singular_pixel_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed, truncated or version-mismatched file.
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Metric requested over an empty valid set.
struct evaluation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Loss became non-finite during training.
struct divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace unicorn

#endif
