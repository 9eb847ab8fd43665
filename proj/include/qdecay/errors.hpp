#pragma once

#include <stdexcept>
#include <string>

namespace qdecay {

// Validation errors (bad input, bad config): CLI exit code 2.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numeric failures (iteration caps, missed poles, tolerance): CLI exit code 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct no_convergence : numeric_error {
    using numeric_error::numeric_error;
};
struct wrong_quadrant : numeric_error {
    using numeric_error::numeric_error;
};
struct missed_pole : numeric_error {
    using numeric_error::numeric_error;
};
struct degenerate_normalizer : numeric_error {
    using numeric_error::numeric_error;
};
struct window_too_short : validation_error {
    using validation_error::validation_error;
};
struct tolerance_not_met : numeric_error {
    using numeric_error::numeric_error;
};
struct grid_too_small : numeric_error {
    using numeric_error::numeric_error;
};

} // namespace qdecay
