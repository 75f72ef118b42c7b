#pragma once

#include <stdexcept>
#include <string>

namespace calib {

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct grade_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct chart_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct eigenspace_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct immersion_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace calib
