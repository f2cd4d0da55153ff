#pragma once

#include <stdexcept>
#include <string>

namespace prenorm {

struct InsufficientWindow : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

struct OutOfTable : std::domain_error {
    using std::domain_error::domain_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutsideConvergence : std::domain_error {
    using std::domain_error::domain_error;
};

struct CoefficientOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionTooLarge : std::domain_error {
    using std::domain_error::domain_error;
};

struct SIsZero : std::domain_error {
    using std::domain_error::domain_error;
};

struct UnknownFamily : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace prenorm
