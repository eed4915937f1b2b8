#pragma once

#include <stdexcept>
#include <string>

namespace noisyodds {

/// Argument outside the mathematical domain of an operation
/// (probability outside [0,1], evidence at +-infinity, epsilon outside [0,1], ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested distribution collapses to a point mass (zero-width envelope,
/// p_c at 0 or 1, zero consensus) and has no density.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No printed piecewise condition matches the supplied (p_c, epsilon).
class NoRegionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A bracketed root search found no sign change.
class NoRootError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid simulation or command configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace noisyodds
