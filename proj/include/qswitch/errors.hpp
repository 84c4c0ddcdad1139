#pragma once

#include <stdexcept>
#include <string>

namespace qswitch {

/// Malformed or missing configuration input (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical input outside the domain where a model applies (exit code 3).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical contract (tolerance, conservation law) failed at run time (exit code 4).
class ContractViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qswitch
