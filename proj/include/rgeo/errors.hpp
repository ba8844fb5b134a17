#pragma once
#include <stdexcept>
#include <string>

namespace rgeo {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {
    using Error::Error;
};

// Near-singular metric matrix; carries the offending condition number.
struct ConditioningError : Error {
    double condition_number;
    ConditioningError(const std::string& msg, double cond)
        : Error(msg + " (cond = " + std::to_string(cond) + ")"), condition_number(cond) {}
};

struct DegeneratePlaneError : Error {
    using Error::Error;
};

struct AmbiguousFootpointError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

// Infeasible profile budget; names the binding condition.
struct FeasibilityError : Error {
    int binding_condition;
    FeasibilityError(const std::string& msg, int condition)
        : Error(msg), binding_condition(condition) {}
};

struct ConfigurationError : Error {
    using Error::Error;
};

struct InputError : Error {
    using Error::Error;
};

struct SearchExhaustedError : Error {
    using Error::Error;
};

}  // namespace rgeo
