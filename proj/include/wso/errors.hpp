#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wso {

// Base class for every error the library reports deliberately.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Syntax error in a coefficient or map formula. `offset` is the byte
// position in the source text where the problem was detected.
struct ParseError : Error {
    ParseError(std::size_t offset, const std::string& what_arg)
        : Error("parse error at offset " + std::to_string(offset) + ": " + what_arg),
          offset(offset) {}
    std::size_t offset;
};

// Domain error during expression evaluation (ln of a non-positive value,
// sqrt of a negative value, division by zero, non-finite pow result).
struct EvalError : Error {
    using Error::Error;
};

// A constructed object failed one of its validation checks.
struct ValidationError : Error {
    using Error::Error;
};

// Config file rejected; `pointer` is the JSON pointer of the offending key.
struct ConfigError : Error {
    ConfigError(std::string pointer_arg, const std::string& what_arg)
        : Error(pointer_arg + ": " + what_arg), pointer(std::move(pointer_arg)) {}
    std::string pointer;
};

// An iterative procedure ran out of budget. This signals that a tolerance
// or iteration cap was too tight, not that the underlying quantity fails
// to exist.
struct NoConvergence : Error {
    using Error::Error;
};

// dwell_witness exhausted its search budget.
struct WitnessNotFound : Error {
    using Error::Error;
};

// An operation was invoked outside the coefficient/λ regime it requires.
struct RegimeError : Error {
    using Error::Error;
};

}  // namespace wso
