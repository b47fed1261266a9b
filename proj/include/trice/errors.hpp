#pragma once

#include <stdexcept>
#include <string>

namespace trice {

// Invalid configuration: bad shapes, incompatible layer dims, out-of-range
// hyperparameters.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure during computation (NaN/Inf in a forward or backward pass).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (IDX, checkpoint, config).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trice
