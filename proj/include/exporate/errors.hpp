#pragma once

#include <stdexcept>
#include <string>

namespace exporate {

// Error taxonomy. Every throwing path in the library uses one of these so
// callers (and the CLI) can map failures to exit codes.

struct InvalidParamsError : std::runtime_error {
    explicit InvalidParamsError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NegativeValueError : std::invalid_argument {
    explicit NegativeValueError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct EmptyWindowError : std::runtime_error {
    explicit EmptyWindowError(const std::string& msg) : std::runtime_error(msg) {}
};

struct OverflowError : std::runtime_error {
    explicit OverflowError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResourceLimitError : std::runtime_error {
    explicit ResourceLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonPositiveWealthError : std::runtime_error {
    explicit NonPositiveWealthError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace exporate
