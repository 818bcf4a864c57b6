#pragma once

#include <stdexcept>
#include <string>

namespace confdet {

/// Bad arguments, bad configuration, or inputs that make the request
/// meaningless (e.g. a single-environment dataset). CLI exit code 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or insufficient data: parse failures, missing cells,
/// degenerate inputs, not enough observations/environments. CLI exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failures: singular covariance, domain errors in closed-form
/// expressions. CLI exit code 4.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace confdet
