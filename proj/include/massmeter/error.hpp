#pragma once

#include <stdexcept>
#include <string>

namespace massmeter {

/// Base for every error raised by the library. `exit_code()` follows the CLI
/// convention: 1 for numerical failures, 2 for configuration problems.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual int exit_code() const noexcept { return 1; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    [[nodiscard]] int exit_code() const noexcept override { return 2; }
};

class RangeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NotAGraphError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class PreconditionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class MeshQualityError : public Error {
public:
    using Error::Error;
};

class InvalidWeightError : public Error {
public:
    using Error::Error;
};

class TaggingError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double worst_residual)
        : Error(what), worst_residual_(worst_residual) {}
    [[nodiscard]] double worst_residual() const noexcept { return worst_residual_; }

private:
    double worst_residual_;
};

} // namespace massmeter
