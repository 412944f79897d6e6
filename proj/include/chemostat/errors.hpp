#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace chemostat {

/// Invalid user-supplied configuration (bad grid bounds, sigma >= s_in, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller broke a documented precondition (length mismatch, wrong regime).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Argument outside the mathematical domain of a function (e.g. s < 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Base class for failures of the numerical schemes. Carries the step index
/// and simulated time of the failure when known.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what,
                            std::optional<std::size_t> step = std::nullopt,
                            std::optional<double> time = std::nullopt)
        : std::runtime_error(decorate(what, step, time)), step_(step), time_(time) {}

    std::optional<std::size_t> step() const noexcept { return step_; }
    std::optional<double> time() const noexcept { return time_; }

private:
    static std::string decorate(const std::string& what, std::optional<std::size_t> step,
                                std::optional<double> time) {
        std::string out = what;
        if (step) out += " [step " + std::to_string(*step) + "]";
        if (time) out += " [t = " + std::to_string(*time) + "]";
        return out;
    }

    std::optional<std::size_t> step_;
    std::optional<double> time_;
};

class NumericalBlowup : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PositivityViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularDenominator : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
public:
    NonConvergence(const std::string& what, double last_residual)
        : NumericalError(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// Population mass too small to evaluate a mass-weighted mean.
class DegeneratePopulation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chemostat
