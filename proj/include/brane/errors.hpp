#pragma once

#include <stdexcept>
#include <string>

namespace brane {

/// Argument outside the mathematical domain of an operation (bad index, shape mismatch).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Division by a vanishing tau or h while mapping between state representations.
class SingularStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration; reported before any evolution starts.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Induced metric with non-positive determinant.
class DegenerateMetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values produced during time integration.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace brane
