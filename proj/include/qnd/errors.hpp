#pragma once

#include <stdexcept>
#include <string>

namespace qnd {

/// Input outside the physical domain of an operation (non-positive length, bad j, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A caller broke a precondition that the types cannot express
/// (non-unitary Jones matrix, operators on mismatched spaces, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A requested computation exceeds a configured resource cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed-step integration drifted beyond its conservation budget.
class IntegrationQualityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The linearized (macroscopic) model was asked to work below its validity floor.
class LinearizationFloorError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Conditioning on an outcome whose distribution has zero variance.
class DegenerateConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario file or override could not be read; the message carries the field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qnd
