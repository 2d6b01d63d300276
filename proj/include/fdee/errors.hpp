#pragma once

#include <stdexcept>
#include <string>

namespace fdee {

/// Argument outside the mathematical domain of an operation (non-positive
/// distance, zero time share carrying rate, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inconsistent or infeasible configuration (fairness floors, sweep values).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A closed form was asked for gains that fail the full-duplex condition
/// h_cci (1 + chi) < min(h_up, h_down).
class PreconditionViolated : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Internal numerical failure. Never expected for valid inputs.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fdee
