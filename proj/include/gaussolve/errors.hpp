// errors.hpp: exception types shared by the solver modules and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace gaussolve {

// Violated precondition on an argument (negative frequency, s <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Instability, quadrature non-convergence, eigensolver failure, internal
// consistency checks. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Covariance matrix violating V + iΩ >= 0 (ν < 1 - tol). Always a symptom of
// an inaccurate (u, v) upstream.
class PhysicalityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Malformed or inconsistent run configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int config = 2;
inline constexpr int numerical = 3;
inline constexpr int oracle_mismatch = 4;
}  // namespace exit_code

}  // namespace gaussolve
