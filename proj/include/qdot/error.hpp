#pragma once

#include <stdexcept>
#include <string>

namespace qdot {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclasses onto its exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Bad or inconsistent run configuration (parse errors, invariant
/// violations, knot/interface misalignment, mismatched bases).
class ConfigError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Eigensolver or root-finder failure.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Fewer than two inner-localized states; no qubit can be defined.
class NoQubitError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Propagator accuracy gate tripped (norm deficit too large).
class IntegratorError : public Error {
public:
    using Error::Error;
};

}  // namespace qdot
