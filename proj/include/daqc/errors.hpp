#pragma once

#include <stdexcept>
#include <string>

namespace daqc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: dimension mismatches, unknown keys, non-finite values, size caps.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class LookupError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A problem coupling has no source coupling to realize it (graph cover broken).
class SimulabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Asked for more distinct gate patterns than the alphabet holds.
class ExhaustionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// No nonnegative schedule exists for the requested synthesis.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Two computations that must agree did not; indicates a bug, not bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class SolverStallError : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

}  // namespace daqc
