#pragma once

#include <stdexcept>
#include <string>

namespace reqo {

/// Base of every error raised by the library. Each subclass maps onto one
/// CLI exit code (see harness.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed an out-of-range index or an invalid parameter.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Mathematical domain violation (e.g. Chebyshev argument below -1).
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// Requested problem does not fit the desk-scale limits.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Operator applied to a state whose register layout does not support it.
class StateShapeError : public Error {
 public:
  using Error::Error;
};

/// Two independently computed quantities disagree, or a proven bound failed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, graph file or serialized oracle.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace reqo
