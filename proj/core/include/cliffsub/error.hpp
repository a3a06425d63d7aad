#pragma once

#include <stdexcept>
#include <string>

namespace cliffsub {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (generator cap, signature layout).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// API misuse, e.g. combining elements of different algebras.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Input data violating a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (eigensolver, residual above tolerance).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace cliffsub
