#pragma once

#include <stdexcept>
#include <string>

namespace logens {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or arguments (unknown column, invalid ratio, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a domain rule (malformed row, non-binary label, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not produce a usable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace logens
