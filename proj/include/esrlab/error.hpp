#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace esr {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `column` is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t column)
      : Error(message + " at column " + std::to_string(column)), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// The e-graph grew beyond its configured node budget while adding an expression.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// No finite term could be extracted from an e-class.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values or configuration file contents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incompatible data files (datasets, catalogs, logs).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace esr
