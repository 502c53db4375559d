#pragma once

#include <stdexcept>
#include <string>

namespace rgnf {

// Base of every error raised by the library. The CLI maps the subclasses
// onto exit codes (config errors -> 2, numeric failures -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ResonantInput : public Error {
 public:
  using Error::Error;
};

class NotDiagonal : public Error {
 public:
  using Error::Error;
};

class OrderOutOfRange : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, int line, int column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotAnalyticAtOrigin : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numeric failures.
class NumericError : public Error {
 public:
  using Error::Error;
};

class NonCommensurateFrequencies : public NumericError {
 public:
  using NumericError::NumericError;
};

class InversionDiverged : public NumericError {
 public:
  using NumericError::NumericError;
};

class StepUnderflow : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonFiniteState : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoReturn : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoSignChange : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace rgnf
