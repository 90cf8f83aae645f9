#pragma once

#include <stdexcept>
#include <string>

namespace saddlesim {

// Base class for all library errors. CLI maps ConfigError -> exit 1 and
// NumericError -> exit 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class InvalidSize : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnconnectableGraph : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NonFiniteInput : public NumericError {
 public:
  using NumericError::NumericError;
};

class DimensionMismatch : public NumericError {
 public:
  using NumericError::NumericError;
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, long line)
      : ConfigError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class EmptyDataset : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class TooFewSamples : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class SingleClassDataset : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InfeasibleConstants : public NumericError {
 public:
  using NumericError::NumericError;
};

class StaleReferenceCache : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotConverged : public NumericError {
 public:
  NotConverged(const std::string& what, double residual)
      : NumericError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class DegenerateVariance : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace saddlesim
