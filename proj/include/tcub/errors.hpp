#pragma once

#include <stdexcept>
#include <string>

namespace tcub {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration. The CLI maps these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Failures of the numerics themselves. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class CorrelationOutOfRange : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class MissingBarriers : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnsupportedDimension : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class RankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EvaluationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonPositiveEigenvalue : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace tcub
