#pragma once

#include <stdexcept>
#include <string>

namespace gaussif {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model or IF parameters outside their admissible domain.
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise unusable numeric result.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Operation requested in a regime where it is not defined (e.g. a pdf for a
/// point mass).
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. a quantile level outside (0,1)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Ratio evaluated where the signal or its power vanishes.
class SignalZeroError : public Error {
 public:
  using Error::Error;
};

/// Not enough data for a statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or model description (unknown names, missing fields).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Failure during a time-axis scan; carries the offending time.
class ScanError : public Error {
 public:
  ScanError(double t, const std::string& what)
      : Error("at t=" + std::to_string(t) + ": " + what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace gaussif
