#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace catpacket {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. p <= 0
/// under a linear dispersion law).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or violated type invariant.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The requested (dispersion, barrier) combination has no transmission law.
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

/// Quadrature could not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate,
                std::optional<double> tau = std::nullopt)
      : Error(what), estimate_(estimate), tau_(tau) {}

  double estimate() const noexcept { return estimate_; }
  std::optional<double> tau() const noexcept { return tau_; }

 private:
  double estimate_;
  std::optional<double> tau_;
};

/// Sum of the initial overlaps vanished: the cat components cancel.
class DegenerateNormalizationError : public Error {
 public:
  using Error::Error;
};

/// A signal extractor did not find enough features (zero crossings, nodes).
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace catpacket
