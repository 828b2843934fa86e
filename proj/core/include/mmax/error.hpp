#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace mmax {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument or parameter outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for the given kernel family.
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

/// Config-file problem; carries the offending line number when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = -1)
      : Error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Malformed or inconsistent input data (CSV shape, dimension mismatch, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Simulation hit the point budget before its exactness bound held.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Quadrature missed the requested tolerance; carries the best estimate.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_estimate)
      : Error(what + " (estimate " + std::to_string(estimate) + ", error bound " +
              std::to_string(error_estimate) + ")"),
        estimate_(estimate),
        error_estimate_(error_estimate) {}
  double estimate() const { return estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// Site design cannot identify the parameters (e.g. all sites collinear).
class DesignDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// Least-squares coefficients incompatible with the model family; carries them.
class InfeasibleEstimateError : public Error {
 public:
  InfeasibleEstimateError(const std::string& what, const std::array<double, 3>& a)
      : Error(what + " [a = " + std::to_string(a[0]) + ", " + std::to_string(a[1]) +
              ", " + std::to_string(a[2]) + "]"),
        a_(a) {}
  const std::array<double, 3>& coefficients() const { return a_; }

 private:
  std::array<double, 3> a_;
};

/// Every site pair looked tail-independent; no estimate is possible.
class EstimationFailureError : public Error {
 public:
  using Error::Error;
};

/// Spectral density requested at (or too close to) an atom of the measure.
class AtomLocationError : public Error {
 public:
  using Error::Error;
};

/// Spectral measure is degenerate (zero displacement).
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmax
