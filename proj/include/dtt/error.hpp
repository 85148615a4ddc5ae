#pragma once

#include <stdexcept>
#include <string>

namespace dtt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration; carries the offending field name.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Inputs at which a formula is undefined (p = 0, vanishing denominators).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an asymptotic formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed; `residual` is the last residual seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Inverse-CDF sampler was handed a non-monotone cumulative.
class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace dtt
