#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

enum class ErrorKind {
  InvalidDimension,
  UnsupportedRegime,
  DomainError,
  UnknownKind,
  ToleranceNotMet,
  Divergence,
  NoSolution,
  NoLimit,
  SingularDiagonal,
  TruncationError,
  Inconclusive,
  WrongRegime,
  ProbeFailure,
  NumericFailure,
  ConfigError,
};

const char* to_string(ErrorKind kind);

/// Base exception for every failure reported by the toolkit.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// How a divergent tail integral grows as the singular endpoint is approached.
enum class GrowthModel { Bounded, Log, Power };

const char* to_string(GrowthModel model);

struct DivergenceFit {
  GrowthModel model = GrowthModel::Bounded;
  /// Log model: partial integral ~ rate * ln(1/d). Power model: ~ d^(-rate).
  /// d is the distance to the singular endpoint.
  double rate = 0.0;
  double partial_sum = 0.0;
  double closest_approach = 0.0;  // smallest distance to the endpoint sampled
  bool at_origin = true;          // false when the singular endpoint is the outer radius
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, DivergenceFit fit)
      : Error(ErrorKind::Divergence, what), fit_(fit) {}
  const DivergenceFit& fit() const noexcept { return fit_; }

 private:
  DivergenceFit fit_;
};

class ToleranceError : public Error {
 public:
  ToleranceError(const std::string& what, double estimate, double error_bound)
      : Error(ErrorKind::ToleranceNotMet, what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

class NoSolutionError : public Error {
 public:
  NoSolutionError(const std::string& what, DivergenceFit fit)
      : Error(ErrorKind::NoSolution, what), fit_(fit) {}
  const DivergenceFit& fit() const noexcept { return fit_; }

 private:
  DivergenceFit fit_;
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double estimate, double tail_bound)
      : Error(ErrorKind::TruncationError, what), estimate_(estimate), tail_bound_(tail_bound) {}
  double estimate() const noexcept { return estimate_; }
  double tail_bound() const noexcept { return tail_bound_; }

 private:
  double estimate_;
  double tail_bound_;
};

}  // namespace hardy
