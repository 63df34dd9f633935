#include "hardy/errors.hpp"

namespace hardy {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::UnsupportedRegime: return "unsupported-regime";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::UnknownKind: return "unknown-kind";
    case ErrorKind::ToleranceNotMet: return "tolerance-not-met";
    case ErrorKind::Divergence: return "divergence-signal";
    case ErrorKind::NoSolution: return "no-solution-signal";
    case ErrorKind::NoLimit: return "no-limit-signal";
    case ErrorKind::SingularDiagonal: return "singular-diagonal";
    case ErrorKind::TruncationError: return "truncation-error";
    case ErrorKind::Inconclusive: return "inconclusive-signal";
    case ErrorKind::WrongRegime: return "wrong-regime";
    case ErrorKind::ProbeFailure: return "probe-failure";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "unknown";
}

const char* to_string(GrowthModel model) {
  switch (model) {
    case GrowthModel::Bounded: return "bounded";
    case GrowthModel::Log: return "log";
    case GrowthModel::Power: return "power";
  }
  return "unknown";
}

}  // namespace hardy
