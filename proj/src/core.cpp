#include "hardy/core.hpp"

#include <fmt/format.h>

#include <numbers>

namespace hardy {

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::Supercritical: return "supercritical";
    case Regime::Critical: return "critical";
    case Regime::SubHardy: return "sub-hardy";
  }
  return "unknown";
}

double unit_sphere_area(int dim) {
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

HardyParams derive_params(int dim, double mu) {
  if (dim < 2) throw Error(ErrorKind::InvalidDimension, fmt::format("N = {} (need N >= 2)", dim));
  if (!std::isfinite(mu)) throw Error(ErrorKind::DomainError, "mu must be finite");

  HardyParams p;
  p.dim_ = dim;
  p.mu0_ = -0.25 * (dim - 2) * (dim - 2);
  p.sphere_area_ = unit_sphere_area(dim);

  const double gap = mu - p.mu0_;
  if (std::abs(gap) <= 1e-13 * std::max(1.0, std::abs(p.mu0_))) {
    p.mu_ = p.mu0_;
    p.regime_ = Regime::Critical;
    p.root_gap_ = 0.0;
  } else if (gap > 0.0) {
    p.mu_ = mu;
    p.regime_ = Regime::Supercritical;
    p.root_gap_ = std::sqrt(gap);
  } else {
    p.mu_ = mu;
    p.regime_ = Regime::SubHardy;
    p.root_gap_ = std::sqrt(-gap);  // oscillation frequency of the complex exponents
  }

  const double centre = -0.5 * (dim - 2);
  if (p.regime_ != Regime::SubHardy) {
    p.tau_minus_ = centre - p.root_gap_;
    p.tau_plus_ = centre + p.root_gap_;
    p.c_mu_ = p.critical() ? p.sphere_area_ : 2.0 * p.root_gap_ * p.sphere_area_;
  }
  return p;
}

HardyParams mode_params(const HardyParams& p, int l) {
  if (l < 0) throw Error(ErrorKind::DomainError, "mode index must be >= 0");
  if (l == 0) return p;
  return derive_params(p.dim(), p.mu() + static_cast<double>(l) * (l + p.dim() - 2));
}

void HardyParams::require_closed_forms(const char* what) const {
  if (regime_ == Regime::SubHardy) {
    throw Error(ErrorKind::UnsupportedRegime,
                fmt::format("{} is undefined for mu = {} < mu0 = {}", what, mu_, mu0_));
  }
}

double HardyParams::root_gap() const {
  require_closed_forms("sqrt(mu - mu0)");
  return root_gap_;
}
double HardyParams::tau_minus() const {
  require_closed_forms("tau_-");
  return tau_minus_;
}
double HardyParams::tau_plus() const {
  require_closed_forms("tau_+");
  return tau_plus_;
}
double HardyParams::c_mu() const {
  require_closed_forms("c_mu");
  return c_mu_;
}
double HardyParams::effective_dim() const {
  require_closed_forms("effective dimension");
  return dim_ + 2.0 * tau_plus_;
}

std::string HardyParams::describe() const {
  if (regime_ == Regime::SubHardy) {
    return fmt::format("N={} mu={} mu0={} regime={}", dim_, mu_, mu0_, to_string(regime_));
  }
  return fmt::format("N={} mu={} mu0={} tau-={} tau+={} c_mu={} regime={}", dim_, mu_, mu0_,
                     tau_minus_, tau_plus_, c_mu_, to_string(regime_));
}

namespace detail {
void require_positive_radius(double r, const char* what) {
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, fmt::format("{} needs r > 0 (got {})", what, r));
}
}  // namespace detail

}  // namespace hardy
