#pragma once

#include <cmath>
#include <string>

#include "hardy/errors.hpp"
#include "hardy/jet.hpp"

namespace hardy {

enum class Regime {
  Supercritical,  // mu > mu0
  Critical,       // mu == mu0
  SubHardy,       // mu < mu0
};

const char* to_string(Regime regime);

/// Parameters of the operator -Delta + mu/|x|^2 in dimension N together with
/// every derived closed-form constant. Immutable once built.
class HardyParams {
 public:
  int dim() const noexcept { return dim_; }
  double mu() const noexcept { return mu_; }
  /// Hardy threshold -(N-2)^2/4.
  double mu0() const noexcept { return mu0_; }
  Regime regime() const noexcept { return regime_; }
  /// |S^{N-1}|, the area of the unit sphere.
  double sphere_area() const noexcept { return sphere_area_; }

  /// sqrt(mu - mu0); zero in the critical regime.
  double root_gap() const;
  double tau_minus() const;
  double tau_plus() const;
  /// Dirac-mass constant: 2 sqrt(mu-mu0) |S^{N-1}| above threshold, |S^{N-1}| at it.
  double c_mu() const;
  /// N + 2 tau_+, the dimension in which the dual operator is a Laplacian.
  double effective_dim() const;

  bool critical() const noexcept { return regime_ == Regime::Critical; }

  std::string describe() const;

 private:
  friend HardyParams derive_params(int dim, double mu);
  void require_closed_forms(const char* what) const;

  int dim_ = 0;
  double mu_ = 0.0;
  double mu0_ = 0.0;
  double root_gap_ = 0.0;
  double tau_minus_ = 0.0;
  double tau_plus_ = 0.0;
  double c_mu_ = 0.0;
  double sphere_area_ = 0.0;
  Regime regime_ = Regime::Supercritical;
};

/// Builds parameters for dimension N >= 2. A mu within 1e-13 of the threshold
/// is snapped onto it so the critical branch is selected deterministically.
HardyParams derive_params(int dim, double mu);

/// Parameters of the angular mode l: mu_eff = mu + l(l+N-2).
HardyParams mode_params(const HardyParams& p, int l);

double unit_sphere_area(int dim);

namespace detail {
void require_positive_radius(double r, const char* what);
}

/// Singular fundamental solution: r^{tau_-}, or -r^{tau_-} ln r at the threshold.
template <typename Scalar>
Scalar phi(const HardyParams& p, const Scalar& r) {
  using std::log;
  using std::pow;
  detail::require_positive_radius(value_of(r), "phi");
  const double tm = p.tau_minus();
  if (p.critical()) return -pow(r, tm) * log(r);
  return pow(r, tm);
}

/// Regular branch r^{tau_+}.
template <typename Scalar>
Scalar gamma_branch(const HardyParams& p, const Scalar& r) {
  using std::pow;
  detail::require_positive_radius(value_of(r), "gamma_branch");
  return pow(r, p.tau_plus());
}

/// Dirichlet solution on B_R with the singularity of phi at the origin.
template <typename Scalar>
Scalar green_ball_closed(const HardyParams& p, double R, const Scalar& r) {
  using std::log;
  using std::pow;
  detail::require_positive_radius(value_of(r), "green_ball_closed");
  if (!(R > 0.0) || value_of(r) > R * (1.0 + 1e-12)) {
    throw Error(ErrorKind::DomainError, "green_ball_closed needs 0 < r <= R");
  }
  const double tm = p.tau_minus();
  const double tp = p.tau_plus();
  if (p.critical()) return -pow(r, tm) * log(r / R);
  return pow(r, tm) - std::pow(R, tm - tp) * pow(r, tp);
}

/// Exact solution of the dual problem L*_mu xi = 1 on B_R with zero boundary data.
template <typename Scalar>
Scalar xi0_ball_closed(const HardyParams& p, double R, const Scalar& r) {
  const double n_eff = p.effective_dim();
  if (value_of(r) < 0.0 || value_of(r) > R * (1.0 + 1e-12)) {
    throw Error(ErrorKind::DomainError, "xi0_ball_closed needs 0 <= r <= R");
  }
  return (R * R - r * r) / (2.0 * n_eff);
}

}  // namespace hardy
