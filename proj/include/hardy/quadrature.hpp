#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hardy/core.hpp"
#include "hardy/errors.hpp"
#include "hardy/radial_function.hpp"

namespace hardy {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  /// Cap on the number of Gauss-Kronrod panels per adaptive integral.
  int max_subdivisions = 2000;
  /// Below this radius the integral is taken level by level in s = -ln r.
  double log_substitution_cut = 0.1;
  /// Number of dyadic levels scanned before an endpoint integral gives up.
  int max_levels = 1000;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  double l1 = 0.0;     // integral of |g|, for error budgets
  bool converged = true;
  int evaluations = 0;
};

using ScalarFn = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (21 point) on a finite interval whose
/// integrand is finite at both ends. Intervals spanning many decades are
/// split geometrically first. Never throws on non-convergence; check
/// QuadResult::converged.
QuadResult integrate_adaptive(const ScalarFn& g, double a, double b, const QuadratureSpec& spec,
                              std::span<const double> breakpoints = {});

/// Integral over (0, b] with a possibly singular but integrable endpoint at 0.
/// Throws DivergenceError when the scan shows the tail does not converge.
QuadResult integrate_from_origin(const ScalarFn& g, double b, const QuadratureSpec& spec,
                                 std::span<const double> breakpoints = {});

/// Integral over [a, b) with a possibly singular endpoint at b.
QuadResult integrate_to_endpoint(const ScalarFn& g, double a, double b, const QuadratureSpec& spec,
                                 std::span<const double> breakpoints = {});

/// |S^{N-1}| * int_a^b g(r) r^{tau_+} r^{N-1} dr, the radial form of int g dmu.
/// Throws ToleranceError or DivergenceError.
QuadResult integrate_weighted(const HardyParams& p, const RadialFunction& g, double a, double b,
                              const QuadratureSpec& spec = {});

/// Lebesgue counterpart: |S^{N-1}| * int_a^b g(r) r^{N-1} dr.
QuadResult integrate_lebesgue(int dim, const RadialFunction& g, double a, double b,
                              const QuadratureSpec& spec = {});

struct WeightedNorm {
  bool finite = true;
  double value = 0.0;
  double error = 0.0;
  DivergenceFit divergence;  // populated when finite == false
};

/// int_{B_R} |f| dmu, or divergence evidence at the origin or at r = R.
WeightedNorm weighted_l1_norm(const HardyParams& p, const RadialFunction& f, double R,
                              const QuadratureSpec& spec = {});

/// int_{B_R} |f| (R - |x|) dmu.
WeightedNorm rho_weighted_l1_norm(const HardyParams& p, const RadialFunction& f, double R,
                                  const QuadratureSpec& spec = {});

}  // namespace hardy
