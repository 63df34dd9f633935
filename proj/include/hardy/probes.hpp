#pragma once

#include <span>
#include <vector>

#include "hardy/core.hpp"
#include "hardy/fit.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/radial_function.hpp"
#include "hardy/radial_solver.hpp"

namespace hardy {

struct SourceClass {
  bool f1_finite = false;
  double f1_value = 0.0;        // int |f| dmu over B_R when finite
  DivergenceFit f1_divergence;  // evidence when not
  /// f(r) r^{2 - tau_-} -> 0 along r = 10^{-j}.
  bool cond_413 = false;
  double cond_413_slope = 0.0;  // d ln|f r^{2-tau_-}| / d ln r near 0
  bool f2_divergent = false;
};

/// Integrability class of a source at the origin. Signed f is classified
/// through |f|. Throws Inconclusive when the quadrature can settle neither way.
SourceClass classify_source(const HardyParams& p, const RadialFunction& f, double R,
                            const QuadratureSpec& spec = {});

struct ExhaustionSeries {
  std::vector<int> n;
  std::vector<double> values;  // u_n(x0)
  GrowthComparison growth;
  /// Epsilon-extrapolated limit over the doubling subsequence 4, 8, 16, ...
  LimitEstimate limit;
  bool divergent_source = false;
};

/// Solves on the annuli 1/n < r < R with zero inner data and records u_n(x0).
/// Throws ProbeFailure when a source certified as (f2) yields a bounded fit.
ExhaustionSeries nonexistence_probe(const HardyParams& p, const RadialFunction& f, double x0_radius, int n_max,
                                    double R = 1.0, const SolverOptions& opts = {});

/// round(4 * 2^{k/4}) up to n_max, without repeats.
std::vector<int> exhaustion_grid(int n_max);

struct OscillationReport {
  std::vector<double> zero_locations;  // decreasing radii
  std::vector<double> consecutive_ratios;
  double predicted_ratio = 0.0;  // exp(pi / sqrt(mu0 - mu))
};

/// Zeros of the radial homogeneous solution r^{(2-N)/2} cos(sqrt(mu0-mu) ln r)
/// on (r_min, r_max), found by integrating the Euler equation in t = ln r.
/// Throws WrongRegime when mu >= mu0.
OscillationReport sub_hardy_probe(int dim, double mu, double r_max, double r_min);

struct EigenCurve {
  std::vector<double> eps;
  std::vector<double> lambda1;
  double hardy_constant = 0.0;  // (N-2)^2 / (4 a0)
  bool strictly_decreasing = false;
  bool above_hardy = false;
};

/// Principal radial eigenvalue of -Delta u = lambda a0 |x|^{-2} u on the annulus
/// eps < |x| < 1 with Dirichlet data, by shooting and bisection.
EigenCurve eigen_scan(int dim, double a0, std::span<const double> eps_list);

}  // namespace hardy
