#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hardy/core.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/radial_function.hpp"

namespace hardy {

/// Kernel of mode l with respect to ds: u(r) = int_0^R mode_green(l, r, s) f(s) ds
/// solves the mode-l radial problem with zero boundary value and k = 0.
double mode_green(const HardyParams& p, int l, double R, double r, double s);

struct GreenOptions {
  int max_mode = 64;
  /// Truncation is accepted once the tail bound is below rel_tol |value|.
  double rel_tol = 1e-10;
};

struct KernelValue {
  double value = 0.0;       // dmu-kernel G(x,y) = K(x,y) / Gamma_mu(y)
  double lebesgue = 0.0;    // K(x,y), symmetric in (x,y)
  double tail_bound = 0.0;  // bound on |K - truncated K|
  int modes = 0;
};

/// Green kernel of the operator on B_R for N = 2, 3 by zonal series. The
/// classical (mu = 0) kernel is subtracted mode by mode and added back in
/// closed form, so only the difference series is summed.
class GreenKernelSeries {
 public:
  GreenKernelSeries(const HardyParams& p, double R = 1.0, GreenOptions opts = {});

  const HardyParams& params() const noexcept { return p_; }
  double radius() const noexcept { return R_; }
  int max_mode() const noexcept { return opts_.max_mode; }
  const GreenOptions& options() const noexcept { return opts_; }

  /// u(x) = int G(x,y) f(y) dmu(y). Throws SingularDiagonal, DomainError,
  /// TruncationError.
  KernelValue evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// Partial sum through mode L and the bound on what the remaining modes add.
  KernelValue partial(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int L) const;

  /// The mu = 0 kernel on B_R in closed form (image charge).
  double classical(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

 private:
  struct Mode {
    double nu = 0.0;     // sqrt(mu_eff - mu0), exponent gap of mode l
    double nu0 = 0.0;    // same for mu = 0
    bool degenerate = false;
    bool degenerate0 = false;
  };
  double term(double nu, bool degenerate, double r, double s) const;
  KernelValue sum(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int L, bool adaptive) const;
  double tail(int L, double r, double s, double sin_gamma) const;

  HardyParams p_;
  double R_;
  GreenOptions opts_;
  std::vector<Mode> modes_;
};

double green_kernel(const GreenKernelSeries& gk, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// l = 0 channel of the Green operator at radius r, for any N >= 2:
/// int_0^R mode_green(p, 0, R, r, s) f(s) ds. No integrability check.
double green_radial(const HardyParams& p, double R, const RadialFunction& f, double r,
                    const QuadratureSpec& spec = {1e-11, 1e-15});

/// int G(x,y) f(|y|) dmu(y) for radial f; only the l = 0 mode survives.
/// Throws NoSolutionError when f is not in L1(dmu) on the ball.
double green_apply(const GreenKernelSeries& gk, const RadialFunction& f, const Eigen::VectorXd& x,
                   const QuadratureSpec& spec = {1e-11, 1e-15});

struct BoundSample {
  Eigen::VectorXd x, y;
  double kernel = 0.0;  // Lebesgue kernel K
  double upper = 0.0;   // envelope, without constant
  double lower = 0.0;
};

struct BoundOptions {
  std::uint64_t seed = 20240611;
  double diagonal_floor = 1e-2;
  /// Samples are drawn with radii in [inner, outer] * R.
  double inner = 1e-3;
  double outer = 0.9;
  int max_mode = 8192;
  double rel_tol = 1e-3;
  /// A sample violates the upper bound when K / upper exceeds upper_cap.
  /// The lower bound is checked only in the mu < 0 regime.
  double upper_cap = 1.0;
  double lower_cap = 1e-4;
};

struct BoundReport {
  std::vector<BoundSample> samples;
  double fitted_upper_c = 0.0;
  double fitted_lower_c = 0.0;
  bool lower_checked = false;
  int violations = 0;
  int nonpositive = 0;
};

/// Upper envelope: min-form for mu >= 0, sum-form below zero. For N = 2 the
/// |x-y|^{2-N} factor reads ln(4R/|x-y|).
double upper_envelope(const HardyParams& p, double R, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double lower_envelope(const HardyParams& p, double R, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

BoundReport check_kernel_bounds(const GreenKernelSeries& gk, int sample_count, const BoundOptions& opts = {});

}  // namespace hardy
