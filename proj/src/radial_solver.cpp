#include "hardy/radial_solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "hardy/test_function.hpp"

namespace hardy {

namespace {

struct Value2 {
  double v = 0.0;
  double d1 = 0.0;
};

// Homogeneous solutions of -(r^{d-1} u')' + mu r^{d-3} u = 0: r^sp and either
// r^sm or -r^sp ln r when the two exponents coincide.
struct Basis {
  double d = 3.0;
  double mu = 0.0;
  double sp = 0.0;
  double sm = 0.0;
  bool degenerate = false;

  Value2 regular(double r) const { return {std::pow(r, sp), sp * std::pow(r, sp - 1.0)}; }
  Value2 singular(double r) const {
    if (degenerate) {
      const double p = std::pow(r, sp);
      const double l = std::log(r);
      return {-p * l, -(sp * l + 1.0) * p / r};
    }
    return {std::pow(r, sm), sm * std::pow(r, sm - 1.0)};
  }
};

Basis hardy_basis(const HardyParams& q) {
  return {static_cast<double>(q.dim()), q.mu(), q.tau_plus(), q.tau_minus(), q.critical()};
}

// The dual operator is the Laplacian in dimension N~; its exponents are 0 and 2 - N~.
Basis dual_basis(const HardyParams& p) {
  const double n_eff = p.effective_dim();
  return {n_eff, 0.0, 0.0, 2.0 - n_eff, p.critical()};
}

Value2 combo(const Value2& x, double a, const Value2& y, double b) {
  return {a * x.v + b * y.v, a * x.d1 + b * y.d1};
}

// Variation of parameters on [a, R] with A vanishing at a (or regular at 0
// when a = 0) and B vanishing at R. The homogeneous part is hom_coef * B.
class Kernel {
 public:
  Kernel(Basis basis, RadialFunction f, double a, double R, double hom_coef, QuadratureSpec spec)
      : basis_(basis), f_(std::move(f)), a_(a), R_(R), spec_(spec) {
    if (a_ > 0.0) {
      const Value2 y1a = basis_.regular(a_);
      const Value2 y2a = basis_.singular(a_);
      a_coef_ = {y2a.v, -y1a.v};
    }
    const Value2 y1R = basis_.regular(R_);
    const Value2 y2R = basis_.singular(R_);
    b_coef_ = {y2R.v, -y1R.v};
    if (a_ == 0.0) {
      // B = y2 - (y2(R)/y1(R)) y1 keeps the coefficient of y2 equal to one.
      b_coef_ = {-y2R.v / y1R.v, 1.0};
    }
    const Value2 AR = A(R_);
    const Value2 BR = B(R_);
    wronskian_ = -std::pow(R_, basis_.d - 1.0) * AR.v * BR.d1;
    hom_coef_ = hom_coef;
    if (a_ > 0.0) hom_coef_ = hom_coef / B(a_).v;  // scale so that u(a) = hom_coef
    breakpoints_ = f_.breakpoints();
    if (std::isfinite(f_.support_radius())) breakpoints_.push_back(f_.support_radius());
  }

  Value2 A(double r) const {
    if (a_ == 0.0) return basis_.regular(r);
    return combo(basis_.regular(r), a_coef_[0], basis_.singular(r), a_coef_[1]);
  }
  Value2 B(double r) const { return combo(basis_.regular(r), b_coef_[0], basis_.singular(r), b_coef_[1]); }

  Value2 solution(double r) const {
    if (r >= R_) return {0.0, 0.0};
    const double dm1 = basis_.d - 1.0;
    const ScalarFn left = [&](double s) { return A(s).v * f_(s) * std::pow(s, dm1); };
    const ScalarFn right = [&](double s) { return B(s).v * f_(s) * std::pow(s, dm1); };
    const QuadResult i1 = a_ == 0.0 ? integrate_from_origin(left, r, spec_, breakpoints_)
                                    : integrate_adaptive(left, a_, r, spec_, breakpoints_);
    const QuadResult i2 = integrate_adaptive(right, r, R_, spec_, breakpoints_);
    check(i1, "inner kernel integral", r);
    check(i2, "outer kernel integral", r);
    const Value2 Ar = A(r);
    const Value2 Br = B(r);
    Value2 u{(Br.v * i1.value + Ar.v * i2.value) / wronskian_,
             (Br.d1 * i1.value + Ar.d1 * i2.value) / wronskian_};
    if (hom_coef_ != 0.0) {
      u.v += hom_coef_ * Br.v;
      u.d1 += hom_coef_ * Br.d1;
    }
    return u;
  }

  Jet2 jet(double r) const {
    const Value2 u = solution(r);
    const double d2 = -(basis_.d - 1.0) * u.d1 / r + basis_.mu * u.v / (r * r) - f_(r);
    return {u.v, u.d1, d2};
  }

  double relative_residual(double r) const {
    const double h = 1e-3 * r;
    for (double b : breakpoints_) {
      if (std::abs(r - b) < 3.0 * h) return 0.0;
    }
    const Value2 u = solution(r);
    auto central = [&](double step) { return (solution(r + step).d1 - solution(r - step).d1) / (2.0 * step); };
    const double u2 = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    const double t1 = (basis_.d - 1.0) * u.d1 / r;
    const double t2 = basis_.mu * u.v / (r * r);
    const double fr = f_(r);
    const double scale = std::abs(u2) + std::abs(t1) + std::abs(t2) + std::abs(fr);
    return scale > 0.0 ? std::abs(-u2 - t1 + t2 - fr) / scale : 0.0;
  }

 private:
  void check(const QuadResult& res, const char* what, double r) const {
    // Profiles are evaluated inside other integrals, so only gross failures throw.
    const double target = std::max({spec_.abs_tol, spec_.rel_tol * std::abs(res.value), 1e-15 * res.l1});
    if (!(res.error <= 100.0 * target)) {
      throw ToleranceError(fmt::format("{} at r = {} did not converge", what, r), res.value, res.error);
    }
  }

  Basis basis_;
  RadialFunction f_;
  double a_;
  double R_;
  QuadratureSpec spec_;
  std::array<double, 2> a_coef_{1.0, 0.0};
  std::array<double, 2> b_coef_{0.0, 1.0};
  double wronskian_ = 1.0;
  double hom_coef_ = 0.0;
  std::vector<double> breakpoints_;
};

RadialFunction profile_of(std::shared_ptr<const Kernel> kernel, double a, double R) {
  auto prof = RadialFunction::from_generic(
      [kernel, a](auto r) {
        using S = decltype(r);
        if constexpr (std::is_same_v<S, double>) {
          if (r < a) return 0.0;
          return kernel->solution(r).v;
        } else {
          if (r.v < a) return S(0.0);
          const Jet2 j = kernel->jet(r.v);
          return compose(r, j.v, j.d1, j.d2);
        }
      },
      R);
  return prof;
}

double residual_on_grid(const Kernel& kernel, double a, double R, int points) {
  const double lo = a > 0.0 ? a + 1e-3 * (R - a) : 1e-3 * R;
  const double hi = R * (1.0 - 1e-3);
  double worst = 0.0;
  for (int j = 0; j < points; ++j) {
    const double r = lo * std::pow(hi / lo, static_cast<double>(j) / (points - 1));
    worst = std::max(worst, kernel.relative_residual(r));
  }
  return worst;
}

RadialSolution finish(std::shared_ptr<const Kernel> kernel, const HardyParams& params, double a, double R,
                      double k, int mode, const SolverOptions& opts) {
  RadialSolution sol;
  sol.profile = profile_of(kernel, a, R);
  sol.k = k;
  sol.mode = mode;
  sol.params = params;
  sol.inner_radius = a;
  sol.outer_radius = R;
  sol.boundary_value = kernel->solution(R * (1.0 - 1e-14)).v;
  sol.residual_norm = residual_on_grid(*kernel, a, R, opts.probe_points);
  if (!(sol.residual_norm <= opts.residual_tol)) {
    throw ToleranceError(fmt::format("ODE residual {} above {}", sol.residual_norm, opts.residual_tol),
                         sol.residual_norm, opts.residual_tol);
  }
  return sol;
}

void require_radius(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorKind::DomainError, "domain radius must be positive");
}

}  // namespace

RadialSolution solve_radial_bvp(const HardyParams& p, int l, const RadialFunction& f, double R, double k,
                                const SolverOptions& opts) {
  require_radius(R);
  if (p.regime() == Regime::SubHardy) {
    throw Error(ErrorKind::UnsupportedRegime, "radial solves need mu >= mu0");
  }
  const HardyParams q = mode_params(p, l);
  const WeightedNorm norm = rho_weighted_l1_norm(q, f, R, opts.quad);
  if (!norm.finite) {
    throw NoSolutionError(
        fmt::format("source is not integrable against the weighted measure ({} growth, rate {:.4g})",
                    to_string(norm.divergence.model), norm.divergence.rate),
        norm.divergence);
  }
  auto kernel = std::make_shared<const Kernel>(hardy_basis(q), f, 0.0, R, k, opts.quad);
  return finish(kernel, q, 0.0, R, k, l, opts);
}

RadialSolution solve_dual_radial(const HardyParams& p, const RadialFunction& g, double R,
                                 const SolverOptions& opts) {
  require_radius(R);
  if (p.regime() == Regime::SubHardy) {
    throw Error(ErrorKind::UnsupportedRegime, "the dual operator needs mu >= mu0");
  }
  auto kernel = std::make_shared<const Kernel>(dual_basis(p), g, 0.0, R, 0.0, opts.quad);
  return finish(kernel, p, 0.0, R, 0.0, 0, opts);
}

RadialSolution solve_annulus(const HardyParams& p, const RadialFunction& f, double a, double R,
                             double inner_bc, const SolverOptions& opts) {
  require_radius(R);
  if (!(a > 0.0) || !(a < R)) throw Error(ErrorKind::DomainError, "annulus needs 0 < a < R");
  if (p.regime() == Regime::SubHardy) {
    throw Error(ErrorKind::UnsupportedRegime, "annulus solves need mu >= mu0");
  }
  auto kernel = std::make_shared<const Kernel>(hardy_basis(p), f, a, R, inner_bc, opts.quad);
  return finish(kernel, p, a, R, 0.0, 0, opts);
}

RadialFunction unit_mollifier(int dim, int n) {
  if (n < 1) throw Error(ErrorKind::DomainError, "mollifier index must be >= 1");
  if (dim < 2) throw Error(ErrorKind::InvalidDimension, "mollifier needs N >= 2");
  const QuadResult m0 = integrate_adaptive(
      [dim](double t) { return eta0(t) * std::pow(t, dim - 1.0); }, 0.0, 2.0, QuadratureSpec{1e-14, 1e-16},
      std::vector<double>{1.0});
  const double scale = std::pow(static_cast<double>(n), dim) / (unit_sphere_area(dim) * m0.value);
  const double nn = n;
  return RadialFunction::from_generic([scale, nn](auto r) { return scale * eta0(nn * r); }, 2.0 / nn)
      .with_breakpoints({1.0 / nn})
      .with_fd_floor(2.0 / nn);
}

RadialSolution approximate_green_mollifier(const HardyParams& p, double R, int n, const SolverOptions& opts) {
  require_radius(R);
  if (n < 1 || !(2.0 / n < R)) throw Error(ErrorKind::DomainError, "mollifier support 2/n must lie inside the ball");
  const RadialFunction delta = unit_mollifier(p.dim(), n);
  const double tp = p.tau_plus();
  auto f = RadialFunction::from_generic(
               [delta, tp](auto r) {
                 using S = decltype(r);
                 using std::pow;
                 if constexpr (std::is_same_v<S, double>) {
                   return delta(r) * pow(r, -tp);
                 } else {
                   return delta.jet(r.v) * pow(r, -tp);
                 }
               },
               2.0 / n)
               .with_breakpoints(delta.breakpoints());
  return solve_radial_bvp(p, 0, f, R, 0.0, opts);
}

SingularityEstimate extract_singularity_coefficient(const RadialSolution& sol, const HardyParams& p,
                                                    const ExtractionGrid& grid) {
  const HardyParams& q = sol.mode == 0 ? p : sol.params;
  if (q.regime() == Regime::SubHardy) throw Error(ErrorKind::UnsupportedRegime, "no Phi below mu0");
  if (sol.inner_radius > 0.0) throw Error(ErrorKind::DomainError, "extraction needs a solution on the ball");
  if (!(grid.q > 0.0 && grid.q < 1.0) || grid.levels < 3) {
    throw Error(ErrorKind::ConfigError, "extraction grid needs 0 < q < 1 and at least 3 levels");
  }
  double r0 = grid.r0 * sol.outer_radius;
  if (q.critical()) r0 = std::min(r0, 0.5);  // Phi vanishes at r = 1 on the log branch

  SingularityEstimate out;
  double scale = 0.0;
  for (int j = 0; j < grid.levels; ++j) {
    const double r = r0 * std::pow(grid.q, j);
    const double ratio = sol.profile(r) / phi(q, r);
    out.radii.push_back(r);
    out.ratios.push_back(ratio);
    scale = std::max(scale, std::abs(ratio));
  }
  if (detect_oscillation(out.ratios, 1e-9 * std::max(scale, 1e-300))) {
    throw Error(ErrorKind::NoLimit, "profile / Phi oscillates as r -> 0");
  }
  std::vector<double> seq = out.ratios;
  if (q.critical()) {
    // On the log branch profile/Phi = k + c / ln r + o(1/ln r); one elimination
    // step in x = 1/ln r removes the slowly decaying term.
    seq.clear();
    for (int j = 0; j + 1 < grid.levels; ++j) {
      const double x0 = 1.0 / std::log(out.radii[j]);
      const double x1 = 1.0 / std::log(out.radii[j + 1]);
      seq.push_back((out.ratios[j + 1] * x0 - out.ratios[j] * x1) / (x0 - x1));
    }
  }
  const LimitEstimate lim = extrapolate_limit(seq);
  out.k = lim.value;
  out.error = lim.error;
  return out;
}

}  // namespace hardy
