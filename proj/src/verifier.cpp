#include "hardy/verifier.hpp"

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hardy/green_ball.hpp"

namespace hardy {

bool IdentityResidual::within(const VerifySpec& spec) const {
  return abs_residual <= std::max(spec.rel_tol * std::abs(rhs), spec.abs_floor);
}

bool IdentityResidual::violation(const VerifySpec& spec) const {
  return !within(spec) && abs_residual > quadrature_error_budget;
}

namespace {

IdentityResidual make_residual(std::string label, double lhs, double rhs, double budget) {
  IdentityResidual out;
  out.label = std::move(label);
  out.lhs = lhs;
  out.rhs = rhs;
  out.abs_residual = std::abs(lhs - rhs);
  out.rel_residual = rhs != 0.0 ? out.abs_residual / std::abs(rhs) : out.abs_residual;
  out.quadrature_error_budget = budget;
  return out;
}

// Difference quotients carry ~1e-9 noise; tighter targets only exhaust the
// subdivision budget.
VerifySpec effective(const VerifySpec& spec) {
  VerifySpec out = spec;
  if (out.finite_difference) {
    out.quad.rel_tol = std::max(out.quad.rel_tol, 1e-9);
    out.quad.abs_tol = std::max(out.quad.abs_tol, 1e-13);
  }
  return out;
}

double dual_at_radius(const HardyParams& p, const TestFunction& xi, double r, const VerifySpec& spec) {
  return spec.finite_difference ? apply_dual_fd(p, xi, r) : apply_dual(p, xi, r);
}

// r^{tau_+ + N - 1}, the radial density of dmu without the sphere area.
double weight(const HardyParams& p, double r) { return std::pow(r, p.tau_plus() + p.dim() - 1.0); }

std::vector<double> cuts(const RadialFunction& f, double hi) {
  std::vector<double> out;
  for (double b : f.breakpoints()) {
    if (b > 0.0 && b < hi) out.push_back(b);
  }
  return out;
}

// |S^{N-1}| int_0^hi g(r) dr for a radial integrand already carrying r^{N-1}.
QuadResult radial_integral(const HardyParams& p, const ScalarFn& g, double hi, std::vector<double> breaks,
                           const QuadratureSpec& quad) {
  std::sort(breaks.begin(), breaks.end());
  QuadResult res = integrate_from_origin(g, hi, quad, breaks);
  res.value *= p.sphere_area();
  res.error *= p.sphere_area();
  res.l1 *= p.sphere_area();
  return res;
}

// int_{R^N} kernel(|x|) L*xi(x) dmu for any center, via polar coordinates
// about the origin with the axis through the center.
QuadResult kernel_pairing(const HardyParams& p, const TestFunction& xi, const std::function<double(double)>& kernel,
                          double limit, const VerifySpec& spec) {
  const double hi = std::min(limit, xi.center_distance() + xi.support);
  if (xi.centered()) {
    const ScalarFn g = [&](double r) { return kernel(r) * dual_at_radius(p, xi, r, spec) * weight(p, r); };
    return radial_integral(p, g, hi, cuts(xi.profile, hi), spec.quad);
  }

  const int N = p.dim();
  const double d = xi.center_distance();
  const double rho = xi.support;
  const Eigen::VectorXd e1 = xi.center / d;
  Eigen::VectorXd e2 = Eigen::VectorXd::Zero(N);
  e2[e1.cwiseAbs().minCoeff() == std::abs(e1[0]) ? 0 : 1] = 1.0;
  e2 -= e2.dot(e1) * e1;
  e2 /= e2.norm();
  const double ring = 2.0 * std::pow(std::numbers::pi, 0.5 * (N - 1)) / std::tgamma(0.5 * (N - 1));

  QuadratureSpec inner = spec.quad;
  inner.rel_tol = std::max(inner.rel_tol, 1e-10);
  QuadratureSpec outer = inner;
  outer.rel_tol = std::max(outer.rel_tol, 1e-9);
  const ScalarFn shell = [&](double r) {
    const double c = (r * r + d * d - rho * rho) / (2.0 * r * d);
    if (c >= 1.0) return 0.0;
    const double theta_max = c <= -1.0 ? std::numbers::pi : std::acos(c);
    const ScalarFn ang = [&](double t) {
      const Eigen::VectorXd x = r * (std::cos(t) * e1 + std::sin(t) * e2);
      return apply_dual_at(p, xi, x) * std::pow(std::sin(t), N - 2);
    };
    const double a = integrate_adaptive(ang, 0.0, theta_max, inner).value;
    return ring * a * kernel(r) * weight(p, r);
  };
  const double lo = std::max(0.0, d - rho);
  return lo > 0.0 ? integrate_adaptive(shell, lo, hi, outer) : integrate_from_origin(shell, hi, outer);
}

IdentityResidual kernel_identity(const HardyParams& p, const TestFunction& xi,
                                 const std::function<double(double)>& kernel, double limit, const VerifySpec& given,
                                 const char* name) {
  const VerifySpec spec = effective(given);
  if (p.regime() == Regime::SubHardy) {
    throw Error(ErrorKind::UnsupportedRegime, "identities need mu >= mu0");
  }
  const QuadResult lhs = kernel_pairing(p, xi, kernel, limit, spec);
  const double rhs = p.c_mu() * xi.value_at_zero();
  const double budget = lhs.error + 64 * std::numeric_limits<double>::epsilon() * lhs.l1;
  return make_residual(fmt::format("{} N={} mu={} xi={}", name, p.dim(), p.mu(), xi.name), lhs.value, rhs, budget);
}

}  // namespace

IdentityResidual verify_fundamental_identity(const HardyParams& p, const TestFunction& xi, const VerifySpec& spec) {
  return kernel_identity(
      p, xi, [&](double r) { return phi(p, r); }, std::numeric_limits<double>::infinity(), spec, "fundamental");
}

IdentityResidual verify_green_identity(const HardyParams& p, double R, const TestFunction& xi,
                                       const VerifySpec& spec) {
  if (xi.center_distance() + xi.support > R * (1 + 1e-12)) {
    throw Error(ErrorKind::DomainError, "test function must be supported in the ball");
  }
  return kernel_identity(
      p, xi, [&](double r) { return green_ball_closed(p, R, std::min(r, R)); }, R, spec, "green");
}

std::vector<IdentityResidual> verify_weak_solution(const HardyParams& p, const RadialSolution& sol,
                                                   const RadialFunction& f, double k,
                                                   std::span<const TestFunction> xis, const VerifySpec& given) {
  const VerifySpec spec = effective(given);
  const double R = sol.outer_radius;
  std::vector<IdentityResidual> out;
  for (const auto& xi : xis) {
    if (!xi.centered() || xi.support > R * (1 + 1e-12)) {
      throw Error(ErrorKind::DomainError, "weak-solution test functions must be centered in the ball");
    }
    const double hi = std::min(R, xi.support);
    auto breaks = cuts(xi.profile, hi);
    for (double b : cuts(f, hi)) breaks.push_back(b);
    const ScalarFn left = [&](double r) { return sol.profile(r) * dual_at_radius(p, xi, r, spec) * weight(p, r); };
    const ScalarFn right = [&](double r) { return f(r) * xi.profile(r) * weight(p, r); };
    const QuadResult a = radial_integral(p, left, hi, breaks, spec.quad);
    const QuadResult b = radial_integral(p, right, hi, breaks, spec.quad);
    const double rhs = b.value + p.c_mu() * k * xi.value_at_zero();
    const double eps = std::numeric_limits<double>::epsilon();
    const double budget = a.error + b.error + 64 * eps * (a.l1 + b.l1);
    out.push_back(make_residual(fmt::format("weak N={} mu={} k={} xi={}", p.dim(), p.mu(), k, xi.name), a.value,
                                rhs, budget));
  }
  return out;
}

namespace {

// Sign changes of u on (0, hi), located to machine precision.
std::vector<double> sign_changes(const RadialFunction& u, double hi) {
  std::vector<double> grid;
  for (double r = 1e-6 * hi; r < 0.05 * hi; r *= 1.25) grid.push_back(r);
  for (int i = 0; i <= 2000; ++i) grid.push_back(0.05 * hi + (0.95 * hi) * i / 2000.0 * (1 - 1e-12));
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = u(grid[i]);
    const double b = u(grid[i + 1]);
    if (a == 0.0) {
      roots.push_back(grid[i]);
      continue;
    }
    if ((a < 0) != (b < 0) && b != 0.0) {
      boost::uintmax_t iters = 100;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      const auto [lo, hi2] =
          boost::math::tools::toms748_solve([&](double r) { return u(r); }, grid[i], grid[i + 1], a, b, tol, iters);
      roots.push_back(0.5 * (lo + hi2));
    }
  }
  return roots;
}

}  // namespace

InequalityReport check_kato(const HardyParams& p, const RadialSolution& sol, const RadialFunction& f,
                            const TestFunction& xi, const VerifySpec& given) {
  const VerifySpec spec = effective(given);
  if (!xi.centered()) throw Error(ErrorKind::DomainError, "Kato check uses centered test functions");
  const double R = sol.outer_radius;
  const double hi = std::min(R, xi.support);
  auto breaks = cuts(xi.profile, hi);
  for (double b : cuts(f, hi)) breaks.push_back(b);
  for (double z : sign_changes(sol.profile, hi)) breaks.push_back(z);

  auto sgn = [](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); };
  const ScalarFn abs_l = [&](double r) {
    return std::abs(sol.profile(r)) * dual_at_radius(p, xi, r, spec) * weight(p, r);
  };
  const ScalarFn abs_r = [&](double r) { return sgn(sol.profile(r)) * f(r) * xi.profile(r) * weight(p, r); };
  const ScalarFn plus_l = [&](double r) {
    return std::max(sol.profile(r), 0.0) * dual_at_radius(p, xi, r, spec) * weight(p, r);
  };
  const ScalarFn plus_r = [&](double r) { return (sol.profile(r) > 0 ? 1.0 : 0.0) * f(r) * xi.profile(r) * weight(p, r); };

  InequalityReport rep;
  const double eps = std::numeric_limits<double>::epsilon();
  for (auto [g, slot] : {std::pair{&abs_l, &rep.lhs_abs}, {&abs_r, &rep.rhs_abs}, {&plus_l, &rep.lhs_plus},
                         {&plus_r, &rep.rhs_plus}}) {
    const QuadResult q = radial_integral(p, *g, hi, breaks, spec.quad);
    *slot = q.value;
    rep.budget += q.error + 64 * eps * q.l1;
  }
  return rep;
}

Classification classify_solution(const HardyParams& p, const RadialSolution& sol, const RadialFunction& f,
                                 const VerifySpec& spec) {
  const double R = sol.outer_radius;
  const auto est = extract_singularity_coefficient(sol, p);
  Classification out;
  out.k_hat = est.k;
  out.k_error = est.error;
  const int points = 24;
  for (int j = 0; j < points; ++j) {
    const double r = 0.1 * R * std::pow(10.0 * (1 - 1e-3), static_cast<double>(j) / (points - 1));
    const double model = out.k_hat * green_ball_closed(p, R, r) + green_radial(p, R, f, r, spec.quad);
    out.decomposition_residual = std::max(out.decomposition_residual, std::abs(sol.profile(r) - model));
  }
  return out;
}

DiracOrderReport dirac_order_check(const HardyParams& p, const RadialSolution& sol, const RadialFunction& f,
                                   const TestFunction& xi, std::span<const double> eps, const VerifySpec& spec) {
  if (!xi.centered()) throw Error(ErrorKind::DomainError, "shrinking bumps must be centered");
  DiracOrderReport rep;
  for (double e : eps) {
    if (!(e > 0.0) || e * xi.support > sol.outer_radius) {
      throw Error(ErrorKind::DomainError, "scaled bump must stay inside the ball");
    }
    const TestFunction xe = xi.scaled(e);
    const double hi = xe.support;
    auto breaks = cuts(xe.profile, hi);
    const ScalarFn left = [&](double r) { return sol.profile(r) * dual_at_radius(p, xe, r, spec) * weight(p, r); };
    const ScalarFn right = [&](double r) { return f(r) * xe.profile(r) * weight(p, r); };
    const ScalarFn abs_u = [&](double r) { return std::abs(sol.profile(r)) * weight(p, r); };
    const ScalarFn abs_f = [&](double r) { return std::abs(f(r)) * weight(p, r); };
    const double a = radial_integral(p, left, hi, breaks, spec.quad).value;
    const double b = radial_integral(p, right, hi, breaks, spec.quad).value;
    const double mu_u = radial_integral(p, abs_u, hi, {}, spec.quad).value;
    const double mu_f = radial_integral(p, abs_f, hi, {}, spec.quad).value;
    double sup_dual = 0.0;
    double sup_xi = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double r = hi * i / 400.0;
      sup_dual = std::max(sup_dual, std::abs(apply_dual(p, xe, r)));
      sup_xi = std::max(sup_xi, std::abs(xe.profile(r)));
    }
    rep.eps.push_back(e);
    rep.functional.push_back(a - b);
    rep.majorant.push_back(sup_dual * mu_u + sup_xi * mu_f);
  }
  return rep;
}

std::vector<double> default_mu_grid(int dim) {
  const double mu0 = -0.25 * (dim - 2) * (dim - 2);
  std::vector<double> out;
  for (double mu : {mu0, mu0 + 0.5, 0.0, 1.0, 5.0}) {
    if (std::find(out.begin(), out.end(), mu) == out.end()) out.push_back(mu);
  }
  return out;
}

std::vector<SweepRow> identity_sweep(std::span<const HardyParams> params, std::span<const TestFunction> library,
                                     const VerifySpec& spec) {
  std::vector<SweepRow> rows;
  for (const auto& p : params) {
    for (const auto& xi : library) {
      rows.push_back({p.dim(), p.mu(), "fundamental", verify_fundamental_identity(p, xi, spec)});
      rows.push_back({p.dim(), p.mu(), "green", verify_green_identity(p, 1.0, xi, spec)});
    }
  }
  return rows;
}

}  // namespace hardy
