#include "hardy/probes.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace hardy {

SourceClass classify_source(const HardyParams& p, const RadialFunction& f, double R, const QuadratureSpec& spec) {
  if (p.regime() == Regime::SubHardy) throw Error(ErrorKind::UnsupportedRegime, "sources are classified for mu >= mu0");
  SourceClass out;
  WeightedNorm norm;
  try {
    norm = weighted_l1_norm(p, f, R, spec);
  } catch (const ToleranceError& e) {
    throw Error(ErrorKind::Inconclusive,
                fmt::format("integrability unresolved: estimate {} with error {}", e.estimate(), e.error_bound()));
  }
  out.f1_finite = norm.finite;
  out.f1_value = norm.value;
  out.f1_divergence = norm.divergence;
  out.f2_divergent = !norm.finite && norm.divergence.at_origin;

  // f r^{2 - tau_-} on r = 10^{-4} ... 10^{-12}; the limit is zero iff the
  // log-log slope is positive or the values vanish.
  std::vector<double> x;
  std::vector<double> y;
  double largest = 0.0;
  for (int j = 4; j <= 12; ++j) {
    const double r = std::pow(10.0, -j) * std::min(R, 1.0);
    const double g = std::abs(f(r)) * std::pow(r, 2.0 - p.tau_minus());
    largest = std::max(largest, g);
    if (g > 0.0) {
      x.push_back(std::log(r));
      y.push_back(std::log(g));
    }
  }
  if (largest == 0.0) {
    out.cond_413 = true;
  } else if (x.size() >= 3) {
    const auto [a, b, r2] = linear_fit(x, y);
    out.cond_413_slope = b;
    out.cond_413 = b > 0.02;
  }
  return out;
}

std::vector<int> exhaustion_grid(int n_max) {
  if (n_max < 4) throw Error(ErrorKind::DomainError, "n_max must be at least 4");
  std::vector<int> out;
  for (int k = 0;; ++k) {
    const int n = static_cast<int>(std::lround(4.0 * std::pow(2.0, k / 4.0)));
    if (n > n_max) break;
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

ExhaustionSeries nonexistence_probe(const HardyParams& p, const RadialFunction& f, double x0_radius, int n_max,
                                    double R, const SolverOptions& opts) {
  if (!(x0_radius > 0.0 && x0_radius < R)) throw Error(ErrorKind::DomainError, "x0 must lie inside the ball");
  if (x0_radius <= 0.25) throw Error(ErrorKind::DomainError, "x0 must lie outside the first hole |x| <= 1/4");
  ExhaustionSeries out;
  out.n = exhaustion_grid(n_max);
  for (int n : out.n) {
    const auto sol = solve_annulus(p, f, 1.0 / n, R, 0.0, opts);
    out.values.push_back(sol.profile(x0_radius));
  }
  std::vector<double> nd(out.n.begin(), out.n.end());
  out.growth = fit_growth(nd, out.values);

  std::vector<double> doubling;
  for (std::size_t i = 0; i < out.n.size(); ++i) {
    const int n = out.n[i];
    if ((n & (n - 1)) == 0) doubling.push_back(out.values[i]);
  }
  out.limit = extrapolate_limit(doubling);

  try {
    out.divergent_source = classify_source(p, f, R, opts.quad).f2_divergent;
  } catch (const Error&) {
    out.divergent_source = false;
  }
  if (out.divergent_source && out.growth.best.model == GrowthModel::Bounded) {
    throw Error(ErrorKind::ProbeFailure, "bounded exhaustion series for a source with divergent weighted mass");
  }
  return out;
}

namespace {

// y'' + b y' + c y = 0 in t, one classical RK4 step.
std::array<double, 2> rk4(std::array<double, 2> y, double b, double c, double h) {
  auto f = [&](const std::array<double, 2>& s) { return std::array<double, 2>{s[1], -b * s[1] - c * s[0]}; };
  auto add = [](const std::array<double, 2>& s, const std::array<double, 2>& k, double w) {
    return std::array<double, 2>{s[0] + w * k[0], s[1] + w * k[1]};
  };
  const auto k1 = f(y);
  const auto k2 = f(add(y, k1, h / 2));
  const auto k3 = f(add(y, k2, h / 2));
  const auto k4 = f(add(y, k3, h));
  return {y[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

// Root of the solution inside the step starting at (t, y) of length h, by
// bisection on single RK4 steps of partial length.
double bisect_step(std::array<double, 2> y, double t, double h, double b, double c) {
  double lo = 0.0;
  double hi = h;
  const double s0 = y[0];
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = rk4(y, b, c, mid)[0];
    if ((v < 0) == (s0 < 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return t + 0.5 * (lo + hi);
}

}  // namespace

OscillationReport sub_hardy_probe(int dim, double mu, double r_max, double r_min) {
  if (dim < 2) throw Error(ErrorKind::InvalidDimension, "dimension must be at least 2");
  const double mu0 = -0.25 * (dim - 2) * (dim - 2);
  if (!(mu < mu0)) throw Error(ErrorKind::WrongRegime, fmt::format("mu = {} is not below mu0 = {}", mu, mu0));
  if (!(0.0 < r_min && r_min < r_max)) throw Error(ErrorKind::DomainError, "need 0 < r_min < r_max");

  const double omega = std::sqrt(mu0 - mu);
  const double b = dim - 2.0;
  const double c = -mu;
  OscillationReport out;
  out.predicted_ratio = std::exp(std::numbers::pi / omega);

  // Start from the closed-form data at t0 = ln r_max and march towards the origin.
  const double t0 = std::log(r_max);
  const double t_end = std::log(r_min);
  const double amp = std::exp(-0.5 * b * t0);
  std::array<double, 2> y{amp * std::cos(omega * t0),
                          amp * (-0.5 * b * std::cos(omega * t0) - omega * std::sin(omega * t0))};
  const int steps = static_cast<int>(std::ceil((t0 - t_end) / 1e-3));
  const double h = -(t0 - t_end) / steps;
  double t = t0;
  for (int i = 0; i < steps; ++i) {
    const auto next = rk4(y, b, c, h);
    if (next[0] == 0.0 || (next[0] < 0) != (y[0] < 0)) {
      out.zero_locations.push_back(std::exp(bisect_step(y, t, h, b, c)));
    }
    y = next;
    t += h;
  }
  for (std::size_t i = 0; i + 1 < out.zero_locations.size(); ++i) {
    out.consecutive_ratios.push_back(out.zero_locations[i] / out.zero_locations[i + 1]);
  }
  return out;
}

namespace {

// u_tt + (N-2) u_t + lambda a0 u = 0 from t = ln eps with u = 0, u_t = 1.
// True when u stays positive up to t = 0, i.e. lambda lies below lambda_1.
bool stays_positive(int dim, double a0, double lambda, double eps) {
  const double t0 = std::log(eps);
  const int steps = std::max(4000, static_cast<int>(std::ceil(-t0 / 5e-4)));
  const double h = -t0 / steps;
  std::array<double, 2> y{0.0, 1.0};
  for (int i = 0; i < steps; ++i) {
    y = rk4(y, dim - 2.0, lambda * a0, h);
    if (!(y[0] > 0.0)) return false;
  }
  return true;
}

}  // namespace

EigenCurve eigen_scan(int dim, double a0, std::span<const double> eps_list) {
  if (dim < 2) throw Error(ErrorKind::InvalidDimension, "dimension must be at least 2");
  if (!(a0 > 0.0)) throw Error(ErrorKind::DomainError, "a0 must be positive");
  EigenCurve out;
  out.hardy_constant = 0.25 * (dim - 2) * (dim - 2) / a0;
  for (double eps : eps_list) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::DomainError, "eps must lie in (0, 1)");
    double lo = out.hardy_constant;
    double hi = std::max(2.0 * lo, 1.0 / a0);
    for (int i = 0; i < 200 && stays_positive(dim, a0, hi, eps); ++i) hi *= 2.0;
    if (!stays_positive(dim, a0, lo, eps) || stays_positive(dim, a0, hi, eps)) {
      throw Error(ErrorKind::NumericFailure, fmt::format("no eigenvalue bracket at eps = {} in [{}, {}]", eps, lo, hi));
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (stays_positive(dim, a0, mid, eps) ? lo : hi) = mid;
    }
    out.eps.push_back(eps);
    out.lambda1.push_back(0.5 * (lo + hi));
  }
  out.strictly_decreasing = true;
  out.above_hardy = true;
  for (std::size_t i = 0; i < out.lambda1.size(); ++i) {
    if (!(out.lambda1[i] > out.hardy_constant)) out.above_hardy = false;
    if (i > 0) {
      const bool shrinking = out.eps[i] < out.eps[i - 1];
      const bool lower = out.lambda1[i] < out.lambda1[i - 1];
      if (shrinking != lower) out.strictly_decreasing = false;
    }
  }
  return out;
}

}  // namespace hardy
