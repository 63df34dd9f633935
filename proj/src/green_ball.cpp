#include "hardy/green_ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace hardy {

namespace {

constexpr double pi = std::numbers::pi;

void require_mode_regime(const HardyParams& p, const char* what) {
  if (p.regime() == Regime::SubHardy) {
    throw Error(ErrorKind::UnsupportedRegime, std::string(what) + " needs mu >= mu0");
  }
}

double mode_gap(const HardyParams& p, int l) {
  if (l == 0) return p.root_gap();
  const double h = l + 0.5 * (p.dim() - 2);
  return std::sqrt(h * h + p.mu());
}

// A(r<) B(r>) / C without the s^{N-1} factor, for the exponent gap nu.
double radial_term(int dim, double R, double nu, bool degenerate, double r, double s) {
  const double lo = std::min(r, s);
  const double hi = std::max(r, s);
  const double c = -0.5 * (dim - 2);
  const double pre = c == 0.0 ? 1.0 : std::pow(r * s, c);
  if (degenerate) return -pre * std::log(hi / R);
  const double free = std::exp(nu * std::log(lo / hi));
  const double image = std::exp(nu * std::log(r * s / (R * R)));
  return pre * (free - image) / (2.0 * nu);
}

// rho^t (t ln(1/rho) + 1), decreasing in t.
double decay(double rho, double t) {
  if (rho <= 0.0) return 0.0;
  const double lr = -std::log(rho);
  return std::exp(-t * lr) * (t * lr + 1.0);
}

}  // namespace

double mode_green(const HardyParams& p, int l, double R, double r, double s) {
  require_mode_regime(p, "mode_green");
  if (l < 0) throw Error(ErrorKind::DomainError, "mode index must be non-negative");
  if (!(r > 0.0 && s > 0.0 && r <= R * (1 + 1e-12) && s <= R * (1 + 1e-12))) {
    throw Error(ErrorKind::DomainError, "mode_green needs 0 < r, s <= R");
  }
  const double nu = mode_gap(p, l);
  const bool degenerate = l == 0 && p.critical();
  return radial_term(p.dim(), R, nu, degenerate, r, s) * std::pow(s, p.dim() - 1);
}

GreenKernelSeries::GreenKernelSeries(const HardyParams& p, double R, GreenOptions opts)
    : p_(p), R_(R), opts_(opts) {
  require_mode_regime(p, "green kernel");
  if (p.dim() != 2 && p.dim() != 3) {
    throw Error(ErrorKind::InvalidDimension, "the full kernel is available for N = 2, 3 only");
  }
  if (!(R > 0.0)) throw Error(ErrorKind::DomainError, "radius must be positive");
  if (opts_.max_mode < 0 || !(opts_.rel_tol > 0.0)) {
    throw Error(ErrorKind::ConfigError, "max_mode must be >= 0 and rel_tol > 0");
  }
  const HardyParams classical = derive_params(p.dim(), 0.0);
  modes_.resize(opts_.max_mode + 1);
  for (int l = 0; l <= opts_.max_mode; ++l) {
    auto& m = modes_[l];
    m.nu = mode_gap(p, l);
    m.nu0 = mode_gap(classical, l);
    m.degenerate = l == 0 && p.critical();
    m.degenerate0 = l == 0 && classical.critical();
  }
}

double GreenKernelSeries::term(double nu, bool degenerate, double r, double s) const {
  return radial_term(p_.dim(), R_, nu, degenerate, r, s);
}

double GreenKernelSeries::classical(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  const double ny = y.norm();
  const Eigen::VectorXd image = (R_ * R_ / (ny * ny)) * y;
  const double d = (x - y).norm();
  const double di = (x - image).norm();
  if (p_.dim() == 3) return (1.0 / d - R_ / (ny * di)) / (4.0 * pi);
  return (std::log(ny * di / R_) - std::log(d)) / (2.0 * pi);
}

double GreenKernelSeries::tail(int L, double r, double s, double sin_gamma) const {
  if (L < 1) return std::numeric_limits<double>::infinity();
  const double mu = std::abs(p_.mu());
  if (mu == 0.0) return 0.0;
  const double h = L + 1 + 0.5 * (p_.dim() - 2);
  const double nu = std::sqrt(h * h + p_.mu());
  const double t = std::min(nu, h);
  const double rho = std::min(r, s) / std::max(r, s);
  const double g = decay(rho, t) + decay(r * s / (R_ * R_), t);
  if (p_.dim() == 2) return mu * g / (8.0 * pi * L * L);
  double bernstein = 1.0;
  if (sin_gamma > 0.0) bernstein = std::min(1.0, std::sqrt(2.0 / (pi * (L + 1) * sin_gamma)));
  return mu * (h / t) * g * bernstein / (8.0 * pi * L * std::sqrt(r * s));
}

KernelValue GreenKernelSeries::sum(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int L,
                                   bool adaptive) const {
  const int N = p_.dim();
  if (x.size() != N || y.size() != N) throw Error(ErrorKind::DomainError, "point dimension mismatch");
  const double r = x.norm();
  const double s = y.norm();
  if (r == 0.0 || s == 0.0) throw Error(ErrorKind::DomainError, "kernel points must be nonzero");
  if (r > R_ * (1 + 1e-12) || s > R_ * (1 + 1e-12)) {
    throw Error(ErrorKind::DomainError, "kernel points must lie in the ball");
  }
  if ((x - y).norm() == 0.0) throw Error(ErrorKind::SingularDiagonal, "kernel evaluated on the diagonal");
  if (L > opts_.max_mode) throw Error(ErrorKind::DomainError, "mode beyond the cache");

  const double cg = std::clamp(x.dot(y) / (r * s), -1.0, 1.0);
  const double sg = std::sqrt(std::max(0.0, 1.0 - cg * cg));
  double total = classical(x, y);
  double bound = p_.mu() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  double prev = 1.0;  // P_{l-1} (N = 3) or cos((l-1) gamma) (N = 2)
  double cur = 1.0;
  int l = 0;
  for (; l <= L && p_.mu() != 0.0; ++l) {
    if (l == 1) {
      cur = cg;
    } else if (l >= 2) {
      const double next = N == 3 ? ((2 * l - 1) * cg * cur - (l - 1) * prev) / l : 2.0 * cg * cur - prev;
      prev = cur;
      cur = next;
    }
    const auto& m = modes_[l];
    const double weight = N == 3 ? (2 * l + 1) / (4 * pi) : (l == 0 ? 1.0 / (2 * pi) : 1.0 / pi);
    total += weight * cur * (term(m.nu, m.degenerate, r, s) - term(m.nu0, m.degenerate0, r, s));
    if (l >= 1 && (adaptive || l == L)) {
      bound = tail(l, r, s, sg);
      if (adaptive && bound <= opts_.rel_tol * std::abs(total)) break;
    }
  }
  KernelValue out;
  out.lebesgue = total;
  out.value = total / gamma_branch(p_, s);
  out.tail_bound = bound;
  out.modes = std::min(l, L) + 1;
  return out;
}

KernelValue GreenKernelSeries::partial(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int L) const {
  return sum(x, y, L, false);
}

KernelValue GreenKernelSeries::evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  auto out = sum(x, y, opts_.max_mode, true);
  if (!(out.tail_bound <= opts_.rel_tol * std::abs(out.lebesgue))) {
    throw TruncationError("kernel tail above tolerance at the last mode", out.value,
                          out.tail_bound / gamma_branch(p_, y.norm()));
  }
  if (out.lebesgue < -out.tail_bound) {
    throw Error(ErrorKind::NumericFailure, "kernel series produced a negative value");
  }
  return out;
}

double green_kernel(const GreenKernelSeries& gk, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return gk.evaluate(x, y).value;
}

double green_radial(const HardyParams& p, double R, const RadialFunction& f, double r,
                    const QuadratureSpec& spec) {
  if (!(r > 0.0 && r <= R)) throw Error(ErrorKind::DomainError, "green_radial needs 0 < r <= R");
  if (r == R) return 0.0;
  auto g = [&](double s) { return mode_green(p, 0, R, r, s) * f(s); };
  std::vector<double> inner;
  std::vector<double> outer;
  for (double b : f.breakpoints()) {
    if (b > 0.0 && b < r) inner.push_back(b);
    if (b > r && b < R) outer.push_back(b);
  }
  const auto left = integrate_from_origin(g, r, spec, inner);
  const auto right = integrate_to_endpoint(g, r, R, spec, outer);
  return left.value + right.value;
}

double green_apply(const GreenKernelSeries& gk, const RadialFunction& f, const Eigen::VectorXd& x,
                   const QuadratureSpec& spec) {
  const auto& p = gk.params();
  const double R = gk.radius();
  const double r = x.norm();
  if (x.size() != p.dim()) throw Error(ErrorKind::DomainError, "point dimension mismatch");
  if (!(r > 0.0 && r <= R)) throw Error(ErrorKind::DomainError, "green_apply needs 0 < |x| <= R");
  const auto norm = weighted_l1_norm(p, f, R, spec);
  if (!norm.finite) throw NoSolutionError("source is not integrable against dmu", norm.divergence);
  if (norm.value == 0.0 || r == R) return 0.0;
  return green_radial(p, R, f, r, spec);
}

double upper_envelope(const HardyParams& p, double R, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int N = p.dim();
  const double d = (x - y).norm();
  const double tp = p.tau_plus();
  const double a = N - 2;
  const double e0 = N == 2 ? std::log(4.0 * R / d) : std::pow(d, 2.0 - N);
  const double ex = std::pow(x.norm(), tp);
  const double ey = std::pow(y.norm(), tp);
  const double e1 = ex / std::pow(d, a + tp);
  const double e2 = ey / std::pow(d, a + tp);
  const double e3 = ex * ey / std::pow(d, a + 2 * tp);
  if (p.mu() >= 0.0) return std::min({e0, e1, e2, e3});
  return e0 + e1 + e2 + e3;
}

double lower_envelope(const HardyParams& p, double R, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return upper_envelope(p, R, x, y);
}

namespace {

Eigen::VectorXd random_point(std::mt19937_64& rng, int N, double lo, double hi) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  Eigen::VectorXd v(N);
  do {
    for (int i = 0; i < N; ++i) v[i] = normal(rng);
  } while (v.norm() == 0.0);
  v /= v.norm();
  double radius;
  if (unif(rng) < 0.5) {
    radius = lo * std::pow(hi / lo, unif(rng));
  } else {
    const double u = unif(rng);
    radius = std::pow(std::pow(lo, N) + u * (std::pow(hi, N) - std::pow(lo, N)), 1.0 / N);
  }
  return radius * v;
}

}  // namespace

BoundReport check_kernel_bounds(const GreenKernelSeries& gk, int sample_count, const BoundOptions& opts) {
  if (sample_count <= 0) throw Error(ErrorKind::ConfigError, "sample_count must be positive");
  const auto& p = gk.params();
  const double R = gk.radius();
  const int N = p.dim();
  const GreenKernelSeries series(p, R, {opts.max_mode, opts.rel_tol});
  std::mt19937_64 rng(opts.seed);

  BoundReport report;
  report.lower_checked = p.mu() < 0.0;
  report.fitted_lower_c = std::numeric_limits<double>::infinity();
  report.samples.reserve(sample_count);
  while (static_cast<int>(report.samples.size()) < sample_count) {
    Eigen::VectorXd x = random_point(rng, N, opts.inner * R, opts.outer * R);
    Eigen::VectorXd y = random_point(rng, N, opts.inner * R, opts.outer * R);
    if ((x - y).norm() < opts.diagonal_floor * R) continue;
    BoundSample s{x, y, 0.0, 0.0, 0.0};
    s.kernel = series.evaluate(x, y).lebesgue;
    s.upper = upper_envelope(p, R, x, y);
    s.lower = lower_envelope(p, R, x, y);
    const double up = s.kernel / s.upper;
    const double lo = s.kernel / s.lower;
    report.fitted_upper_c = std::max(report.fitted_upper_c, up);
    report.fitted_lower_c = std::min(report.fitted_lower_c, lo);
    bool bad = !(s.kernel > 0.0) || !std::isfinite(s.kernel);
    if (!bad) bad = up > opts.upper_cap || (report.lower_checked && lo < opts.lower_cap);
    if (!(s.kernel > 0.0)) ++report.nonpositive;
    if (bad) ++report.violations;
    report.samples.push_back(std::move(s));
  }
  return report;
}

}  // namespace hardy
