#include "hardy/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>

namespace hardy {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kOverflowGuard = 1e290;
// Increment ratio per halving of the distance to the endpoint above which a
// scan is treated as non-convergent.
constexpr double kDivergentRatio = 0.995;
constexpr double kLogBand = 0.005;
constexpr int kFitWindow = 16;
constexpr double kAnchorResolution = 1e-8;
constexpr int kMinLevelsForDivergence = 20;

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_panel(const ScalarFn& g, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  Panel p{a, b};
  double err = 0.0;
  double l1 = 0.0;
  p.value = GK::integrate(g, a, b, 0, 0.0, &err, &l1);
  // With zero depth Boost reports the error of the rule on [-1, 1].
  p.error = err * 0.5 * (b - a);
  p.l1 = l1;
  if (!std::isfinite(p.value)) {
    throw Error(ErrorKind::NumericFailure, fmt::format("non-finite integrand on [{}, {}]", a, b));
  }
  return p;
}

double target_error(const QuadratureSpec& spec, double value, double l1) {
  return std::max({spec.abs_tol, spec.rel_tol * std::abs(value), 64.0 * kEps * l1});
}

std::vector<double> initial_nodes(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> nodes{a};
  if (a > 0.0) {
    for (double x = 2.0 * a; x < 0.5 * b; x *= 2.0) nodes.push_back(x);
  }
  for (double bp : breakpoints) {
    if (bp > a && bp < b) nodes.push_back(bp);
  }
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [&](double x, double y) { return std::abs(x - y) <= 1e-14 * std::abs(b); }),
              nodes.end());
  if (nodes.back() != b) nodes.back() = b;
  return nodes;
}

struct ScanState {
  double sum = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  int evaluations = 0;
  bool converged = true;
  std::vector<double> level_l1;
  std::vector<double> level_value;
};

// Fits ln(level_l1[j]) = a + b j + c ln(j + 1) over the last kFitWindow levels and
// returns e^b, the asymptotic increment ratio per halving. The ln term absorbs
// logarithmic factors so that slowly converging tails are not mistaken for
// divergent ones.
std::optional<double> fitted_ratio(const std::vector<double>& level_l1) {
  const int n = static_cast<int>(level_l1.size());
  if (n < kFitWindow) return std::nullopt;
  Eigen::MatrixXd A(kFitWindow, 3);
  Eigen::VectorXd y(kFitWindow);
  for (int i = 0; i < kFitWindow; ++i) {
    const int j = n - kFitWindow + i;
    const double v = level_l1[j];
    if (!(v > 0.0)) return std::nullopt;
    A(i, 0) = 1.0;
    A(i, 1) = j;
    A(i, 2) = std::log(j + 1.0);
    y(i) = std::log(v);
  }
  const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
  return std::exp(coef(1));
}

DivergenceFit make_fit(const ScanState& st, double ratio, double closest, bool at_origin) {
  DivergenceFit fit;
  fit.partial_sum = st.sum;
  fit.closest_approach = closest;
  fit.at_origin = at_origin;
  if (std::abs(ratio - 1.0) <= kLogBand) {
    fit.model = GrowthModel::Log;
    const int n = static_cast<int>(st.level_l1.size());
    const int k = std::min(n, kFitWindow);
    double mean = 0.0;
    for (int i = n - k; i < n; ++i) mean += st.level_l1[i];
    fit.rate = mean / k / std::log(2.0);
  } else {
    fit.model = GrowthModel::Power;
    fit.rate = std::log2(ratio);
  }
  return fit;
}

// Integral of g over the points anchor + dir*d, d in (0, width], taken level by
// level in s = -ln d with levels [width 2^-(j+1), width 2^-j].
QuadResult scan_endpoint(const ScalarFn& g, double anchor, double dir, double width,
                         const QuadratureSpec& spec, std::span<const double> breakpoints,
                         bool at_origin) {
  ScanState st;
  std::vector<double> s_breaks;
  for (double bp : breakpoints) {
    const double d = dir * (bp - anchor);
    if (d > 0.0 && d < width) s_breaks.push_back(-std::log(d));
  }
  const ScalarFn in_s = [&](double s) {
    const double d = std::exp(-s);
    return g(anchor + dir * d) * d;
  };

  int zero_run = 0;
  const double s0 = -std::log(width);
  const double ds = std::log(2.0);
  for (int j = 0; j < spec.max_levels; ++j) {
    const double s_lo = s0 + j * ds;
    const double s_hi = s_lo + ds;
    // Near a nonzero anchor the abscissae anchor +- d lose relative accuracy in d.
    if (anchor != 0.0 && std::exp(-s_hi) < kAnchorResolution * std::abs(anchor)) break;
    QuadratureSpec level_spec = spec;
    const QuadResult lev = integrate_adaptive(in_s, s_lo, s_hi, level_spec, s_breaks);
    st.sum += lev.value;
    st.error += lev.error;
    st.l1 += lev.l1;
    st.evaluations += lev.evaluations;
    st.level_l1.push_back(lev.l1);
    st.level_value.push_back(lev.value);
    const double closest = width * std::exp(-(j + 1) * ds);

    if (!std::isfinite(st.sum) || std::abs(st.sum) > kOverflowGuard) {
      const auto ratio = fitted_ratio(st.level_l1);
      throw DivergenceError(
          fmt::format("partial integral exceeded the overflow guard {} units from the endpoint", closest),
          make_fit(st, ratio.value_or(std::numeric_limits<double>::infinity()), closest, at_origin));
    }

    if (lev.l1 == 0.0) {
      if (++zero_run >= 6) break;
      continue;
    }
    zero_run = 0;

    if (j + 1 >= kMinLevelsForDivergence) {
      const auto ratio = fitted_ratio(st.level_l1);
      if (ratio && *ratio >= kDivergentRatio) {
        throw DivergenceError(
            fmt::format("tail integral grows as the endpoint is approached (ratio {:.6f} per halving)",
                        *ratio),
            make_fit(st, *ratio, closest, at_origin));
      }
    }

    if (j >= 3) {
      const double r1 = st.level_l1[j] / st.level_l1[j - 1];
      const double r2 = st.level_l1[j - 1] / st.level_l1[j - 2];
      const double ratio = std::max(r1, r2);
      if (ratio < kDivergentRatio) {
        const double tail_l1 = st.level_l1[j] * ratio / (1.0 - ratio);
        // Geometric extrapolation is trusted only as far as the ratio is stable;
        // a drift of size (j+1)|r1 - r2| is assumed to remain in the ratio.
        const double drift = (j + 1.0) * std::abs(r1 - r2);
        const double tail_err = tail_l1 * (2.0 * drift / ((1.0 - ratio) * (1.0 - ratio)) + 1e-6);
        if (tail_err <= 0.5 * target_error(spec, st.sum, st.l1)) {
          st.sum += lev.value * ratio / (1.0 - ratio);
          st.error += tail_err;
          return {st.sum, st.error, st.l1, true, st.evaluations};
        }
      }
    }
  }

  const int n = static_cast<int>(st.level_l1.size());
  if (zero_run >= 6 || n < 3) {
    return {st.sum, st.error, st.l1, st.error <= target_error(spec, st.sum, st.l1), st.evaluations};
  }
  // Level budget or floating-point resolution exhausted: extrapolate the tail.
  const double r1 = st.level_l1[n - 1] / st.level_l1[n - 2];
  const double r2 = st.level_l1[n - 2] / st.level_l1[n - 3];
  const double ratio = std::max(r1, r2);
  if (ratio < kDivergentRatio) {
    const double tail_l1 = st.level_l1[n - 1] * ratio / (1.0 - ratio);
    st.sum += st.level_value[n - 1] * ratio / (1.0 - ratio);
    const double drift = n * std::abs(r1 - r2);
    st.error += tail_l1 * (2.0 * drift / ((1.0 - ratio) * (1.0 - ratio)) + 1e-6);
  } else {
    st.error = std::numeric_limits<double>::infinity();
  }
  st.converged = st.error <= target_error(spec, st.sum, st.l1);
  return {st.sum, st.error, st.l1, st.converged, st.evaluations};
}

QuadResult combine(const QuadResult& x, const QuadResult& y, const QuadratureSpec& spec) {
  QuadResult out{x.value + y.value, x.error + y.error, x.l1 + y.l1, true, x.evaluations + y.evaluations};
  out.converged = out.error <= target_error(spec, out.value, out.l1);
  return out;
}

void require_converged(const QuadResult& res, const QuadratureSpec& spec, const char* what) {
  if (!res.converged) {
    throw ToleranceError(fmt::format("{}: estimate {} with error {} above tolerance", what, res.value,
                                     res.error),
                         res.value, res.error);
  }
  (void)spec;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorKind::ConfigError, "quadrature tolerances must be positive");
  }
  if (!(log_substitution_cut > 0.0)) {
    throw Error(ErrorKind::ConfigError, "log substitution cut must be positive");
  }
  if (max_subdivisions < 1 || max_levels < 4) {
    throw Error(ErrorKind::ConfigError, "quadrature budgets too small");
  }
}

QuadResult integrate_adaptive(const ScalarFn& g, double a, double b, const QuadratureSpec& spec,
                              std::span<const double> breakpoints) {
  if (a == b) return {};
  if (a > b) throw Error(ErrorKind::DomainError, "integrate_adaptive needs a <= b");

  std::priority_queue<Panel> heap;
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  int evaluations = 0;
  const auto nodes = initial_nodes(a, b, breakpoints);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    Panel p = gauss_kronrod_panel(g, nodes[i], nodes[i + 1]);
    evaluations += 21;
    value += p.value;
    error += p.error;
    l1 += p.l1;
    heap.push(p);
  }

  while (error > target_error(spec, value, l1) && static_cast<int>(heap.size()) < spec.max_subdivisions) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval no longer divisible
    heap.pop();
    const Panel left = gauss_kronrod_panel(g, worst.a, mid);
    const Panel right = gauss_kronrod_panel(g, mid, worst.b);
    evaluations += 42;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  // Recompute the totals from the panels to shed accumulated update roundoff.
  value = error = l1 = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    l1 += heap.top().l1;
    heap.pop();
  }
  return {value, error, l1, error <= target_error(spec, value, l1), evaluations};
}

QuadResult integrate_from_origin(const ScalarFn& g, double b, const QuadratureSpec& spec,
                                 std::span<const double> breakpoints) {
  if (!(b > 0.0)) throw Error(ErrorKind::DomainError, "integrate_from_origin needs b > 0");
  const double cut = std::min(spec.log_substitution_cut, 0.5 * b);
  const QuadResult inner = scan_endpoint(g, 0.0, 1.0, cut, spec, breakpoints, true);
  const QuadResult outer = integrate_adaptive(g, cut, b, spec, breakpoints);
  return combine(inner, outer, spec);
}

QuadResult integrate_to_endpoint(const ScalarFn& g, double a, double b, const QuadratureSpec& spec,
                                 std::span<const double> breakpoints) {
  if (!(b > a)) throw Error(ErrorKind::DomainError, "integrate_to_endpoint needs a < b");
  const double cut = std::min(spec.log_substitution_cut, 0.5 * (b - a));
  const QuadResult inner = scan_endpoint(g, b, -1.0, cut, spec, breakpoints, false);
  const QuadResult outer = integrate_adaptive(g, a, b - cut, spec, breakpoints);
  return combine(inner, outer, spec);
}

QuadResult integrate_weighted(const HardyParams& p, const RadialFunction& g, double a, double b,
                              const QuadratureSpec& spec) {
  spec.validate();
  if (a < 0.0 || a > b) throw Error(ErrorKind::DomainError, "integrate_weighted needs 0 <= a <= b");
  if (a == b) return {};
  const double exponent = p.tau_plus() + p.dim() - 1.0;
  const double area = p.sphere_area();
  const ScalarFn integrand = [&](double r) { return area * g(r) * std::pow(r, exponent); };
  const QuadResult res = a == 0.0 ? integrate_from_origin(integrand, b, spec, g.breakpoints())
                                  : integrate_adaptive(integrand, a, b, spec, g.breakpoints());
  require_converged(res, spec, "integrate_weighted");
  return res;
}

QuadResult integrate_lebesgue(int dim, const RadialFunction& g, double a, double b,
                              const QuadratureSpec& spec) {
  spec.validate();
  if (a < 0.0 || a > b) throw Error(ErrorKind::DomainError, "integrate_lebesgue needs 0 <= a <= b");
  if (a == b) return {};
  const double area = unit_sphere_area(dim);
  const ScalarFn integrand = [&](double r) { return area * g(r) * std::pow(r, dim - 1.0); };
  const QuadResult res = a == 0.0 ? integrate_from_origin(integrand, b, spec, g.breakpoints())
                                  : integrate_adaptive(integrand, a, b, spec, g.breakpoints());
  require_converged(res, spec, "integrate_lebesgue");
  return res;
}

namespace {

WeightedNorm two_sided_norm(const ScalarFn& integrand, double R, const QuadratureSpec& spec,
                            std::span<const double> breakpoints) {
  spec.validate();
  if (!(R > 0.0)) throw Error(ErrorKind::DomainError, "norm needs R > 0");
  WeightedNorm out;
  try {
    QuadratureSpec side = spec;
    side.log_substitution_cut = std::min(spec.log_substitution_cut, 0.25 * R);
    const double cut = side.log_substitution_cut;
    const QuadResult left = scan_endpoint(integrand, 0.0, 1.0, cut, side, breakpoints, true);
    const QuadResult middle = integrate_adaptive(integrand, cut, R - cut, side, breakpoints);
    const QuadResult right = scan_endpoint(integrand, R, -1.0, cut, side, breakpoints, false);
    const QuadResult total = combine(combine(left, middle, side), right, side);
    if (!total.converged) {
      throw ToleranceError("weighted norm did not reach tolerance", total.value, total.error);
    }
    out.value = total.value;
    out.error = total.error;
  } catch (const DivergenceError& e) {
    out.finite = false;
    out.value = std::numeric_limits<double>::infinity();
    out.divergence = e.fit();
  }
  return out;
}

}  // namespace

WeightedNorm weighted_l1_norm(const HardyParams& p, const RadialFunction& f, double R,
                              const QuadratureSpec& spec) {
  const double exponent = p.tau_plus() + p.dim() - 1.0;
  const double area = p.sphere_area();
  const ScalarFn integrand = [&](double r) { return area * std::abs(f(r)) * std::pow(r, exponent); };
  return two_sided_norm(integrand, R, spec, f.breakpoints());
}

WeightedNorm rho_weighted_l1_norm(const HardyParams& p, const RadialFunction& f, double R,
                                  const QuadratureSpec& spec) {
  const double exponent = p.tau_plus() + p.dim() - 1.0;
  const double area = p.sphere_area();
  const ScalarFn integrand = [&](double r) {
    return area * std::abs(f(r)) * (R - r) * std::pow(r, exponent);
  };
  return two_sided_norm(integrand, R, spec, f.breakpoints());
}

}  // namespace hardy
