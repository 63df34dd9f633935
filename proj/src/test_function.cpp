#include "hardy/test_function.hpp"

#include <fmt/format.h>

namespace hardy {

namespace {

RadialFunction rescaled(const RadialFunction& h, double eps) {
  auto out = RadialFunction::from_generic(
      [h, eps](auto r) {
        using S = decltype(r);
        if constexpr (std::is_same_v<S, double>) {
          return h(r / eps);
        } else {
          const Jet2 j = h.jet(r.v / eps);
          return compose(r, j.v, j.d1 / eps, j.d2 / (eps * eps));
        }
      },
      h.support_radius() * eps);
  std::vector<double> bps;
  for (double b : h.breakpoints()) bps.push_back(b * eps);
  return out.with_breakpoints(bps).with_fd_floor(h.fd_floor() * eps);
}

TestFunction make(std::string name, RadialFunction profile, double support) {
  TestFunction t;
  t.profile = profile.with_fd_floor(support);
  t.support = support;
  t.name = std::move(name);
  return t;
}

}  // namespace

double TestFunction::value(const Eigen::VectorXd& x) const {
  const double rho = centered() ? x.norm() : (x - center).norm();
  return profile(rho);
}

Eigen::VectorXd TestFunction::gradient(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd d = centered() ? x : Eigen::VectorXd(x - center);
  const double rho = d.norm();
  if (rho == 0.0) return Eigen::VectorXd::Zero(x.size());
  return profile.d1(rho) / rho * d;
}

TestFunction TestFunction::translated(const Eigen::VectorXd& c) const {
  TestFunction out(*this);
  out.center = c;
  out.name = fmt::format("{}@{:.4g}", name, c.norm());
  return out;
}

TestFunction TestFunction::scaled(double eps) const {
  if (!(eps > 0.0)) throw Error(ErrorKind::DomainError, "scale factor must be positive");
  TestFunction out(*this);
  out.profile = rescaled(profile, eps);
  out.support = support * eps;
  out.name = fmt::format("{}/{:.4g}", name, eps);
  return out;
}

const char* to_string(BumpKind kind) {
  switch (kind) {
    case BumpKind::Quartic: return "quartic";
    case BumpKind::Cone: return "cone";
    case BumpKind::Cutoff: return "cutoff";
    case BumpKind::QuarticPoly: return "quartic-poly";
    case BumpKind::Xi0Truncated: return "xi0-truncated";
  }
  return "unknown";
}

BumpKind parse_bump_kind(std::string_view name) {
  for (BumpKind k : {BumpKind::Quartic, BumpKind::Cone, BumpKind::Cutoff, BumpKind::QuarticPoly,
                     BumpKind::Xi0Truncated}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::UnknownKind, fmt::format("no test function named '{}'", name));
}

TestFunction bump_library(BumpKind kind, double R, double sigma) {
  if (!(R > 0.0)) throw Error(ErrorKind::DomainError, "bump support radius must be positive");
  switch (kind) {
    case BumpKind::Quartic:
      return make("quartic",
                  RadialFunction::from_generic(
                      [R](auto r) {
                        const auto s = 1.0 - (r / R) * (r / R);
                        return s * s;
                      },
                      R),
                  R);
    case BumpKind::Cone: {
      if (!(sigma > 0.0) || sigma >= 0.5 * R) {
        throw Error(ErrorKind::DomainError, "cone needs 0 < sigma < R/2");
      }
      auto prof = RadialFunction::from_generic(
          [R, sigma](auto r) { return (R - phi_sigma(r, sigma)) * eta0(2.0 * r / R); }, R);
      return make(fmt::format("cone[{:.4g}]", sigma), prof.with_breakpoints({sigma, 0.5 * R}), R);
    }
    case BumpKind::Cutoff: {
      auto prof = RadialFunction::from_generic([R](auto r) { return eta0(r / R); }, 2.0 * R);
      return make("cutoff", prof.with_breakpoints({R}), 2.0 * R);
    }
    case BumpKind::QuarticPoly:
      return make("quartic-poly",
                  RadialFunction::from_generic(
                      [R](auto r) {
                        const auto t = (r / R) * (r / R);
                        return (1.0 - t) * (1.0 - t) * (1.0 + 2.0 * t);
                      },
                      R),
                  R);
    case BumpKind::Xi0Truncated: {
      auto prof = RadialFunction::from_generic(
          [R](auto r) { return (R * R - r * r) * eta0(2.0 * r / R); }, R);
      return make("xi0-truncated", prof.with_breakpoints({0.5 * R}), R);
    }
  }
  throw Error(ErrorKind::UnknownKind, "unhandled test function kind");
}

TestFunction bump_library(std::string_view kind, double R, double sigma) {
  return bump_library(parse_bump_kind(kind), R, sigma);
}

std::vector<TestFunction> default_library(double R) {
  return {bump_library(BumpKind::Quartic, R), bump_library(BumpKind::Cone, R, 0.1 * R),
          bump_library(BumpKind::Cutoff, 0.5 * R), bump_library(BumpKind::QuarticPoly, R),
          bump_library(BumpKind::Xi0Truncated, R)};
}

double apply_hardy(const HardyParams& p, const RadialFunction& u, double r) {
  detail::require_positive_radius(r, "apply_hardy");
  const Jet2 j = u.jet(r);
  return -j.d2 - (p.dim() - 1.0) * j.d1 / r + p.mu() * j.v / (r * r);
}

double apply_dual(const HardyParams& p, const RadialFunction& xi, double r) {
  const double n_eff = p.effective_dim();
  if (r < 0.0) throw Error(ErrorKind::DomainError, "apply_dual needs r >= 0");
  if (r == 0.0) return -n_eff * xi.d2(0.0);
  const Jet2 j = xi.jet(r);
  return -j.d2 - (n_eff - 1.0) * j.d1 / r;
}

double apply_dual(const HardyParams& p, const TestFunction& xi, double r) {
  if (!xi.centered()) {
    throw Error(ErrorKind::DomainError, "radial apply_dual needs a test function centered at 0");
  }
  return apply_dual(p, xi.profile, r);
}

double apply_dual_at(const HardyParams& p, const TestFunction& xi, const Eigen::VectorXd& x) {
  const double tp = p.tau_plus();
  const double r2 = x.squaredNorm();
  if (!(r2 > 0.0)) throw Error(ErrorKind::DomainError, "apply_dual_at needs x != 0");
  const Eigen::VectorXd d = xi.centered() ? x : Eigen::VectorXd(x - xi.center);
  const double rho = d.norm();
  const int n = p.dim();
  if (rho == 0.0) return -n * xi.profile.d2(0.0);
  const Jet2 j = xi.profile.jet(rho);
  const double laplacian = j.d2 + (n - 1.0) * j.d1 / rho;
  return -laplacian - 2.0 * tp * j.d1 * x.dot(d) / (rho * r2);
}

double apply_dual_fd(const HardyParams& p, const TestFunction& xi, double r) {
  if (!xi.centered()) {
    throw Error(ErrorKind::DomainError, "radial apply_dual_fd needs a test function centered at 0");
  }
  return apply_dual(p, xi.profile.finite_difference_copy(), r);
}

}  // namespace hardy
