#include <doctest.h>

#include <numbers>
#include <random>

#include "hardy/core.hpp"
#include "hardy/test_function.hpp"

using namespace hardy;
using std::numbers::pi;

namespace {
RadialFunction phi_fn(const HardyParams& p) {
  return RadialFunction::from_generic([p](auto r) { return phi(p, r); });
}
RadialFunction gamma_fn(const HardyParams& p) {
  return RadialFunction::from_generic([p](auto r) { return gamma_branch(p, r); });
}
}  // namespace

TEST_CASE("derive_params examples") {
  auto p = derive_params(3, 0.0);
  CHECK(p.tau_minus() == doctest::Approx(-1.0));
  CHECK(p.tau_plus() == doctest::Approx(0.0));
  CHECK(p.mu0() == doctest::Approx(-0.25));
  CHECK(p.c_mu() == doctest::Approx(4 * pi));

  auto c = derive_params(3, -0.25);
  CHECK(c.critical());
  CHECK(c.tau_minus() == doctest::Approx(-0.5));
  CHECK(c.tau_plus() == doctest::Approx(-0.5));
  CHECK(c.c_mu() == doctest::Approx(4 * pi));

  auto q = derive_params(4, 5.0);
  CHECK(q.mu0() == doctest::Approx(-1.0));
  CHECK(q.tau_minus() == doctest::Approx(-1.0 - std::sqrt(6.0)));
  CHECK(q.tau_plus() == doctest::Approx(-1.0 + std::sqrt(6.0)));
  CHECK(q.c_mu() == doctest::Approx(2 * std::sqrt(6.0) * 2 * pi * pi));
}

TEST_CASE("invalid dimension and sub-Hardy access") {
  CHECK_THROWS_AS(derive_params(1, 0.0), Error);
  try {
    derive_params(1, 0.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDimension);
  }
  auto s = derive_params(3, -1.0);
  CHECK(s.regime() == Regime::SubHardy);
  CHECK_THROWS_AS(s.tau_plus(), Error);
  CHECK_THROWS_AS(phi(s, 0.5), Error);
  CHECK_THROWS_AS(s.c_mu(), Error);
  CHECK_THROWS_AS(phi(derive_params(3, 0.0), 0.0), Error);
}

TEST_CASE("closed forms") {
  auto p0 = derive_params(3, 0.0);
  auto p2 = derive_params(3, 2.0);
  auto pc = derive_params(3, -0.25);
  CHECK(phi(p0, 0.5) == doctest::Approx(2.0));
  CHECK(phi(pc, std::exp(-1.0)) == doctest::Approx(std::exp(0.5)));
  CHECK(phi(p2, 0.5) == doctest::Approx(4.0));
  CHECK(gamma_branch(p0, 0.37) == doctest::Approx(1.0));
  CHECK(gamma_branch(p2, 0.5) == doctest::Approx(0.5));
  CHECK(gamma_branch(derive_params(2, 1.0), 0.5) == doctest::Approx(0.5));
  CHECK(green_ball_closed(p2, 1.0, 0.5) == doctest::Approx(3.5));
  CHECK(green_ball_closed(p2, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(green_ball_closed(pc, 1.0, std::exp(-1.0)) == doctest::Approx(std::exp(0.5)));
  CHECK(xi0_ball_closed(p2, 1.0, 0.0) == doctest::Approx(0.1));
  CHECK(xi0_ball_closed(p2, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(xi0_ball_closed(p0, 1.0, 0.5) == doctest::Approx(0.125));
  CHECK_THROWS_AS(green_ball_closed(p2, 1.0, 1.5), Error);
}

TEST_CASE("green ratio to phi tends to one") {
  for (double mu : {-0.25, 0.0, 2.0}) {
    auto p = derive_params(3, mu);
    const double r = 1e-8;
    CHECK(green_ball_closed(p, 1.0, r) / phi(p, r) == doctest::Approx(1.0).epsilon(0.06));
  }
}

TEST_CASE("apply_hardy examples") {
  auto p = derive_params(3, 2.0);
  auto sq = RadialFunction::from_generic([](auto r) { return r * r; });
  CHECK(apply_hardy(p, sq, 0.3) == doctest::Approx(-4.0));
  auto lin = RadialFunction::from_generic([](auto r) { return r; });
  CHECK(std::abs(apply_hardy(p, lin, 0.7)) < 1e-12);
  CHECK_THROWS_AS(apply_hardy(p, lin, 0.0), Error);
}

TEST_CASE("homogeneous residual for random radii") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> radius(0.05, 1.0);
  for (int n = 2; n <= 5; ++n) {
    const double mu0 = -0.25 * (n - 2) * (n - 2);
    for (double mu : {mu0, mu0 + 0.5, 0.0, 1.0, 5.0}) {
      auto p = derive_params(n, mu);
      auto ph = phi_fn(p);
      auto ga = gamma_fn(p);
      for (int i = 0; i < 100; ++i) {
        const double r = radius(rng);
        const double scale = std::max(1.0, std::abs(ph(r)) / (r * r));
        CHECK(std::abs(apply_hardy(p, ph, r)) / scale <= 1e-8);
        CHECK(std::abs(apply_hardy(p, ga, r)) <= 1e-8 * std::max(1.0, std::abs(ga(r)) / (r * r)));
      }
    }
  }
}

TEST_CASE("root relations and c_mu") {
  for (int n = 2; n <= 6; ++n) {
    const double mu0 = -0.25 * (n - 2) * (n - 2);
    for (double mu : {mu0, mu0 + 1e-3, 0.0, 0.7, 3.0, 12.0}) {
      auto p = derive_params(n, mu);
      CHECK(p.tau_minus() + p.tau_plus() == doctest::Approx(2.0 - n).epsilon(1e-12));
      for (double t : {p.tau_minus(), p.tau_plus()}) {
        CHECK(std::abs(mu - t * (t + n - 2)) <= 1e-12 * std::max(1.0, std::abs(mu)));
      }
      CHECK(p.tau_minus() <= p.tau_plus());
    }
    auto z = derive_params(n, 0.0);
    const double cn = n >= 3 ? (n - 2) * unit_sphere_area(n) : 2 * pi;
    CHECK(z.c_mu() == doctest::Approx(cn).epsilon(1e-14));
    if (n >= 3) {
      auto crit = derive_params(n, mu0);
      CHECK(crit.c_mu() == doctest::Approx(unit_sphere_area(n)));
      auto above = derive_params(n, mu0 + 1e-12);
      CHECK(above.c_mu() < 1e-5 * unit_sphere_area(n));
    }
  }
  CHECK(derive_params(2, 0.0).critical());
  CHECK(derive_params(2, 0.0).c_mu() == doctest::Approx(2 * pi));
}

TEST_CASE("unit sphere areas") {
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * pi));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * pi));
  CHECK(unit_sphere_area(4) == doctest::Approx(2 * pi * pi));
  CHECK(unit_sphere_area(5) == doctest::Approx(8 * pi * pi / 3));
}

TEST_CASE("apply_dual examples") {
  auto p = derive_params(3, 2.0);
  auto q = bump_library(BumpKind::Quartic, 1.0);
  CHECK(apply_dual(p, q, 0.0) == doctest::Approx(20.0));
  CHECK(apply_dual(p, q.profile.with_support(2.0), 1.0) == doctest::Approx(-8.0));
  for (double r : {0.1, 0.4, 0.8}) {
    CHECK(apply_dual(p, q, r) == doctest::Approx(20.0 - 28.0 * r * r));
  }
  for (int n = 2; n <= 5; ++n) {
    for (double mu : {-0.25 * (n - 2) * (n - 2), 0.0, 1.0, 5.0}) {
      auto pp = derive_params(n, mu);
      auto xi0 = RadialFunction::from_generic([pp](auto r) { return xi0_ball_closed(pp, 1.0, r); });
      for (double r : {0.0, 1e-3, 0.2, 0.5, 0.99}) CHECK(apply_dual(pp, xi0, r) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("dual operator intertwines with the Hardy operator") {
  auto p = derive_params(3, 2.0);
  auto q = bump_library(BumpKind::QuarticPoly, 1.0);
  auto prof = q.profile;
  auto gx = RadialFunction::from_generic([p, prof](auto r) {
    using S = decltype(r);
    if constexpr (std::is_same_v<S, double>) {
      return gamma_branch(p, r) * prof(r);
    } else {
      return gamma_branch(p, r) * prof.jet(r.v);
    }
  });
  for (double r : {0.15, 0.45, 0.75}) {
    CHECK(apply_hardy(p, gx, r) == doctest::Approx(gamma_branch(p, r) * apply_dual(p, q, r)).epsilon(1e-10));
  }
}

TEST_CASE("library members") {
  auto q = bump_library("quartic", 1.0);
  CHECK(q.value_at_zero() == doctest::Approx(1.0));
  CHECK(q.profile(1.0) == doctest::Approx(0.0));
  CHECK(q.profile.d1(1.0) == doctest::Approx(0.0));

  auto eta = bump_library("cutoff", 1.0);
  for (double r : {0.0, 0.5, 1.0}) CHECK(eta.profile(r) == 1.0);
  for (double r : {2.0, 2.5}) CHECK(eta.profile(r) == 0.0);
  CHECK(eta.profile(1.5) == doctest::Approx(0.5));

  CHECK_THROWS_AS(bump_library("triangle", 1.0), Error);
  CHECK_THROWS_AS(bump_library("quartic", -1.0), Error);
}

TEST_CASE("cone dual operator on its flat regions") {
  const double sigma = 0.1;
  auto cone = bump_library(BumpKind::Cone, 1.0, sigma);
  for (double mu : {-0.25, 0.0, 2.0}) {
    auto p = derive_params(3, mu);
    const double ne = p.effective_dim();
    for (double r : {0.15, 0.3, 0.45}) CHECK(apply_dual(p, cone, r) == doctest::Approx((ne - 1.0) / r));
    for (double r : {0.0, 0.03, 0.08}) CHECK(apply_dual(p, cone, r) == doctest::Approx(ne / sigma));
  }
}

TEST_CASE("compact support and bounded second derivative") {
  for (const auto& xi : default_library(1.0)) {
    const double s = xi.support;
    CHECK(std::abs(xi.profile(s)) <= 1e-12);
    CHECK(std::abs(xi.profile.d1(s)) <= 1e-12);
    CHECK(xi.profile(s * 1.01) == 0.0);
    double m = 0.0;
    for (int i = 0; i <= 2000; ++i) m = std::max(m, std::abs(xi.profile.d2(s * i / 2000.0)));
    CHECK(std::isfinite(m));
    CHECK(m < 1e3);
  }
}

TEST_CASE("analytic derivatives agree with finite differences") {
  for (const auto& xi : default_library(1.0)) {
    const auto fd = xi.profile.finite_difference_copy();
    for (int i = 1; i < 40; ++i) {
      const double r = xi.support * (i + 0.37) / 40.0;
      bool near_kink = false;
      for (double b : xi.profile.breakpoints()) near_kink |= std::abs(r - b) < 1e-3;
      if (near_kink) continue;
      const double scale = std::max({1.0, std::abs(xi.profile(r))});
      CHECK(std::abs(fd.d1(r) - xi.profile.d1(r)) <= 1e-6 * std::max(scale, std::abs(xi.profile.d1(r))));
      CHECK(std::abs(fd.d2(r) - xi.profile.d2(r)) <= 1e-6 * std::max(scale, std::abs(xi.profile.d2(r))));
    }
  }
}

TEST_CASE("translated and scaled test functions") {
  auto q = bump_library(BumpKind::Quartic, 0.2);
  Eigen::VectorXd c(3);
  c << 0.5, 0.0, 0.0;
  auto t = q.translated(c);
  CHECK(t.value_at_zero() == 0.0);
  Eigen::VectorXd x(3);
  x << 0.55, 0.05, 0.0;
  CHECK(t.value(x) == doctest::Approx(q.profile(std::sqrt(0.005))));
  auto s = q.scaled(0.5);
  CHECK(s.support == doctest::Approx(0.1));
  CHECK(s.profile(0.05) == doctest::Approx(q.profile(0.1)));
  CHECK(s.profile.d2(0.05) == doctest::Approx(4.0 * q.profile.d2(0.1)));

  // centered version: pointwise and radial dual operators coincide
  auto p = derive_params(3, 2.0);
  Eigen::VectorXd y(3);
  y << 0.06, 0.08, 0.0;
  CHECK(apply_dual_at(p, q, y) == doctest::Approx(apply_dual(p, q, 0.1)));
}
