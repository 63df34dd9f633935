#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "hardy/jet.hpp"

namespace hardy {

/// A function of the radius with access to its first two radial derivatives.
///
/// Derivatives are either analytic (the function was built from a jet-valued
/// generic callable) or come from central finite differences. Outside the
/// support radius the function is taken to be zero.
class RadialFunction {
 public:
  using ValueFn = std::function<double(double)>;
  using JetFn = std::function<Jet2(double)>;

  RadialFunction();

  /// Values only; derivatives by central differences.
  static RadialFunction from_values(ValueFn f, double support = kUnbounded);

  /// Build from a callable generic in the scalar type: f(double) and f(Jet2)
  /// must both be valid. Derivatives are exact.
  template <typename F>
  static RadialFunction from_generic(F f, double support = kUnbounded) {
    RadialFunction out;
    out.value_ = [f](double r) { return static_cast<double>(f(r)); };
    out.jet_ = [f](double r) { return Jet2(f(Jet2::variable(r))); };
    out.support_ = support;
    return out;
  }

  static RadialFunction constant(double c, double support = kUnbounded);
  static RadialFunction zero(double support = kUnbounded) { return constant(0.0, support); }

  double operator()(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  Jet2 jet(double r) const;

  bool analytic_derivatives() const noexcept { return static_cast<bool>(jet_); }
  double support_radius() const noexcept { return support_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  /// Radii below which central differences may use the even extension
  /// f(-r) = f(r); zero keeps every stencil strictly positive.
  double fd_floor() const noexcept { return fd_floor_; }

  RadialFunction with_breakpoints(std::vector<double> points) const;
  RadialFunction with_fd_floor(double floor) const;
  RadialFunction with_support(double support) const;
  /// Same values, derivatives forced through finite differences.
  RadialFunction finite_difference_copy() const;

  friend RadialFunction operator+(const RadialFunction& a, const RadialFunction& b);
  friend RadialFunction operator*(const RadialFunction& a, const RadialFunction& b);
  friend RadialFunction operator*(double s, const RadialFunction& a);

  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

 private:
  bool outside(double r) const noexcept { return r > support_; }
  int kink_side(double r, double reach) const;
  double fd_d1(double r) const;
  double fd_d2(double r) const;
  double sample(double r) const;

  ValueFn value_;
  JetFn jet_;
  double support_ = kUnbounded;
  double fd_floor_ = 0.0;
  std::vector<double> breakpoints_;
};

/// Central finite-difference first and second derivatives of f at r, using a
/// relative step. Shared by the derivative-free cross-checks.
double central_d1(const std::function<double(double)>& f, double r, double h);
double central_d2(const std::function<double(double)>& f, double r, double h);

}  // namespace hardy
