#include "hardy/radial_function.hpp"

#include <algorithm>
#include <cmath>

namespace hardy {

namespace {
constexpr double kStepD1 = 6e-6;   // ~ cbrt(machine eps)
constexpr double kStepD2 = 1.2e-4;  // ~ eps^(1/4)

std::vector<double> merged(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a);
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}
}  // namespace

double central_d1(const std::function<double(double)>& f, double r, double h) {
  return (f(r + h) - f(r - h)) / (2.0 * h);
}

double central_d2(const std::function<double(double)>& f, double r, double h) {
  return (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
}

RadialFunction::RadialFunction() : value_([](double) { return 0.0; }) {}

RadialFunction RadialFunction::from_values(ValueFn f, double support) {
  RadialFunction out;
  out.value_ = std::move(f);
  out.support_ = support;
  return out;
}

RadialFunction RadialFunction::constant(double c, double support) {
  return from_generic([c](auto r) { return decltype(r)(c); }, support);
}

double RadialFunction::sample(double r) const {
  // Even extension for stencils that cross the origin.
  const double a = std::abs(r);
  return outside(a) ? 0.0 : value_(a);
}

double RadialFunction::operator()(double r) const { return outside(r) ? 0.0 : value_(r); }

Jet2 RadialFunction::jet(double r) const {
  if (outside(r)) return Jet2(0.0);
  if (jet_) return jet_(r);
  return Jet2(value_(r), fd_d1(r), fd_d2(r));
}

double RadialFunction::d1(double r) const {
  if (outside(r)) return 0.0;
  return jet_ ? jet_(r).d1 : fd_d1(r);
}

double RadialFunction::d2(double r) const {
  if (outside(r)) return 0.0;
  return jet_ ? jet_(r).d2 : fd_d2(r);
}

// -1 when a kink lies in [r, r + reach): use a backward stencil. +1 when one
// lies in (r - reach, r): forward stencil. 0 otherwise.
int RadialFunction::kink_side(double r, double reach) const {
  auto check = [&](double k) {
    if (k >= r && k < r + reach) return -1;
    if (k < r && k > r - reach) return 1;
    return 0;
  };
  if (std::isfinite(support_)) {
    if (int side = check(support_)) return side;
  }
  for (double b : breakpoints_) {
    if (int side = check(b)) return side;
  }
  return 0;
}

double RadialFunction::fd_d1(double r) const {
  const double scale = std::max(std::abs(r), fd_floor_);
  const double h = kStepD1 * (scale > 0.0 ? scale : 1.0);
  if (r > 0.0) {
    if (const int side = kink_side(r, 2.0 * h)) {
      const double s = side * h;
      return -side * (3.0 * sample(r) - 4.0 * sample(r + s) + sample(r + 2.0 * s)) / (2.0 * h);
    }
  }
  return (sample(r + h) - sample(r - h)) / (2.0 * h);
}

double RadialFunction::fd_d2(double r) const {
  const double scale = std::max(std::abs(r), fd_floor_);
  const double h = kStepD2 * (scale > 0.0 ? scale : 1.0);
  const double f0 = sample(r);
  if (r > 0.0) {
    if (const int side = kink_side(r, 3.0 * h)) {
      const double s = side * h;
      return (2.0 * f0 - 5.0 * sample(r + s) + 4.0 * sample(r + 2.0 * s) - sample(r + 3.0 * s)) / (h * h);
    }
  }
  const double coarse = (sample(r + 2.0 * h) - 2.0 * f0 + sample(r - 2.0 * h)) / (4.0 * h * h);
  const double fine = (sample(r + h) - 2.0 * f0 + sample(r - h)) / (h * h);
  return (4.0 * fine - coarse) / 3.0;  // Richardson step removes the h^2 term
}

RadialFunction RadialFunction::with_breakpoints(std::vector<double> points) const {
  RadialFunction out(*this);
  out.breakpoints_ = merged(breakpoints_, points);
  return out;
}

RadialFunction RadialFunction::with_fd_floor(double floor) const {
  RadialFunction out(*this);
  out.fd_floor_ = floor;
  return out;
}

RadialFunction RadialFunction::with_support(double support) const {
  RadialFunction out(*this);
  out.support_ = support;
  return out;
}

RadialFunction RadialFunction::finite_difference_copy() const {
  RadialFunction out(*this);
  out.jet_ = nullptr;
  return out;
}

RadialFunction operator+(const RadialFunction& a, const RadialFunction& b) {
  RadialFunction out;
  out.support_ = std::max(a.support_, b.support_);
  out.fd_floor_ = std::max(a.fd_floor_, b.fd_floor_);
  out.breakpoints_ = merged(a.breakpoints_, b.breakpoints_);
  out.value_ = [a, b](double r) { return a(r) + b(r); };
  if (a.jet_ && b.jet_) out.jet_ = [a, b](double r) { return a.jet(r) + b.jet(r); };
  return out;
}

RadialFunction operator*(const RadialFunction& a, const RadialFunction& b) {
  RadialFunction out;
  out.support_ = std::min(a.support_, b.support_);
  out.fd_floor_ = std::max(a.fd_floor_, b.fd_floor_);
  out.breakpoints_ = merged(a.breakpoints_, b.breakpoints_);
  out.value_ = [a, b](double r) { return a(r) * b(r); };
  if (a.jet_ && b.jet_) out.jet_ = [a, b](double r) { return a.jet(r) * b.jet(r); };
  return out;
}

RadialFunction operator*(double s, const RadialFunction& a) {
  RadialFunction out(a);
  out.value_ = [a, s](double r) { return s * a(r); };
  if (a.jet_) out.jet_ = [a, s](double r) { return s * a.jet(r); };
  return out;
}

}  // namespace hardy
