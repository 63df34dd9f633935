#pragma once

#include <cmath>

namespace hardy {

/// Second-order forward-mode jet: a value together with its first and second
/// derivative with respect to one independent variable.
template <typename Scalar>
struct Jet {
  Scalar v{};
  Scalar d1{};
  Scalar d2{};

  constexpr Jet() = default;
  constexpr Jet(Scalar value) : v(value) {}  // NOLINT: implicit constant lift
  constexpr Jet(Scalar value, Scalar first, Scalar second) : v(value), d1(first), d2(second) {}

  static constexpr Jet variable(Scalar x) { return Jet(x, Scalar(1), Scalar(0)); }
};

using Jet2 = Jet<double>;

template <typename S>
constexpr Jet<S> operator-(const Jet<S>& a) {
  return {-a.v, -a.d1, -a.d2};
}
template <typename S>
constexpr Jet<S> operator+(const Jet<S>& a, const Jet<S>& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}
template <typename S>
constexpr Jet<S> operator-(const Jet<S>& a, const Jet<S>& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}
template <typename S>
constexpr Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + S(2) * a.d1 * b.d1 + a.v * b.d2};
}
template <typename S>
constexpr Jet<S> operator/(const Jet<S>& a, const Jet<S>& b) {
  const S inv = S(1) / b.v;
  const S q = a.v * inv;
  const S q1 = (a.d1 - q * b.d1) * inv;
  const S q2 = (a.d2 - S(2) * q1 * b.d1 - q * b.d2) * inv;
  return {q, q1, q2};
}

template <typename S>
constexpr Jet<S> operator+(const Jet<S>& a, S b) { return {a.v + b, a.d1, a.d2}; }
template <typename S>
constexpr Jet<S> operator+(S a, const Jet<S>& b) { return b + a; }
template <typename S>
constexpr Jet<S> operator-(const Jet<S>& a, S b) { return {a.v - b, a.d1, a.d2}; }
template <typename S>
constexpr Jet<S> operator-(S a, const Jet<S>& b) { return {a - b.v, -b.d1, -b.d2}; }
template <typename S>
constexpr Jet<S> operator*(const Jet<S>& a, S b) { return {a.v * b, a.d1 * b, a.d2 * b}; }
template <typename S>
constexpr Jet<S> operator*(S a, const Jet<S>& b) { return b * a; }
template <typename S>
constexpr Jet<S> operator/(const Jet<S>& a, S b) { return {a.v / b, a.d1 / b, a.d2 / b}; }
template <typename S>
constexpr Jet<S> operator/(S a, const Jet<S>& b) { return Jet<S>(a) / b; }

// Chain rule for g(a(x)) given g, g', g'' at a.v.
template <typename S>
constexpr Jet<S> compose(const Jet<S>& a, S g, S g1, S g2) {
  return {g, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2};
}

template <typename S>
Jet<S> pow(const Jet<S>& a, S p) {
  using std::pow;
  const S g = pow(a.v, p);
  const S g1 = p == S(0) ? S(0) : p * pow(a.v, p - S(1));
  const S g2 = (p == S(0) || p == S(1)) ? S(0) : p * (p - S(1)) * pow(a.v, p - S(2));
  return compose(a, g, g1, g2);
}
template <typename S>
Jet<S> log(const Jet<S>& a) {
  using std::log;
  return compose(a, log(a.v), S(1) / a.v, -S(1) / (a.v * a.v));
}
template <typename S>
Jet<S> exp(const Jet<S>& a) {
  using std::exp;
  const S e = exp(a.v);
  return compose(a, e, e, e);
}
template <typename S>
Jet<S> sin(const Jet<S>& a) {
  using std::cos;
  using std::sin;
  const S s = sin(a.v);
  return compose(a, s, cos(a.v), -s);
}
template <typename S>
Jet<S> cos(const Jet<S>& a) {
  using std::cos;
  using std::sin;
  const S c = cos(a.v);
  return compose(a, c, -sin(a.v), -c);
}
template <typename S>
Jet<S> sqrt(const Jet<S>& a) {
  using std::sqrt;
  const S s = sqrt(a.v);
  return compose(a, s, S(0.5) / s, S(-0.25) / (s * a.v));
}

/// Value-of helpers so templated closed forms can branch on magnitudes.
inline double value_of(double x) { return x; }
template <typename S>
S value_of(const Jet<S>& x) { return x.v; }

}  // namespace hardy
