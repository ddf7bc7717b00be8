#pragma once

#include <cmath>

namespace killing2d {

enum class Var : int { X1 = 0, X2 = 1 };

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  double get(Var v) const { return v == Var::X1 ? x1 : x2; }
};

/// Second-order jet of a scalar function of (x1, x2) at a point: value,
/// gradient, and Hessian. Only three Hessian entries are stored, so symmetry
/// is structural. Arithmetic on jets propagates derivatives exactly (product
/// and chain rule), up to floating-point rounding.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d11 = 0.0;
  double d12 = 0.0;
  double d22 = 0.0;
};

inline Jet2 jet_const(double c) { return {c, 0.0, 0.0, 0.0, 0.0, 0.0}; }

inline Jet2 jet_var(Var which, const Point& p) {
  Jet2 j;
  j.v = p.get(which);
  j.d1 = which == Var::X1 ? 1.0 : 0.0;
  j.d2 = which == Var::X2 ? 1.0 : 0.0;
  return j;
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d11 + b.d11, a.d12 + b.d12, a.d22 + b.d22};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d11 - b.d11, a.d12 - b.d12, a.d22 - b.d22};
}

inline Jet2 operator-(const Jet2& a) {
  return {-a.v, -a.d1, -a.d2, -a.d11, -a.d12, -a.d22};
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v * b.v;
  r.d1 = a.d1 * b.v + a.v * b.d1;
  r.d2 = a.d2 * b.v + a.v * b.d2;
  r.d11 = a.d11 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d11;
  r.d12 = a.d12 * b.v + a.d1 * b.d2 + a.d2 * b.d1 + a.v * b.d12;
  r.d22 = a.d22 * b.v + 2.0 * a.d2 * b.d2 + a.v * b.d22;
  return r;
}

inline Jet2 operator*(double s, const Jet2& a) {
  return {s * a.v, s * a.d1, s * a.d2, s * a.d11, s * a.d12, s * a.d22};
}

/// phi(u) for a univariate phi with value f, derivative df and second
/// derivative ddf taken at u.v.
inline Jet2 jet_compose(double f, double df, double ddf, const Jet2& u) {
  Jet2 r;
  r.v = f;
  r.d1 = df * u.d1;
  r.d2 = df * u.d2;
  r.d11 = ddf * u.d1 * u.d1 + df * u.d11;
  r.d12 = ddf * u.d1 * u.d2 + df * u.d12;
  r.d22 = ddf * u.d2 * u.d2 + df * u.d22;
  return r;
}

/// 1/u. The caller guarantees u.v != 0.
inline Jet2 jet_inverse(const Jet2& u) {
  const double iv = 1.0 / u.v;
  return jet_compose(iv, -iv * iv, 2.0 * iv * iv * iv, u);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * jet_inverse(b); }

inline bool jet_finite(const Jet2& a) {
  return std::isfinite(a.v) && std::isfinite(a.d1) && std::isfinite(a.d2) &&
         std::isfinite(a.d11) && std::isfinite(a.d12) && std::isfinite(a.d22);
}

}  // namespace killing2d
