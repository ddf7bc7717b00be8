#pragma once

#include <memory>
#include <vector>

#include "killing2d/expr.hpp"

namespace killing2d {

/// Anchored antiderivative F of a transformed univariate expression:
///   F(anchor) = 0,  F'(t) = s(t)^2 | 1/s(t) | s(t)
/// depending on AntiKind, where s is the source expression read as a function
/// of its single variable.
///
/// Values come from adaptive quadrature (absolute tolerance 1e-13 per call).
/// Construction runs a sequential warm-up pass that caches cumulative values
/// on a lattice of checkpoints around the anchor; the object is immutable
/// afterwards and safe for concurrent reads. A later evaluation integrates
/// only from the nearest checkpoint.
class Antiderivative {
 public:
  Antiderivative(AntiKind kind, Expr source, double anchor);

  /// F(x); sign-correct for x < anchor. Throws QuadratureError on
  /// non-convergence and EvalDomainError when the integrand is undefined.
  double value(double x) const;

  /// F'(x) = transformed source at x.
  double integrand(double x) const;

  /// F''(x).
  double integrand_derivative(double x) const;

  AntiKind kind() const { return kind_; }
  const Expr& source() const { return source_; }
  double anchor() const { return anchor_; }
  Var variable() const { return var_; }

  bool same_as(const Antiderivative& other) const;

  static const char* kind_name(AntiKind k);

 private:
  Point at(double t) const;

  AntiKind kind_;
  Expr source_;
  Var var_;
  double anchor_;
  double step_;
  // cumulative F at anchor + i*step_ (forward) and anchor - i*step_ (backward);
  // index 0 holds 0. Warm-up stops early on either side if the integrand
  // leaves its domain there.
  std::vector<double> forward_;
  std::vector<double> backward_;
};

/// Shared-ownership factory used when one antiderivative backs several
/// expression nodes.
std::shared_ptr<const Antiderivative> make_antiderivative(AntiKind kind, Expr source,
                                                          double anchor);

inline double antiderivative_eval(const Antiderivative& a, double x) { return a.value(x); }

}  // namespace killing2d
