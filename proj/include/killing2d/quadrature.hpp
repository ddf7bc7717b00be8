#pragma once

#include <functional>

namespace killing2d {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;     // accumulated error estimate
  int segments = 0;       // panels evaluated
};

/// Globally adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b]
/// down to absolute tolerance abs_tol. Signed: a > b integrates backwards.
/// Throws QuadratureError with the worst subinterval when the panel cap is
/// reached before convergence.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_segments = 2048);

}  // namespace killing2d
