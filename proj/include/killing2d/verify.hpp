#pragma once

#include "killing2d/geometry.hpp"

namespace killing2d {

/// Residual sweep over a lattice. max_abs is the maximum over the grid of
/// max(|r11|, |r22|, |r12|); pass iff max_abs <= tol. Traversal is row-major
/// (x1 outermost), so argmax ties resolve to the first occurrence.
struct GridReport {
  Region region;
  int n1 = 0;
  int n2 = 0;
  double tol = 0.0;
  double max_abs = 0.0;
  Point argmax;
  double max_r11 = 0.0;
  double max_r22 = 0.0;
  double max_r12 = 0.0;
  bool pass = false;
};

/// Flow-isometry check: integrate the flow of V and its Jacobian J, then
/// compare the pulled-back metric J^T G(x(t)) J with G(p). deviation is the
/// max over the three independent components; for a Killing field it decays
/// with step size at the integrator's order (classical RK4).
struct FlowReport {
  Point start;
  double t = 0.0;
  int steps = 0;
  double tol = 0.0;
  Point endpoint;
  double deviation = 0.0;
  bool pass = false;
};

/// Gradient and Hessian estimates by central differences with one Richardson
/// extrapolation step (h, h/2), plus a max component error estimate.
struct FdResult {
  double g1 = 0.0;
  double g2 = 0.0;
  double h11 = 0.0;
  double h12 = 0.0;
  double h22 = 0.0;
  double err_est = 0.0;
};

GridReport grid_residual_check(const DiagonalMetric& m, const VectorField& v,
                               const Region& region, int n, double tol);

FlowReport flow_isometry_check(const DiagonalMetric& m, const VectorField& v, const Point& p,
                               double t, int n_steps, double tol);

FdResult fd_oracle(const Expr& e, const Point& p, double h);

}  // namespace killing2d
