#pragma once

#include <array>

#include "killing2d/expr.hpp"

namespace killing2d {

/// Diagonal metric g = (1/f1^2) dx1 (x) dx1 + (1/f2^2) dx2 (x) dx2 given by
/// its Lamé functions f1, f2, which must be nowhere zero on the working
/// region (validated by sampling; see validate_nonzero).
struct DiagonalMetric {
  Expr f1;
  Expr f2;
};

enum class Basis { Frame, Coordinate };

/// Vector field with two component expressions, either in the orthonormal
/// frame E_i = f_i d/dx^i or in the coordinate basis d/dx^i. The coordinate
/// component i equals f_i times the frame component i.
struct VectorField {
  Basis basis = Basis::Frame;
  Expr c1;
  Expr c2;
};

/// Frame coefficients at a point:
///   l12 = (f2/f1) df1/dx2,  l21 = (f1/f2) df2/dx1.
struct FrameCoeffs {
  double l12 = 0.0;
  double l21 = 0.0;
};

/// Covariant derivatives of the frame fields, as (E1, E2) coefficient pairs:
///   nabla_{E1}E1 = l12 E2, nabla_{E1}E2 = -l12 E1,
///   nabla_{E2}E2 = l21 E1, nabla_{E2}E1 = -l21 E2.
struct ConnectionTable {
  std::array<double, 2> d1e1;  // nabla_{E1} E1
  std::array<double, 2> d1e2;  // nabla_{E1} E2
  std::array<double, 2> d2e2;  // nabla_{E2} E2
  std::array<double, 2> d2e1;  // nabla_{E2} E1
};

/// The three Lie-derivative components of the metric in the frame basis:
///   r11 = (L_V g)(E1,E1) = 2{E1(V1) - l12 V2}
///   r22 = (L_V g)(E2,E2) = 2{E2(V2) - l21 V1}
///   r12 = (L_V g)(E1,E2) = E1(V2) + E2(V1) + l12 V1 + l21 V2
/// V is Killing on a region iff all three vanish identically there.
struct KillingResidual {
  double r11 = 0.0;
  double r22 = 0.0;
  double r12 = 0.0;
};

/// Symmetric 2x2 tensor value (coordinate components).
struct Sym2 {
  double t11 = 0.0;
  double t12 = 0.0;
  double t22 = 0.0;
};

struct Region {
  double x1min = -1.0;
  double x1max = 1.0;
  double x2min = -1.0;
  double x2max = 1.0;
};

/// Evenly spaced lattice over a region, endpoints included. Index i runs
/// along x1, j along x2.
struct GridSampler {
  Region region;
  int n1 = 41;
  int n2 = 41;

  Point at(int i, int j) const;
};

enum class VarDependence { Constant, X1Only, X2Only, Both };

enum class DependenceLabel {
  F1X1_F2X2,    // f1(x1) & f2(x2)
  F1X1_F2X1,    // f1(x1) & f2(x1)
  F1X2_F2X1,    // f1(x2) & f2(x1)
  F1X2_F2Const, // f1(x2) & f2 const
  F1X1_F2Const, // f1(x1) & f2 const
  BothConst,
  General,
};

const char* label_name(DependenceLabel label);

FrameCoeffs frame_coeffs(const DiagonalMetric& m, const Point& p);

ConnectionTable connection_table(const DiagonalMetric& m, const Point& p);

/// Rewrites the component expressions into the target basis (multiplying or
/// dividing by the Lamé functions). Division is recorded symbolically;
/// evaluation may raise a domain error later.
VectorField convert_basis(const VectorField& v, const DiagonalMetric& m, Basis target);

/// Frame residual at p; converts v to the frame basis first if needed.
KillingResidual killing_residual_frame(const DiagonalMetric& m, const VectorField& v,
                                       const Point& p);

/// Coordinate Lie derivative (L_V g)_ij = W^k d_k g_ij + g_kj d_i W^k
/// + g_ik d_j W^k with W the coordinate components. Related to the frame
/// residual by (L_V g)(E_i, E_j) = f_i f_j (L_V g)_ij.
Sym2 killing_residual_coordinate(const DiagonalMetric& m, const VectorField& v, const Point& p);

/// Sampled variable dependence: |df/dx_j| <= eps at every lattice point
/// counts as independence of x_j. Exact elementary expressions produce exact
/// zero partials through jets, so the default threshold is tight.
VarDependence dependence(const Expr& f, const GridSampler& sampler, double eps = 1e-10);

/// Most specific matching label; constants count as depending on either
/// variable alone. Falls back to General.
DependenceLabel classify_dependence(const DiagonalMetric& m, const GridSampler& sampler);

/// Sampled nowhere-zero validation (|f_i| > tol at every lattice point).
/// Sampling cannot prove global nonvanishing; this is a soundness gate for
/// desk-scale regions, not a proof.
void validate_nonzero(const DiagonalMetric& m, const GridSampler& sampler, double tol = 1e-12);

}  // namespace killing2d
