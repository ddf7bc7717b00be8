#include "killing2d/geometry.hpp"

#include <cmath>
#include <string>

#include "killing2d/errors.hpp"

namespace killing2d {

namespace {

constexpr double kLameFloor = 1e-14;

void require_nonvanishing(const Expr& f, double value, const char* which, const Point& p) {
  if (std::fabs(value) <= kLameFloor)
    throw EvalDomainError(f.str(), p.x1, p.x2,
                          std::string("Lamé function ") + which + " vanishes");
}

struct MetricJets {
  Jet2 f1;
  Jet2 f2;
};

MetricJets metric_jets(const DiagonalMetric& m, const Point& p) {
  MetricJets j{m.f1.jet(p), m.f2.jet(p)};
  require_nonvanishing(m.f1, j.f1.v, "f1", p);
  require_nonvanishing(m.f2, j.f2.v, "f2", p);
  return j;
}

}  // namespace

Point GridSampler::at(int i, int j) const {
  const double s1 = n1 > 1 ? static_cast<double>(i) / (n1 - 1) : 0.0;
  const double s2 = n2 > 1 ? static_cast<double>(j) / (n2 - 1) : 0.0;
  return {region.x1min + s1 * (region.x1max - region.x1min),
          region.x2min + s2 * (region.x2max - region.x2min)};
}

const char* label_name(DependenceLabel label) {
  switch (label) {
    case DependenceLabel::F1X1_F2X2: return "f1(x1) & f2(x2)";
    case DependenceLabel::F1X1_F2X1: return "f1(x1) & f2(x1)";
    case DependenceLabel::F1X2_F2X1: return "f1(x2) & f2(x1)";
    case DependenceLabel::F1X2_F2Const: return "f1(x2) & f2 const";
    case DependenceLabel::F1X1_F2Const: return "f1(x1) & f2 const";
    case DependenceLabel::BothConst: return "both const";
    case DependenceLabel::General: return "general";
  }
  return "?";
}

FrameCoeffs frame_coeffs(const DiagonalMetric& m, const Point& p) {
  const MetricJets j = metric_jets(m, p);
  return {(j.f2.v / j.f1.v) * j.f1.d2, (j.f1.v / j.f2.v) * j.f2.d1};
}

ConnectionTable connection_table(const DiagonalMetric& m, const Point& p) {
  const FrameCoeffs c = frame_coeffs(m, p);
  ConnectionTable t;
  t.d1e1 = {0.0, c.l12};
  t.d1e2 = {-c.l12, 0.0};
  t.d2e2 = {c.l21, 0.0};
  t.d2e1 = {0.0, -c.l21};
  return t;
}

VectorField convert_basis(const VectorField& v, const DiagonalMetric& m, Basis target) {
  if (v.basis == target) return v;
  if (target == Basis::Coordinate) {
    return {target, Expr::mul(m.f1, v.c1).folded(), Expr::mul(m.f2, v.c2).folded()};
  }
  return {target, Expr::div(v.c1, m.f1).folded(), Expr::div(v.c2, m.f2).folded()};
}

KillingResidual killing_residual_frame(const DiagonalMetric& m, const VectorField& v,
                                       const Point& p) {
  const VectorField vf = convert_basis(v, m, Basis::Frame);
  const MetricJets j = metric_jets(m, p);
  const Jet2 v1 = vf.c1.jet(p);
  const Jet2 v2 = vf.c2.jet(p);
  const double l12 = (j.f2.v / j.f1.v) * j.f1.d2;
  const double l21 = (j.f1.v / j.f2.v) * j.f2.d1;

  KillingResidual r;
  r.r11 = 2.0 * (j.f1.v * v1.d1 - l12 * v2.v);
  r.r22 = 2.0 * (j.f2.v * v2.d2 - l21 * v1.v);
  r.r12 = j.f1.v * v2.d1 + j.f2.v * v1.d2 + l12 * v1.v + l21 * v2.v;
  return r;
}

Sym2 killing_residual_coordinate(const DiagonalMetric& m, const VectorField& v, const Point& p) {
  const VectorField vc = convert_basis(v, m, Basis::Coordinate);
  const MetricJets j = metric_jets(m, p);
  const Jet2 w1 = vc.c1.jet(p);
  const Jet2 w2 = vc.c2.jet(p);

  // g_ii = 1/f_i^2 and its first partials.
  const double g11 = 1.0 / (j.f1.v * j.f1.v);
  const double g22 = 1.0 / (j.f2.v * j.f2.v);
  const double g11_1 = -2.0 * j.f1.d1 / (j.f1.v * j.f1.v * j.f1.v);
  const double g11_2 = -2.0 * j.f1.d2 / (j.f1.v * j.f1.v * j.f1.v);
  const double g22_1 = -2.0 * j.f2.d1 / (j.f2.v * j.f2.v * j.f2.v);
  const double g22_2 = -2.0 * j.f2.d2 / (j.f2.v * j.f2.v * j.f2.v);

  Sym2 t;
  t.t11 = w1.v * g11_1 + w2.v * g11_2 + 2.0 * g11 * w1.d1;
  t.t22 = w1.v * g22_1 + w2.v * g22_2 + 2.0 * g22 * w2.d2;
  t.t12 = g11 * w1.d2 + g22 * w2.d1;
  return t;
}

VarDependence dependence(const Expr& f, const GridSampler& sampler, double eps) {
  double max_d1 = 0.0;
  double max_d2 = 0.0;
  for (int i = 0; i < sampler.n1; ++i) {
    for (int j = 0; j < sampler.n2; ++j) {
      const Jet2 jet = f.jet(sampler.at(i, j));
      max_d1 = std::max(max_d1, std::fabs(jet.d1));
      max_d2 = std::max(max_d2, std::fabs(jet.d2));
    }
  }
  const bool on_x1 = max_d1 > eps;
  const bool on_x2 = max_d2 > eps;
  if (!on_x1 && !on_x2) return VarDependence::Constant;
  if (on_x1 && !on_x2) return VarDependence::X1Only;
  if (!on_x1 && on_x2) return VarDependence::X2Only;
  return VarDependence::Both;
}

DependenceLabel classify_dependence(const DiagonalMetric& m, const GridSampler& sampler) {
  const VarDependence d1 = dependence(m.f1, sampler);
  const VarDependence d2 = dependence(m.f2, sampler);

  const auto fits_x1 = [](VarDependence d) {
    return d == VarDependence::Constant || d == VarDependence::X1Only;
  };
  const auto fits_x2 = [](VarDependence d) {
    return d == VarDependence::Constant || d == VarDependence::X2Only;
  };
  const bool c1 = d1 == VarDependence::Constant;
  const bool c2 = d2 == VarDependence::Constant;

  if (c1 && c2) return DependenceLabel::BothConst;
  if (fits_x1(d1) && c2) return DependenceLabel::F1X1_F2Const;
  if (fits_x2(d1) && c2) return DependenceLabel::F1X2_F2Const;
  if (fits_x1(d1) && fits_x2(d2)) return DependenceLabel::F1X1_F2X2;
  if (fits_x1(d1) && fits_x1(d2)) return DependenceLabel::F1X1_F2X1;
  if (fits_x2(d1) && fits_x1(d2)) return DependenceLabel::F1X2_F2X1;
  return DependenceLabel::General;
}

void validate_nonzero(const DiagonalMetric& m, const GridSampler& sampler, double tol) {
  for (int i = 0; i < sampler.n1; ++i) {
    for (int j = 0; j < sampler.n2; ++j) {
      const Point p = sampler.at(i, j);
      const double f1 = m.f1.value(p);
      const double f2 = m.f2.value(p);
      if (std::fabs(f1) <= tol)
        throw EvalDomainError(m.f1.str(), p.x1, p.x2, "Lamé function f1 vanishes on the region");
      if (std::fabs(f2) <= tol)
        throw EvalDomainError(m.f2.str(), p.x1, p.x2, "Lamé function f2 vanishes on the region");
    }
  }
}

}  // namespace killing2d
