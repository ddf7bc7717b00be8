#include "killing2d/families.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "killing2d/errors.hpp"

namespace killing2d {

namespace {

[[noreturn]] void inadmissible(const std::string& reason) {
  throw AdmissibilityError("case inadmissible: " + reason);
}

bool fits_x1(VarDependence d) {
  return d == VarDependence::Constant || d == VarDependence::X1Only;
}
bool fits_x2(VarDependence d) {
  return d == VarDependence::Constant || d == VarDependence::X2Only;
}

Point region_center(const Region& r) {
  return {0.5 * (r.x1min + r.x1max), 0.5 * (r.x2min + r.x2max)};
}

Expr lit(double v) { return Expr::lit(v); }

// slope * var + intercept, folded so zero coefficients disappear.
Expr linear(double slope, Var v, double intercept) {
  return Expr::add(Expr::mul(lit(slope), Expr::var(v)), lit(intercept)).folded();
}

void require_no_k(FamilyCase c, const FamilyParams& p) {
  if (p.k != 0.0)
    throw AdmissibilityError(std::string("family case ") + family_name(c) +
                             " takes no k (got k=" + format_double(p.k) + ")");
}

void require_c_count(FamilyCase c, const FamilyParams& p) {
  const std::size_t want = family_c_count(c);
  if (p.c.size() != want)
    throw AdmissibilityError(std::string("family case ") + family_name(c) + " takes " +
                             std::to_string(want) + " c-constants, got " +
                             std::to_string(p.c.size()));
}

// V2 together with its derivative and its anchored antiderivative v2
// (v2(0) = 0) for the ConstF2_F1ofX2 branches selected by the sign of k.
struct SecondComponent {
  Expr v2;
  Expr dv2;
  Expr int_v2;
};

SecondComponent second_component(double k, double c1, double c2) {
  const Expr x1 = Expr::var(Var::X1);
  SecondComponent out;
  if (k == 0.0) {
    out.v2 = linear(c1, Var::X1, c2);
    out.dv2 = lit(c1);
    out.int_v2 = Expr::add(Expr::mul(lit(0.5 * c1), Expr::pow(x1, lit(2.0))),
                           Expr::mul(lit(c2), x1))
                     .folded();
  } else if (k > 0.0) {
    const double s = std::sqrt(k);
    const Expr ep = Expr::call(FuncKind::Exp, Expr::mul(lit(s), x1)).folded();
    const Expr em = Expr::call(FuncKind::Exp, Expr::mul(lit(-s), x1)).folded();
    out.v2 = Expr::add(Expr::mul(lit(c1), ep), Expr::mul(lit(c2), em)).folded();
    out.dv2 = Expr::add(Expr::mul(lit(c1 * s), ep), Expr::mul(lit(-c2 * s), em)).folded();
    out.int_v2 = Expr::add(Expr::mul(lit(c1 / s), Expr::sub(ep, lit(1.0))),
                           Expr::mul(lit(c2 / s), Expr::sub(lit(1.0), em)))
                     .folded();
  } else {
    const double s = std::sqrt(-k);
    const Expr cs = Expr::call(FuncKind::Cos, Expr::mul(lit(s), x1)).folded();
    const Expr sn = Expr::call(FuncKind::Sin, Expr::mul(lit(s), x1)).folded();
    out.v2 = Expr::add(Expr::mul(lit(c1), cs), Expr::mul(lit(c2), sn)).folded();
    out.dv2 = Expr::add(Expr::mul(lit(-c1 * s), sn), Expr::mul(lit(c2 * s), cs)).folded();
    out.int_v2 = Expr::add(Expr::mul(lit(c1 / s), sn),
                           Expr::mul(lit(c2 / s), Expr::sub(lit(1.0), cs)))
                     .folded();
  }
  return out;
}

}  // namespace

const char* family_name(FamilyCase c) {
  switch (c) {
    case FamilyCase::SeparableDiag: return "SeparableDiag";
    case FamilyCase::BothX1_i: return "BothX1_i";
    case FamilyCase::BothX1_ii: return "BothX1_ii";
    case FamilyCase::Crossed_case1: return "Crossed_case1";
    case FamilyCase::Crossed_case2: return "Crossed_case2";
    case FamilyCase::Crossed_case3: return "Crossed_case3";
    case FamilyCase::Crossed_case4: return "Crossed_case4";
    case FamilyCase::ConstF2_F1ofX1: return "ConstF2_F1ofX1";
    case FamilyCase::ConstF2_F1ofX2: return "ConstF2_F1ofX2";
    case FamilyCase::BothConst: return "BothConst";
    case FamilyCase::Euclidean: return "Euclidean";
  }
  return "?";
}

FamilyCase family_from_name(std::string_view name) {
  static constexpr FamilyCase all[] = {
      FamilyCase::SeparableDiag,  FamilyCase::BothX1_i,       FamilyCase::BothX1_ii,
      FamilyCase::Crossed_case1,  FamilyCase::Crossed_case2,  FamilyCase::Crossed_case3,
      FamilyCase::Crossed_case4,  FamilyCase::ConstF2_F1ofX1, FamilyCase::ConstF2_F1ofX2,
      FamilyCase::BothConst,      FamilyCase::Euclidean,
  };
  for (FamilyCase c : all) {
    if (name == family_name(c)) return c;
  }
  throw InputError("unknown family case '" + std::string(name) + "'");
}

std::size_t family_c_count(FamilyCase c) {
  switch (c) {
    case FamilyCase::SeparableDiag: return 2;
    case FamilyCase::BothX1_i: return 2;
    case FamilyCase::BothX1_ii: return 1;
    case FamilyCase::Crossed_case1: return 2;
    case FamilyCase::Crossed_case2: return 1;
    case FamilyCase::Crossed_case3: return 1;
    case FamilyCase::Crossed_case4: return 0;
    case FamilyCase::ConstF2_F1ofX1: return 2;
    case FamilyCase::ConstF2_F1ofX2: return 3;  // c1, c2, c0
    case FamilyCase::BothConst: return 2;
    case FamilyCase::Euclidean: return 3;  // c0, c1, c2
  }
  return 0;
}

std::size_t family_constant_count(FamilyCase c) {
  switch (c) {
    case FamilyCase::Crossed_case1:
    case FamilyCase::ConstF2_F1ofX1:
    case FamilyCase::BothConst:
      return family_c_count(c) + 1;  // k is free
    default:
      return family_c_count(c);
  }
}

FamilyProvenance family_provenance(FamilyCase c) {
  switch (c) {
    case FamilyCase::SeparableDiag:
      return {"f1 = f1(x1) and f2 = f2(x2)", "V = c1 E1 + c2 E2 with constant frame components"};
    case FamilyCase::BothX1_i:
      return {"f1 = f1(x1) and f2 constant", "V = c1 E1 + c2 E2 with constant frame components"};
    case FamilyCase::BothX1_ii:
      return {"f1 = f1(x1) and f2 = f2(x1)", "V = (c2/f2) E2"};
    case FamilyCase::Crossed_case1:
      return {"f1 = k1 and f2 = k2 constants",
              "V1 = k k1 x2 + c1, V2 = -k k2 x1 + c2 (frame components)"};
    case FamilyCase::Crossed_case2:
      return {"f1 constant and f2 = f2(x1)", "V = (c1/f2) E2"};
    case FamilyCase::Crossed_case3:
      return {"f1 = f1(x2) and f2 constant", "V = (c1/f1) E1"};
    case FamilyCase::Crossed_case4:
      return {"f1 = f1(x2) and f2 = f2(x1)", "V = 0"};
    case FamilyCase::ConstF2_F1ofX1:
      return {"f1 = f1(x1) and f2 = k2 constant",
              "V1 = -(k/k2) x2 + c1, V2 = k F2(x1) + c2 with F2' = 1/f1"};
    case FamilyCase::ConstF2_F1ofX2:
      return {"f1 = f1(x2) and f2 = k2 constant",
              "V2'' = k V2 with k = -k2^2 (f1'/f1)'/f1^2; "
              "V1 = -(F1/(k2 f1)) V2' + (lambda v2 + c0)/f1, F1' = f1^2, v2' = V2"};
    case FamilyCase::BothConst:
      return {"f1 = k1 and f2 = k2 constants",
              "V1 = -(k/k2) x2 + c1, V2 = (k/k1) x1 + c2 (frame components)"};
    case FamilyCase::Euclidean:
      return {"f1 = f2 constant (canonical metric up to scale)",
              "coordinate V = (c0 x2 + c1, -(c0 x1 + c2))"};
  }
  return {"?", "?"};
}

std::vector<double> curvature_samples(const Region& region, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double s = n > 1 ? static_cast<double>(i) / (n - 1) : 0.5;
    out.push_back(region.x2min + s * (region.x2max - region.x2min));
  }
  return out;
}

CurvatureConstant curvature_constant_k(const DiagonalMetric& m,
                                       std::span<const double> samples) {
  if (samples.empty()) throw InputError("curvature_constant_k needs at least one sample");
  const double k2 = m.f2.value({0.0, samples[0]});
  if (std::fabs(k2) <= 1e-14)
    throw AdmissibilityError("curvature constant requires a nonvanishing constant f2");

  double sum = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (double s : samples) {
    const Jet2 f = m.f1.jet({0.0, s});
    // k(x2) = -k2^2 (f1'' f1 - (f1')^2) / f1^4, primes meaning d/dx2.
    const double f2v = f.v * f.v;
    const double k = -k2 * k2 * (f.d22 * f.v - f.d2 * f.d2) / (f2v * f2v);
    sum += k;
    lo = first ? k : std::min(lo, k);
    hi = first ? k : std::max(hi, k);
    first = false;
  }
  CurvatureConstant out;
  out.k = sum / static_cast<double>(samples.size());
  out.constant = (hi - lo) <= 1e-8 * (1.0 + std::fabs(out.k));
  return out;
}

VectorField build_family(FamilyCase c, const FamilyParams& params, const DiagonalMetric& m,
                         const Region& region) {
  const GridSampler sampler{region, 41, 41};
  validate_nonzero(m, sampler);
  require_c_count(c, params);

  const VarDependence d1 = dependence(m.f1, sampler);
  const VarDependence d2 = dependence(m.f2, sampler);
  const Point center = region_center(region);
  const Expr x1 = Expr::var(Var::X1);
  const Expr x2 = Expr::var(Var::X2);

  switch (c) {
    case FamilyCase::SeparableDiag: {
      require_no_k(c, params);
      if (!fits_x1(d1)) inadmissible("f1 depends on x2 (expected f1 = f1(x1))");
      if (!fits_x2(d2)) inadmissible("f2 depends on x1 (expected f2 = f2(x2))");
      return {Basis::Frame, lit(params.c[0]), lit(params.c[1])};
    }

    case FamilyCase::BothX1_i: {
      require_no_k(c, params);
      if (!fits_x1(d1)) inadmissible("f1 depends on x2 (expected f1 = f1(x1))");
      if (d2 != VarDependence::Constant) inadmissible("f2 not constant on region");
      return {Basis::Frame, lit(params.c[0]), lit(params.c[1])};
    }

    case FamilyCase::BothX1_ii: {
      require_no_k(c, params);
      if (!fits_x1(d1)) inadmissible("f1 depends on x2 (expected f1 = f1(x1))");
      if (!fits_x1(d2)) inadmissible("f2 depends on x2 (expected f2 = f2(x1))");
      return {Basis::Frame, lit(0.0), Expr::div(lit(params.c[0]), m.f2).folded()};
    }

    case FamilyCase::Crossed_case1: {
      if (d1 != VarDependence::Constant) inadmissible("f1 not constant on region");
      if (d2 != VarDependence::Constant) inadmissible("f2 not constant on region");
      const double k1 = m.f1.value(center);
      const double k2 = m.f2.value(center);
      return {Basis::Frame, linear(params.k * k1, Var::X2, params.c[0]),
              linear(-params.k * k2, Var::X1, params.c[1])};
    }

    case FamilyCase::Crossed_case2: {
      require_no_k(c, params);
      if (d1 != VarDependence::Constant) inadmissible("f1 not constant on region");
      if (!fits_x1(d2)) inadmissible("f2 depends on x2 (expected f2 = f2(x1))");
      return {Basis::Frame, lit(0.0), Expr::div(lit(params.c[0]), m.f2).folded()};
    }

    case FamilyCase::Crossed_case3: {
      require_no_k(c, params);
      if (d2 != VarDependence::Constant) inadmissible("f2 not constant on region");
      if (!fits_x2(d1)) inadmissible("f1 depends on x1 (expected f1 = f1(x2))");
      return {Basis::Frame, Expr::div(lit(params.c[0]), m.f1).folded(), lit(0.0)};
    }

    case FamilyCase::Crossed_case4: {
      require_no_k(c, params);
      if (!fits_x2(d1)) inadmissible("f1 depends on x1 (expected f1 = f1(x2))");
      if (!fits_x1(d2)) inadmissible("f2 depends on x2 (expected f2 = f2(x1))");
      return {Basis::Frame, lit(0.0), lit(0.0)};
    }

    case FamilyCase::ConstF2_F1ofX1: {
      if (!fits_x1(d1)) inadmissible("f1 depends on x2 (expected f1 = f1(x1))");
      if (d2 != VarDependence::Constant) inadmissible("f2 not constant on region");
      const double k2 = m.f2.value(center);
      Expr v1 = linear(-params.k / k2, Var::X2, params.c[0]);
      Expr v2;
      if (params.k == 0.0) {
        v2 = lit(params.c[1]);
      } else {
        Expr f2ofx1 = Expr::antideriv(AntiKind::Reciprocal, m.f1, params.anchor, x1);
        v2 = Expr::add(Expr::mul(lit(params.k), std::move(f2ofx1)), lit(params.c[1])).folded();
      }
      return {Basis::Frame, std::move(v1), std::move(v2)};
    }

    case FamilyCase::ConstF2_F1ofX2: {
      if (!fits_x2(d1)) inadmissible("f1 depends on x1 (expected f1 = f1(x2))");
      if (d2 != VarDependence::Constant) inadmissible("f2 not constant on region");
      const double k2 = m.f2.value(center);
      const double c1 = params.c[0];
      const double c2 = params.c[1];
      const double c0 = params.c[2];

      double k_build = 0.0;
      if (c1 != 0.0 || c2 != 0.0) {
        const CurvatureConstant cc = curvature_constant_k(m, curvature_samples(region));
        if (!cc.constant)
          inadmissible("curvature constant k varies on region (constant required for V2 != 0)");
        if (std::fabs(params.k - cc.k) > 1e-6 * (1.0 + std::fabs(cc.k)))
          inadmissible("requested k=" + format_double(params.k) +
                       " does not match metric k=" + format_double(cc.k));
        k_build = std::fabs(cc.k) <= 1e-8 * (1.0 + std::fabs(cc.k)) ? 0.0 : cc.k;
      }

      const SecondComponent sc = second_component(k_build, c1, c2);
      const auto f1_sq = make_antiderivative(AntiKind::Square, m.f1, params.anchor);
      const Expr big_f1 = Expr::antideriv(f1_sq, x2);

      // lambda = k2 (f1'/f1)(x2*) + k F1(x2*)/k2 is x2-independent exactly when
      // k is the metric's curvature constant; evaluated at x2* = anchor where
      // F1 vanishes.
      const Jet2 f1_at_anchor = m.f1.jet({center.x1, params.anchor});
      const double lambda = k2 * (f1_at_anchor.d2 / f1_at_anchor.v) +
                            k_build * f1_sq->value(params.anchor) / k2;

      const Expr term1 =
          Expr::neg(Expr::mul(Expr::div(big_f1, Expr::mul(lit(k2), m.f1)), sc.dv2));
      const Expr term2 =
          Expr::div(Expr::add(Expr::mul(lit(lambda), sc.int_v2), lit(c0)), m.f1);
      return {Basis::Frame, Expr::add(term1, term2).folded(), sc.v2};
    }

    case FamilyCase::BothConst: {
      if (d1 != VarDependence::Constant) inadmissible("f1 not constant on region");
      if (d2 != VarDependence::Constant) inadmissible("f2 not constant on region");
      const double k1 = m.f1.value(center);
      const double k2 = m.f2.value(center);
      return {Basis::Frame, linear(-params.k / k2, Var::X2, params.c[0]),
              linear(params.k / k1, Var::X1, params.c[1])};
    }

    case FamilyCase::Euclidean: {
      require_no_k(c, params);
      if (d1 != VarDependence::Constant) inadmissible("f1 not constant on region");
      if (d2 != VarDependence::Constant) inadmissible("f2 not constant on region");
      const double k1 = m.f1.value(center);
      const double k2 = m.f2.value(center);
      if (std::fabs(k1 * k1 - k2 * k2) > 1e-9 * (1.0 + k1 * k1))
        inadmissible("Euclidean case requires constant Lamé functions with f1^2 = f2^2");
      const double c0 = params.c[0];
      return {Basis::Coordinate, linear(c0, Var::X2, params.c[1]),
              Expr::neg(linear(c0, Var::X1, params.c[2])).folded()};
    }
  }
  throw AdmissibilityError("unknown family case");
}

std::vector<VectorField> enumerate_basis(FamilyCase c, const DiagonalMetric& m,
                                         const Region& region) {
  std::vector<VectorField> out;
  const std::size_t nc = family_c_count(c);

  if (c == FamilyCase::ConstF2_F1ofX2) {
    // V2 generators exist only when the curvature constant is constant; the
    // V2 = 0 generator c0/f1 always does.
    const CurvatureConstant cc = curvature_constant_k(m, curvature_samples(region));
    if (cc.constant) {
      for (std::size_t j = 0; j < 2; ++j) {
        FamilyParams p;
        p.k = cc.k;
        p.c.assign(3, 0.0);
        p.c[j] = 1.0;
        out.push_back(build_family(c, p, m, region));
      }
    }
    FamilyParams p;
    p.c = {0.0, 0.0, 1.0};
    out.push_back(build_family(c, p, m, region));
    return out;
  }

  if (family_constant_count(c) == nc + 1) {  // k is a free constant
    FamilyParams p;
    p.k = 1.0;
    p.c.assign(nc, 0.0);
    out.push_back(build_family(c, p, m, region));
  }
  for (std::size_t j = 0; j < nc; ++j) {
    FamilyParams p;
    p.c.assign(nc, 0.0);
    p.c[j] = 1.0;
    out.push_back(build_family(c, p, m, region));
  }
  return out;
}

}  // namespace killing2d
