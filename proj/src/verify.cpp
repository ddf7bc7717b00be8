#include "killing2d/verify.hpp"

#include <array>
#include <cmath>

#include "killing2d/errors.hpp"

namespace killing2d {

namespace {

constexpr double kLameFloor = 1e-14;

// Metric matrix entries at a point.
struct GValues {
  double g11 = 0.0;
  double g22 = 0.0;
};

GValues metric_values(const DiagonalMetric& m, const Point& p) {
  const double f1 = m.f1.value(p);
  const double f2 = m.f2.value(p);
  if (std::fabs(f1) <= kLameFloor)
    throw EvalDomainError(m.f1.str(), p.x1, p.x2, "Lamé function f1 vanishes");
  if (std::fabs(f2) <= kLameFloor)
    throw EvalDomainError(m.f2.str(), p.x1, p.x2, "Lamé function f2 vanishes");
  return {1.0 / (f1 * f1), 1.0 / (f2 * f2)};
}

// Flow state: position and the 2x2 Jacobian of the flow map, column-major.
struct FlowState {
  double x1, x2;
  double j11, j21, j12, j22;
};

FlowState operator+(const FlowState& a, const FlowState& b) {
  return {a.x1 + b.x1, a.x2 + b.x2, a.j11 + b.j11, a.j21 + b.j21, a.j12 + b.j12, a.j22 + b.j22};
}

FlowState operator*(double s, const FlowState& a) {
  return {s * a.x1, s * a.x2, s * a.j11, s * a.j21, s * a.j12, s * a.j22};
}

}  // namespace

GridReport grid_residual_check(const DiagonalMetric& m, const VectorField& v,
                               const Region& region, int n, double tol) {
  if (n < 2) throw InputError("grid resolution must be at least 2 per axis");

  const VectorField vf = convert_basis(v, m, Basis::Frame);
  GridSampler sampler{region, n, n};

  GridReport report;
  report.region = region;
  report.n1 = n;
  report.n2 = n;
  report.tol = tol;
  report.argmax = sampler.at(0, 0);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point p = sampler.at(i, j);
      KillingResidual r;
      try {
        r = killing_residual_frame(m, vf, p);
      } catch (const EvalDomainError& e) {
        throw EvalDomainError(e.subexpr, p.x1, p.x2,
                              e.reason + " (lattice point " + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
      }
      report.max_r11 = std::max(report.max_r11, std::fabs(r.r11));
      report.max_r22 = std::max(report.max_r22, std::fabs(r.r22));
      report.max_r12 = std::max(report.max_r12, std::fabs(r.r12));
      const double local = std::max({std::fabs(r.r11), std::fabs(r.r22), std::fabs(r.r12)});
      if (local > report.max_abs) {
        report.max_abs = local;
        report.argmax = p;
      }
    }
  }
  report.pass = report.max_abs <= tol;
  return report;
}

FlowReport flow_isometry_check(const DiagonalMetric& m, const VectorField& v, const Point& p,
                               double t, int n_steps, double tol) {
  if (n_steps < 1) throw InputError("flow integration needs at least one step");

  const VectorField vc = convert_basis(v, m, Basis::Coordinate);

  // dx/ds = W(x), dJ/ds = DW(x) J: the Jacobian rides the variational
  // equation instead of being finite-differenced from nearby flows.
  const auto rhs = [&](const FlowState& s) -> FlowState {
    const Point q{s.x1, s.x2};
    const Jet2 w1 = vc.c1.jet(q);
    const Jet2 w2 = vc.c2.jet(q);
    FlowState d;
    d.x1 = w1.v;
    d.x2 = w2.v;
    d.j11 = w1.d1 * s.j11 + w1.d2 * s.j21;
    d.j21 = w2.d1 * s.j11 + w2.d2 * s.j21;
    d.j12 = w1.d1 * s.j12 + w1.d2 * s.j22;
    d.j22 = w2.d1 * s.j12 + w2.d2 * s.j22;
    return d;
  };

  FlowState state{p.x1, p.x2, 1.0, 0.0, 0.0, 1.0};
  const double h = t / n_steps;
  for (int step = 0; step < n_steps; ++step) {
    FlowState k1, k2, k3, k4;
    try {
      k1 = rhs(state);
      k2 = rhs(state + (0.5 * h) * k1);
      k3 = rhs(state + (0.5 * h) * k2);
      k4 = rhs(state + h * k3);
    } catch (const EvalDomainError& e) {
      throw EvalDomainError(e.subexpr, e.x1, e.x2,
                            e.reason + " (flow left the evaluable domain near s=" +
                                format_double(step * h) + ")");
    }
    state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(state.x1) || !std::isfinite(state.x2))
      throw Error("flow integration diverged near s=" + format_double(step * h));
  }

  const GValues g0 = metric_values(m, p);
  const GValues gt = metric_values(m, {state.x1, state.x2});

  // Pull back: (J^T G(x(t)) J)_ab, G diagonal.
  const double m11 = gt.g11 * state.j11 * state.j11 + gt.g22 * state.j21 * state.j21;
  const double m12 = gt.g11 * state.j11 * state.j12 + gt.g22 * state.j21 * state.j22;
  const double m22 = gt.g11 * state.j12 * state.j12 + gt.g22 * state.j22 * state.j22;

  FlowReport report;
  report.start = p;
  report.t = t;
  report.steps = n_steps;
  report.tol = tol;
  report.endpoint = {state.x1, state.x2};
  report.deviation =
      std::max({std::fabs(m11 - g0.g11), std::fabs(m12), std::fabs(m22 - g0.g22)});
  report.pass = report.deviation <= tol;
  return report;
}

FdResult fd_oracle(const Expr& e, const Point& p, double h) {
  if (h <= 0.0) throw InputError("finite-difference step must be positive");

  const auto f = [&](double dx1, double dx2) {
    return e.value({p.x1 + dx1, p.x2 + dx2});
  };

  const auto richardson = [](double coarse, double fine, double& err) {
    err = std::fabs(fine - coarse) / 3.0;
    return (4.0 * fine - coarse) / 3.0;
  };

  const auto grad = [&](bool along_x1, double step) {
    const double plus = along_x1 ? f(step, 0.0) : f(0.0, step);
    const double minus = along_x1 ? f(-step, 0.0) : f(0.0, -step);
    return (plus - minus) / (2.0 * step);
  };
  const auto diag = [&](bool along_x1, double step) {
    const double plus = along_x1 ? f(step, 0.0) : f(0.0, step);
    const double minus = along_x1 ? f(-step, 0.0) : f(0.0, -step);
    return (plus - 2.0 * f(0.0, 0.0) + minus) / (step * step);
  };
  const auto mixed = [&](double step) {
    return (f(step, step) - f(step, -step) - f(-step, step) + f(-step, -step)) /
           (4.0 * step * step);
  };

  FdResult r;
  double err = 0.0;
  double worst = 0.0;

  r.g1 = richardson(grad(true, h), grad(true, h / 2.0), err);
  worst = std::max(worst, err);
  r.g2 = richardson(grad(false, h), grad(false, h / 2.0), err);
  worst = std::max(worst, err);
  r.h11 = richardson(diag(true, h), diag(true, h / 2.0), err);
  worst = std::max(worst, err);
  r.h22 = richardson(diag(false, h), diag(false, h / 2.0), err);
  worst = std::max(worst, err);
  r.h12 = richardson(mixed(h), mixed(h / 2.0), err);
  worst = std::max(worst, err);

  r.err_est = worst;
  return r;
}

}  // namespace killing2d
