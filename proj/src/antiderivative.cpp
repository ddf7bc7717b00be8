#include "killing2d/antiderivative.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "killing2d/errors.hpp"
#include "killing2d/quadrature.hpp"

namespace killing2d {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double integral = 0.0;
  double error = 0.0;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double offset = half * kKronrodNodes[i];
    double sum;
    if (i == 7) {
      sum = f(center);
    } else {
      sum = f(center - offset) + f(center + offset);
    }
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.integral = kronrod * half;
  p.error = std::fabs((kronrod - gauss) * half);
  return p;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_segments) {
  if (a == b) return {0.0, 0.0, 0};
  if (a > b) {
    QuadratureResult r = integrate(f, b, a, abs_tol, max_segments);
    r.value = -r.value;
    return r;
  }

  std::vector<Panel> panels;
  panels.push_back(evaluate_panel(f, a, b));
  int evaluated = 1;

  for (;;) {
    double total_error = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total_error += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    if (total_error <= abs_tol) break;
    if (evaluated >= max_segments)
      throw QuadratureError(panels[worst].a, panels[worst].b, panels[worst].error);

    const Panel split = panels[worst];
    const double mid = 0.5 * (split.a + split.b);
    panels[worst] = evaluate_panel(f, split.a, mid);
    panels.push_back(evaluate_panel(f, mid, split.b));
    evaluated += 2;
  }

  QuadratureResult result;
  result.segments = evaluated;
  for (const Panel& p : panels) {
    result.value += p.integral;
    result.error += p.error;
  }
  return result;
}

namespace {

constexpr double kWarmupStep = 0.25;
constexpr int kWarmupSegments = 24;  // covers anchor +/- 6
constexpr double kSegmentTol = 1e-14;
constexpr double kEvalTol = 1e-13;

}  // namespace

Antiderivative::Antiderivative(AntiKind kind, Expr source, double anchor)
    : kind_(kind), source_(std::move(source)), var_(Var::X1), anchor_(anchor),
      step_(kWarmupStep) {
  const bool on_x1 = source_.depends_on(Var::X1);
  const bool on_x2 = source_.depends_on(Var::X2);
  if (on_x1 && on_x2)
    throw Error("antiderivative integrand must depend on a single variable: '" + source_.str() +
                "'");
  var_ = on_x2 ? Var::X2 : Var::X1;

  auto f = [this](double t) { return integrand(t); };

  forward_.push_back(0.0);
  backward_.push_back(0.0);
  for (int i = 0; i < kWarmupSegments; ++i) {
    const double lo = anchor_ + i * step_;
    try {
      forward_.push_back(forward_.back() + integrate(f, lo, lo + step_, kSegmentTol).value);
    } catch (const Error&) {
      break;  // integrand leaves its domain on this side
    }
  }
  for (int i = 0; i < kWarmupSegments; ++i) {
    const double hi = anchor_ - i * step_;
    try {
      backward_.push_back(backward_.back() - integrate(f, hi - step_, hi, kSegmentTol).value);
    } catch (const Error&) {
      break;
    }
  }
}

Point Antiderivative::at(double t) const {
  Point p;
  if (var_ == Var::X1) {
    p.x1 = t;
  } else {
    p.x2 = t;
  }
  return p;
}

double Antiderivative::integrand(double t) const {
  const double s = source_.value(at(t));
  switch (kind_) {
    case AntiKind::Square: return s * s;
    case AntiKind::Reciprocal:
      if (s == 0.0)
        throw EvalDomainError(source_.str(), at(t).x1, at(t).x2,
                              "reciprocal integrand with a vanishing source");
      return 1.0 / s;
    case AntiKind::Plain: return s;
  }
  return 0.0;
}

double Antiderivative::integrand_derivative(double t) const {
  const Jet2 j = source_.jet(at(t));
  const double ds = var_ == Var::X1 ? j.d1 : j.d2;
  switch (kind_) {
    case AntiKind::Square: return 2.0 * j.v * ds;
    case AntiKind::Reciprocal:
      if (j.v == 0.0)
        throw EvalDomainError(source_.str(), at(t).x1, at(t).x2,
                              "reciprocal integrand with a vanishing source");
      return -ds / (j.v * j.v);
    case AntiKind::Plain: return ds;
  }
  return 0.0;
}

double Antiderivative::value(double x) const {
  if (x == anchor_) return 0.0;
  auto f = [this](double t) { return integrand(t); };

  const std::vector<double>& side = x > anchor_ ? forward_ : backward_;
  const double distance = std::fabs(x - anchor_);
  std::size_t idx = static_cast<std::size_t>(distance / step_);
  idx = std::min(idx, side.size() - 1);
  const double checkpoint = x > anchor_ ? anchor_ + static_cast<double>(idx) * step_
                                        : anchor_ - static_cast<double>(idx) * step_;
  return side[idx] + integrate(f, checkpoint, x, kEvalTol).value;
}

bool Antiderivative::same_as(const Antiderivative& other) const {
  return kind_ == other.kind_ && anchor_ == other.anchor_ && var_ == other.var_ &&
         source_.same_structure(other.source_);
}

const char* Antiderivative::kind_name(AntiKind k) {
  switch (k) {
    case AntiKind::Square: return "square";
    case AntiKind::Reciprocal: return "reciprocal";
    case AntiKind::Plain: return "plain";
  }
  return "?";
}

std::shared_ptr<const Antiderivative> make_antiderivative(AntiKind kind, Expr source,
                                                          double anchor) {
  return std::make_shared<const Antiderivative>(kind, std::move(source), anchor);
}

}  // namespace killing2d
