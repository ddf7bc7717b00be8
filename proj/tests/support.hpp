#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "killing2d/examples.hpp"
#include "killing2d/expr.hpp"
#include "killing2d/geometry.hpp"
#include "killing2d/verify.hpp"

namespace k2 = killing2d;

namespace support {

// |a - b| scaled by max(1, |a|, |b|); tolerances compare against this.
inline double rel_gap(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline k2::DiagonalMetric fixture_metric(const k2::ExampleFixture& fx) {
  return {k2::Expr::parse(fx.f1), k2::Expr::parse(fx.f2)};
}

inline k2::VectorField fixture_field(const k2::ExampleFixture& fx) {
  return {std::string(fx.basis) == "frame" ? k2::Basis::Frame : k2::Basis::Coordinate,
          k2::Expr::parse(fx.v1), k2::Expr::parse(fx.v2)};
}

inline k2::VectorField fixture_corrected(const k2::ExampleFixture& fx) {
  return {std::string(fx.basis) == "frame" ? k2::Basis::Frame : k2::Basis::Coordinate,
          k2::Expr::parse(fx.corrected_v1), k2::Expr::parse(fx.corrected_v2)};
}

// ---------------------------------------------------------------------------
// Random expression corpus.
//
// Trees are accepted only when they evaluate cleanly at all probe points with
// moderate magnitudes, so the finite-difference comparison stays meaningful.

class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  k2::Expr tree(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(0, 11)) {
      case 0: return leaf();
      case 1: return k2::Expr::neg(tree(depth - 1));
      case 2: return k2::Expr::add(tree(depth - 1), tree(depth - 1));
      case 3: return k2::Expr::sub(tree(depth - 1), tree(depth - 1));
      case 4: return k2::Expr::mul(tree(depth - 1), tree(depth - 1));
      case 5: return k2::Expr::div(tree(depth - 1), tree(depth - 1));
      case 6: return k2::Expr::pow(tree(depth - 1), k2::Expr::lit(pick(2, 4)));
      case 7: return k2::Expr::call(k2::FuncKind::Exp, tree(depth - 1));
      case 8: return k2::Expr::call(k2::FuncKind::Sin, tree(depth - 1));
      case 9: return k2::Expr::call(k2::FuncKind::Cos, tree(depth - 1));
      case 10: return k2::Expr::call(k2::FuncKind::Tanh, tree(depth - 1));
      default: {
        // rarer partial functions
        switch (pick(0, 4)) {
          case 0: return k2::Expr::call(k2::FuncKind::Ln, tree(depth - 1));
          case 1: return k2::Expr::call(k2::FuncKind::Sqrt, tree(depth - 1));
          case 2: return k2::Expr::call(k2::FuncKind::Sinh, tree(depth - 1));
          case 3: return k2::Expr::call(k2::FuncKind::Cosh, tree(depth - 1));
          default: return k2::Expr::call(k2::FuncKind::Tan, tree(depth - 1));
        }
      }
    }
  }

  k2::Point point() { return {real(-1.0, 1.0), real(-1.0, 1.0)}; }

  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  k2::Expr leaf() {
    switch (pick(0, 3)) {
      case 0: return k2::Expr::var(k2::Var::X1);
      case 1: return k2::Expr::var(k2::Var::X2);
      default: return k2::Expr::lit(std::round(real(-2.0, 2.0) * 1000.0) / 1000.0);
    }
  }

  std::mt19937_64 rng_;
};

struct CorpusEntry {
  k2::Expr expr;
  std::vector<k2::Point> points;
};

inline bool usable_at(const k2::Expr& e, const k2::Point& p) {
  try {
    const k2::Jet2 j = e.jet(p);
    if (std::fabs(j.v) > 50.0) return false;
    if (std::fabs(j.d1) > 1e3 || std::fabs(j.d2) > 1e3) return false;
    if (std::fabs(j.d11) > 1e4 || std::fabs(j.d12) > 1e4 || std::fabs(j.d22) > 1e4) return false;
    (void)k2::fd_oracle(e, p, 1e-3);  // the FD stencil must be evaluable too
  } catch (const k2::Error&) {
    return false;
  }
  return true;
}

inline std::vector<CorpusEntry> expression_corpus(int n_trees = 200, int n_points = 20,
                                                  std::uint64_t seed = 0xC0FFEEULL) {
  ExprGen gen(seed);
  std::vector<CorpusEntry> corpus;
  int guard = 0;
  while (static_cast<int>(corpus.size()) < n_trees && guard < 100000) {
    ++guard;
    CorpusEntry entry{gen.tree(gen.pick(1, 5)), {}};
    bool ok = true;
    for (int i = 0; i < n_points; ++i) {
      const k2::Point p = gen.point();
      if (!usable_at(entry.expr, p)) {
        ok = false;
        break;
      }
      entry.points.push_back(p);
    }
    if (ok) corpus.push_back(std::move(entry));
  }
  return corpus;
}

struct CorpusStats {
  int trees = 0;
  double max_rel_symbolic = 0.0;  // jets vs pointwise symbolic derivatives
  double max_rel_fd = 0.0;        // jets vs Richardson finite differences
  bool roundtrip_ok = true;       // parse(print(parse(print(t)))) stability
};

inline CorpusStats run_expression_corpus(int n_trees = 200, int n_points = 20) {
  CorpusStats stats;
  for (const CorpusEntry& entry : expression_corpus(n_trees, n_points)) {
    ++stats.trees;

    const k2::Expr d1 = entry.expr.derivative(k2::Var::X1);
    const k2::Expr d2 = entry.expr.derivative(k2::Var::X2);
    const k2::Expr d11 = d1.derivative(k2::Var::X1);
    const k2::Expr d12 = d1.derivative(k2::Var::X2);
    const k2::Expr d22 = d2.derivative(k2::Var::X2);

    const k2::Expr reparsed = k2::Expr::parse(entry.expr.str());
    const k2::Expr reparsed2 = k2::Expr::parse(reparsed.str());
    stats.roundtrip_ok = stats.roundtrip_ok && reparsed.same_structure(reparsed2);

    for (const k2::Point& p : entry.points) {
      const k2::Jet2 j = entry.expr.jet(p);

      double sym[5];
      try {
        sym[0] = d1.value(p);
        sym[1] = d2.value(p);
        sym[2] = d11.value(p);
        sym[3] = d12.value(p);
        sym[4] = d22.value(p);
      } catch (const k2::Error&) {
        continue;  // derivative tree hits a removable singularity; skip point
      }
      const double jet[5] = {j.d1, j.d2, j.d11, j.d12, j.d22};
      for (int i = 0; i < 5; ++i)
        stats.max_rel_symbolic = std::max(stats.max_rel_symbolic, rel_gap(jet[i], sym[i]));

      const k2::FdResult fd = k2::fd_oracle(entry.expr, p, 1e-3);
      const double fdv[5] = {fd.g1, fd.g2, fd.h11, fd.h12, fd.h22};
      for (int i = 0; i < 5; ++i)
        stats.max_rel_fd = std::max(stats.max_rel_fd, rel_gap(jet[i], fdv[i]));
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Random smooth metric/field pairs for the frame/coordinate residual identity.

inline k2::Expr random_smooth_scalar(ExprGen& gen) {
  // a + b*x1 + c*x2 + d*sin(e*x1 + f*x2): smooth everywhere, moderate size.
  const auto num = [&](double lo, double hi) { return k2::Expr::lit(gen.real(lo, hi)); };
  const k2::Expr x1 = k2::Expr::var(k2::Var::X1);
  const k2::Expr x2 = k2::Expr::var(k2::Var::X2);
  k2::Expr out = num(-1.0, 1.0);
  out = k2::Expr::add(out, k2::Expr::mul(num(-1.0, 1.0), x1));
  out = k2::Expr::add(out, k2::Expr::mul(num(-1.0, 1.0), x2));
  const k2::Expr phase =
      k2::Expr::add(k2::Expr::mul(num(-1.0, 1.0), x1), k2::Expr::mul(num(-1.0, 1.0), x2));
  out = k2::Expr::add(out, k2::Expr::mul(num(-1.0, 1.0), k2::Expr::call(k2::FuncKind::Sin, phase)));
  return out;
}

inline k2::Expr random_lame_function(ExprGen& gen) {
  // exp(a*x1 + b*x2) * (1.5 + 0.4 sin(c*x1 + d*x2)): nowhere zero.
  const auto num = [&](double lo, double hi) { return k2::Expr::lit(gen.real(lo, hi)); };
  const k2::Expr x1 = k2::Expr::var(k2::Var::X1);
  const k2::Expr x2 = k2::Expr::var(k2::Var::X2);
  const k2::Expr growth = k2::Expr::call(
      k2::FuncKind::Exp,
      k2::Expr::add(k2::Expr::mul(num(-0.8, 0.8), x1), k2::Expr::mul(num(-0.8, 0.8), x2)));
  const k2::Expr wobble = k2::Expr::add(
      k2::Expr::lit(1.5),
      k2::Expr::mul(num(-0.4, 0.4),
                    k2::Expr::call(k2::FuncKind::Sin,
                                   k2::Expr::add(k2::Expr::mul(num(-1.0, 1.0), x1),
                                                 k2::Expr::mul(num(-1.0, 1.0), x2)))));
  return k2::Expr::mul(growth, wobble);
}

inline k2::DiagonalMetric random_metric(ExprGen& gen) {
  return {random_lame_function(gen), random_lame_function(gen)};
}

inline k2::VectorField random_field(ExprGen& gen) {
  const k2::Basis basis = gen.pick(0, 1) == 0 ? k2::Basis::Frame : k2::Basis::Coordinate;
  return {basis, random_smooth_scalar(gen), random_smooth_scalar(gen)};
}

// ---------------------------------------------------------------------------
// Natural cubic spline (test-only oracle for antiderivative values).

class CubicSpline {
 public:
  CubicSpline(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)), m_(xs_.size(), 0.0) {
    const std::size_t n = xs_.size();
    std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = xs_[i] - xs_[i - 1];
      const double h1 = xs_[i + 1] - xs_[i];
      a[i] = h0 / 6.0;
      b[i] = (h0 + h1) / 3.0;
      c[i] = h1 / 6.0;
      d[i] = (ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0;
    }
    // Thomas solve; natural boundary (m[0] = m[n-1] = 0).
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
      if (i == 1) break;
    }
  }

  double derivative(double x) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(xs_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, xs_.size() - 1);
    const double h = xs_[i] - xs_[i - 1];
    const double t0 = xs_[i] - x;
    const double t1 = x - xs_[i - 1];
    return -m_[i - 1] * t0 * t0 / (2.0 * h) + m_[i] * t1 * t1 / (2.0 * h) +
           (ys_[i] - ys_[i - 1]) / h - (m_[i] - m_[i - 1]) * h / 6.0;
  }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> m_;
};

}  // namespace support
