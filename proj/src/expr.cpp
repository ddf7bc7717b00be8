#include "killing2d/expr.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "killing2d/antiderivative.hpp"
#include "killing2d/errors.hpp"

namespace killing2d {

struct Expr::Node {
  enum class Kind { Lit, Variable, Neg, Add, Sub, Mul, Div, Pow, Func, Anti };

  Kind kind = Kind::Lit;
  double lit = 0.0;
  Var var = Var::X1;
  FuncKind func = FuncKind::Exp;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
  std::shared_ptr<const Antiderivative> anti;  // Kind::Anti; `a` is the argument
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr make_lit(double v) {
  Node n;
  n.kind = Kind::Lit;
  n.lit = v;
  return make_node(std::move(n));
}

NodePtr make_var(Var v) {
  Node n;
  n.kind = Kind::Variable;
  n.var = v;
  return make_node(std::move(n));
}

NodePtr make_unary(Kind k, NodePtr a) {
  Node n;
  n.kind = k;
  n.a = std::move(a);
  return make_node(std::move(n));
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
  Node n;
  n.kind = k;
  n.a = std::move(a);
  n.b = std::move(b);
  return make_node(std::move(n));
}

NodePtr make_func(FuncKind f, NodePtr a) {
  Node n;
  n.kind = Kind::Func;
  n.func = f;
  n.a = std::move(a);
  return make_node(std::move(n));
}

NodePtr make_anti(std::shared_ptr<const Antiderivative> fn, NodePtr arg) {
  Node n;
  n.kind = Kind::Anti;
  n.anti = std::move(fn);
  n.a = std::move(arg);
  return make_node(std::move(n));
}

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Exp: return "exp";
    case FuncKind::Ln: return "ln";
    case FuncKind::Sin: return "sin";
    case FuncKind::Cos: return "cos";
    case FuncKind::Tan: return "tan";
    case FuncKind::Sinh: return "sinh";
    case FuncKind::Cosh: return "cosh";
    case FuncKind::Tanh: return "tanh";
    case FuncKind::Sqrt: return "sqrt";
    case FuncKind::Abs: return "abs";
  }
  return "?";
}

bool lookup_func(std::string_view name, FuncKind& out) {
  static constexpr std::pair<const char*, FuncKind> table[] = {
      {"exp", FuncKind::Exp},   {"ln", FuncKind::Ln},     {"sin", FuncKind::Sin},
      {"cos", FuncKind::Cos},   {"tan", FuncKind::Tan},   {"sinh", FuncKind::Sinh},
      {"cosh", FuncKind::Cosh}, {"tanh", FuncKind::Tanh}, {"sqrt", FuncKind::Sqrt},
      {"abs", FuncKind::Abs},
  };
  for (const auto& [n, k] : table) {
    if (name == n) {
      out = k;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing

// Precedence levels: Add/Sub 1, Mul/Div 2, unary minus 3, Pow 4, atoms 5.
// Negative literals print with a leading '-' and take the unary level.
int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Lit: return n.lit < 0.0 ? 3 : 5;
    default: return 5;
  }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
  const bool parens = precedence(child) < min_prec;
  if (parens) out += '(';
  print_node(child, out);
  if (parens) out += ')';
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Lit:
      out += format_double(n.lit);
      return;
    case Kind::Variable:
      out += n.var == Var::X1 ? "x1" : "x2";
      return;
    case Kind::Neg: {
      out += '-';
      // Parenthesize nested signs for readability; both forms reparse equal.
      const bool parens = precedence(*n.a) < 3 || n.a->kind == Kind::Neg ||
                          (n.a->kind == Kind::Lit && n.a->lit < 0.0);
      if (parens) out += '(';
      print_node(*n.a, out);
      if (parens) out += ')';
      return;
    }
    case Kind::Add:
      print_child(*n.a, 1, out);
      if (n.b->kind == Kind::Lit && n.b->lit < 0.0) {  // a+-c reads badly
        out += '-';
        out += format_double(-n.b->lit);
        return;
      }
      out += '+';
      print_child(*n.b, 2, out);
      return;
    case Kind::Sub:
      print_child(*n.a, 1, out);
      out += '-';
      print_child(*n.b, 2, out);
      return;
    case Kind::Mul:
      print_child(*n.a, 2, out);
      out += '*';
      print_child(*n.b, 3, out);
      return;
    case Kind::Div:
      print_child(*n.a, 2, out);
      out += '/';
      print_child(*n.b, 3, out);
      return;
    case Kind::Pow:
      print_child(*n.a, 5, out);
      out += '^';
      print_child(*n.b, 3, out);
      return;
    case Kind::Func:
      out += func_name(n.func);
      out += '(';
      print_node(*n.a, out);
      out += ')';
      return;
    case Kind::Anti:
      out += "antideriv(";
      out += Antiderivative::kind_name(n.anti->kind());
      out += ", ";
      out += n.anti->source().str();
      out += ", ";
      out += format_double(n.anti->anchor());
      out += ", ";
      print_node(*n.a, out);
      out += ')';
      return;
  }
}

std::string print_tree(const Node& n) {
  std::string out;
  print_node(n, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

constexpr double kDenominatorFloor = 1e-300;

[[noreturn]] void domain_error(const Node& n, const Point& p, const char* reason) {
  throw EvalDomainError(print_tree(n), p.x1, p.x2, reason);
}

// Integer exponent usable by the repeated-multiplication power rule.
bool small_integer_exponent(const Node& e, long& out) {
  const Node* lit = nullptr;
  double sign = 1.0;
  if (e.kind == Kind::Lit) {
    lit = &e;
  } else if (e.kind == Kind::Neg && e.a->kind == Kind::Lit) {
    lit = e.a.get();
    sign = -1.0;
  }
  if (lit == nullptr) return false;
  const double v = sign * lit->lit;
  if (!std::isfinite(v) || v != std::nearbyint(v) || std::fabs(v) > 8.0) return false;
  out = static_cast<long>(v);
  return true;
}

template <class T>
T generic_pow_int(const T& base, long n, const T& one);

template <>
double generic_pow_int(const double& base, long n, const double& /*one*/) {
  double acc = 1.0;
  for (long i = 0; i < std::labs(n); ++i) acc *= base;
  return n < 0 ? 1.0 / acc : acc;
}

template <>
Jet2 generic_pow_int(const Jet2& base, long n, const Jet2& one) {
  Jet2 acc = one;
  for (long i = 0; i < std::labs(n); ++i) acc = acc * base;
  return n < 0 ? jet_const(1.0) / acc : acc;
}

double eval_value(const Node& n, const Point& p);

double apply_func_value(const Node& n, double t, const Point& p) {
  switch (n.func) {
    case FuncKind::Exp: return std::exp(t);
    case FuncKind::Ln:
      if (t <= 0.0) domain_error(n, p, "logarithm of a non-positive value");
      return std::log(t);
    case FuncKind::Sin: return std::sin(t);
    case FuncKind::Cos: return std::cos(t);
    case FuncKind::Tan: return std::tan(t);
    case FuncKind::Sinh: return std::sinh(t);
    case FuncKind::Cosh: return std::cosh(t);
    case FuncKind::Tanh: return std::tanh(t);
    case FuncKind::Sqrt:
      if (t <= 0.0) domain_error(n, p, "square root of a non-positive value");
      return std::sqrt(t);
    case FuncKind::Abs:
      if (t == 0.0) domain_error(n, p, "absolute value at zero (derivative undefined)");
      return std::fabs(t);
  }
  return 0.0;
}

double eval_value(const Node& n, const Point& p) {
  double result = 0.0;
  switch (n.kind) {
    case Kind::Lit: result = n.lit; break;
    case Kind::Variable: result = p.get(n.var); break;
    case Kind::Neg: result = -eval_value(*n.a, p); break;
    case Kind::Add: result = eval_value(*n.a, p) + eval_value(*n.b, p); break;
    case Kind::Sub: result = eval_value(*n.a, p) - eval_value(*n.b, p); break;
    case Kind::Mul: result = eval_value(*n.a, p) * eval_value(*n.b, p); break;
    case Kind::Div: {
      const double a = eval_value(*n.a, p);
      const double b = eval_value(*n.b, p);
      if (std::fabs(b) < kDenominatorFloor) domain_error(n, p, "division by zero");
      result = a / b;
      break;
    }
    case Kind::Pow: {
      long exponent = 0;
      const double base = eval_value(*n.a, p);
      if (small_integer_exponent(*n.b, exponent)) {
        if (exponent < 0 && std::fabs(base) < kDenominatorFloor)
          domain_error(n, p, "zero base with a negative exponent");
        result = generic_pow_int(base, exponent, 1.0);
      } else {
        const double e = eval_value(*n.b, p);
        if (base <= 0.0) domain_error(n, p, "power with a non-positive base");
        result = std::exp(e * std::log(base));
      }
      break;
    }
    case Kind::Func: result = apply_func_value(n, eval_value(*n.a, p), p); break;
    case Kind::Anti: result = n.anti->value(eval_value(*n.a, p)); break;
  }
  if (!std::isfinite(result)) domain_error(n, p, "non-finite value");
  return result;
}

Jet2 eval_jet(const Node& n, const Point& p) {
  Jet2 result;
  switch (n.kind) {
    case Kind::Lit: result = jet_const(n.lit); break;
    case Kind::Variable: result = jet_var(n.var, p); break;
    case Kind::Neg: result = -eval_jet(*n.a, p); break;
    case Kind::Add: result = eval_jet(*n.a, p) + eval_jet(*n.b, p); break;
    case Kind::Sub: result = eval_jet(*n.a, p) - eval_jet(*n.b, p); break;
    case Kind::Mul: result = eval_jet(*n.a, p) * eval_jet(*n.b, p); break;
    case Kind::Div: {
      const Jet2 a = eval_jet(*n.a, p);
      const Jet2 b = eval_jet(*n.b, p);
      if (std::fabs(b.v) < kDenominatorFloor) domain_error(n, p, "division by zero");
      result = a / b;
      break;
    }
    case Kind::Pow: {
      long exponent = 0;
      const Jet2 base = eval_jet(*n.a, p);
      if (small_integer_exponent(*n.b, exponent)) {
        if (exponent < 0 && std::fabs(base.v) < kDenominatorFloor)
          domain_error(n, p, "zero base with a negative exponent");
        result = generic_pow_int(base, exponent, jet_const(1.0));
      } else {
        const Jet2 e = eval_jet(*n.b, p);
        if (base.v <= 0.0) domain_error(n, p, "power with a non-positive base");
        const double lnv = std::log(base.v);
        const Jet2 ln_base = jet_compose(lnv, 1.0 / base.v, -1.0 / (base.v * base.v), base);
        const Jet2 arg = e * ln_base;
        result = jet_compose(std::exp(arg.v), std::exp(arg.v), std::exp(arg.v), arg);
      }
      break;
    }
    case Kind::Func: {
      const Jet2 u = eval_jet(*n.a, p);
      const double t = u.v;
      switch (n.func) {
        case FuncKind::Exp: {
          const double f = std::exp(t);
          result = jet_compose(f, f, f, u);
          break;
        }
        case FuncKind::Ln:
          if (t <= 0.0) domain_error(n, p, "logarithm of a non-positive value");
          result = jet_compose(std::log(t), 1.0 / t, -1.0 / (t * t), u);
          break;
        case FuncKind::Sin: result = jet_compose(std::sin(t), std::cos(t), -std::sin(t), u); break;
        case FuncKind::Cos: result = jet_compose(std::cos(t), -std::sin(t), -std::cos(t), u); break;
        case FuncKind::Tan: {
          const double f = std::tan(t);
          const double df = 1.0 + f * f;
          result = jet_compose(f, df, 2.0 * f * df, u);
          break;
        }
        case FuncKind::Sinh: result = jet_compose(std::sinh(t), std::cosh(t), std::sinh(t), u); break;
        case FuncKind::Cosh: result = jet_compose(std::cosh(t), std::sinh(t), std::cosh(t), u); break;
        case FuncKind::Tanh: {
          const double f = std::tanh(t);
          const double df = 1.0 - f * f;
          result = jet_compose(f, df, -2.0 * f * df, u);
          break;
        }
        case FuncKind::Sqrt: {
          if (t <= 0.0) domain_error(n, p, "square root of a non-positive value");
          const double f = std::sqrt(t);
          result = jet_compose(f, 0.5 / f, -0.25 / (f * t), u);
          break;
        }
        case FuncKind::Abs: {
          if (t == 0.0) domain_error(n, p, "absolute value at zero (derivative undefined)");
          result = jet_compose(std::fabs(t), t > 0.0 ? 1.0 : -1.0, 0.0, u);
          break;
        }
      }
      break;
    }
    case Kind::Anti: {
      const Jet2 u = eval_jet(*n.a, p);
      const double f = n.anti->value(u.v);
      const double df = n.anti->integrand(u.v);
      const double ddf = n.anti->integrand_derivative(u.v);
      result = jet_compose(f, df, ddf, u);
      break;
    }
  }
  if (!jet_finite(result)) domain_error(n, p, "non-finite value");
  return result;
}

// ---------------------------------------------------------------------------
// Structural equality / variable dependence

bool same_node(const Node& x, const Node& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::Lit: return x.lit == y.lit;
    case Kind::Variable: return x.var == y.var;
    case Kind::Neg: return same_node(*x.a, *y.a);
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow: return same_node(*x.a, *y.a) && same_node(*x.b, *y.b);
    case Kind::Func: return x.func == y.func && same_node(*x.a, *y.a);
    case Kind::Anti: return x.anti->same_as(*y.anti) && same_node(*x.a, *y.a);
  }
  return false;
}

bool node_depends_on(const Node& n, Var v) {
  switch (n.kind) {
    case Kind::Lit: return false;
    case Kind::Variable: return n.var == v;
    case Kind::Neg:
    case Kind::Func: return node_depends_on(*n.a, v);
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow: return node_depends_on(*n.a, v) || node_depends_on(*n.b, v);
    case Kind::Anti: return node_depends_on(*n.a, v);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Constant folding

bool is_lit(const NodePtr& n, double value) { return n->kind == Kind::Lit && n->lit == value; }

NodePtr fold_node(const NodePtr& n);

// Folds a fully literal application when it stays inside the domain;
// otherwise returns nullptr and the node is left as-is.
NodePtr try_fold_func(FuncKind f, double t) {
  double r = 0.0;
  switch (f) {
    case FuncKind::Exp: r = std::exp(t); break;
    case FuncKind::Ln:
      if (t <= 0.0) return nullptr;
      r = std::log(t);
      break;
    case FuncKind::Sin: r = std::sin(t); break;
    case FuncKind::Cos: r = std::cos(t); break;
    case FuncKind::Tan: r = std::tan(t); break;
    case FuncKind::Sinh: r = std::sinh(t); break;
    case FuncKind::Cosh: r = std::cosh(t); break;
    case FuncKind::Tanh: r = std::tanh(t); break;
    case FuncKind::Sqrt:
      if (t <= 0.0) return nullptr;
      r = std::sqrt(t);
      break;
    case FuncKind::Abs:
      if (t == 0.0) return nullptr;
      r = std::fabs(t);
      break;
  }
  if (!std::isfinite(r)) return nullptr;
  return make_lit(r);
}

NodePtr fold_node(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Lit:
    case Kind::Variable: return n;
    case Kind::Neg: {
      NodePtr a = fold_node(n->a);
      if (a->kind == Kind::Lit) return make_lit(a->lit == 0.0 ? 0.0 : -a->lit);
      if (a->kind == Kind::Neg) return a->a;
      return a == n->a ? n : make_unary(Kind::Neg, std::move(a));
    }
    case Kind::Add: {
      NodePtr a = fold_node(n->a);
      NodePtr b = fold_node(n->b);
      if (a->kind == Kind::Lit && b->kind == Kind::Lit) return make_lit(a->lit + b->lit);
      if (is_lit(a, 0.0)) return b;
      if (is_lit(b, 0.0)) return a;
      return (a == n->a && b == n->b) ? n : make_binary(Kind::Add, std::move(a), std::move(b));
    }
    case Kind::Sub: {
      NodePtr a = fold_node(n->a);
      NodePtr b = fold_node(n->b);
      if (a->kind == Kind::Lit && b->kind == Kind::Lit) return make_lit(a->lit - b->lit);
      if (is_lit(b, 0.0)) return a;
      if (is_lit(a, 0.0)) return fold_node(make_unary(Kind::Neg, std::move(b)));
      return (a == n->a && b == n->b) ? n : make_binary(Kind::Sub, std::move(a), std::move(b));
    }
    case Kind::Mul: {
      NodePtr a = fold_node(n->a);
      NodePtr b = fold_node(n->b);
      if (a->kind == Kind::Lit && b->kind == Kind::Lit) return make_lit(a->lit * b->lit);
      if (is_lit(a, 0.0) || is_lit(b, 0.0)) return make_lit(0.0);
      if (is_lit(a, 1.0)) return b;
      if (is_lit(b, 1.0)) return a;
      return (a == n->a && b == n->b) ? n : make_binary(Kind::Mul, std::move(a), std::move(b));
    }
    case Kind::Div: {
      NodePtr a = fold_node(n->a);
      NodePtr b = fold_node(n->b);
      if (a->kind == Kind::Lit && b->kind == Kind::Lit && std::fabs(b->lit) >= kDenominatorFloor)
        return make_lit(a->lit / b->lit);
      if (is_lit(a, 0.0) && !is_lit(b, 0.0)) return make_lit(0.0);
      if (is_lit(b, 1.0)) return a;
      return (a == n->a && b == n->b) ? n : make_binary(Kind::Div, std::move(a), std::move(b));
    }
    case Kind::Pow: {
      NodePtr a = fold_node(n->a);
      NodePtr b = fold_node(n->b);
      if (is_lit(b, 1.0)) return a;
      if (is_lit(b, 0.0)) return make_lit(1.0);
      if (a->kind == Kind::Lit && b->kind == Kind::Lit) {
        long exponent = 0;
        if (small_integer_exponent(*b, exponent)) {
          if (exponent >= 0 || std::fabs(a->lit) >= kDenominatorFloor) {
            const double r = generic_pow_int(a->lit, exponent, 1.0);
            if (std::isfinite(r)) return make_lit(r);
          }
        } else if (a->lit > 0.0) {
          const double r = std::exp(b->lit * std::log(a->lit));
          if (std::isfinite(r)) return make_lit(r);
        }
      }
      return (a == n->a && b == n->b) ? n : make_binary(Kind::Pow, std::move(a), std::move(b));
    }
    case Kind::Func: {
      NodePtr a = fold_node(n->a);
      if (a->kind == Kind::Lit) {
        if (NodePtr r = try_fold_func(n->func, a->lit)) return r;
      }
      return a == n->a ? n : make_func(n->func, std::move(a));
    }
    case Kind::Anti: {
      NodePtr arg = fold_node(n->a);
      return arg == n->a ? n : make_anti(n->anti, std::move(arg));
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Symbolic differentiation

NodePtr substitute_var(const NodePtr& n, Var from, const NodePtr& replacement) {
  switch (n->kind) {
    case Kind::Lit: return n;
    case Kind::Variable: return n->var == from ? replacement : n;
    case Kind::Neg: return make_unary(Kind::Neg, substitute_var(n->a, from, replacement));
    case Kind::Func: return make_func(n->func, substitute_var(n->a, from, replacement));
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow:
      return make_binary(n->kind, substitute_var(n->a, from, replacement),
                         substitute_var(n->b, from, replacement));
    case Kind::Anti: return make_anti(n->anti, substitute_var(n->a, from, replacement));
  }
  return n;
}

NodePtr diff(const NodePtr& n, Var v);

NodePtr d_mul(NodePtr a, NodePtr b) { return make_binary(Kind::Mul, std::move(a), std::move(b)); }
NodePtr d_add(NodePtr a, NodePtr b) { return make_binary(Kind::Add, std::move(a), std::move(b)); }
NodePtr d_sub(NodePtr a, NodePtr b) { return make_binary(Kind::Sub, std::move(a), std::move(b)); }
NodePtr d_div(NodePtr a, NodePtr b) { return make_binary(Kind::Div, std::move(a), std::move(b)); }

NodePtr diff_func(const NodePtr& n, Var v) {
  const NodePtr& u = n->a;
  NodePtr du = diff(u, v);
  switch (n->func) {
    case FuncKind::Exp: return d_mul(make_func(FuncKind::Exp, u), std::move(du));
    case FuncKind::Ln: return d_div(std::move(du), u);
    case FuncKind::Sin: return d_mul(make_func(FuncKind::Cos, u), std::move(du));
    case FuncKind::Cos:
      return make_unary(Kind::Neg, d_mul(make_func(FuncKind::Sin, u), std::move(du)));
    case FuncKind::Tan: {
      // (1 + tan(u)^2) * u'
      NodePtr t = make_func(FuncKind::Tan, u);
      NodePtr sec2 = d_add(make_lit(1.0), make_binary(Kind::Pow, std::move(t), make_lit(2.0)));
      return d_mul(std::move(sec2), std::move(du));
    }
    case FuncKind::Sinh: return d_mul(make_func(FuncKind::Cosh, u), std::move(du));
    case FuncKind::Cosh: return d_mul(make_func(FuncKind::Sinh, u), std::move(du));
    case FuncKind::Tanh: {
      NodePtr t = make_func(FuncKind::Tanh, u);
      NodePtr sech2 = d_sub(make_lit(1.0), make_binary(Kind::Pow, std::move(t), make_lit(2.0)));
      return d_mul(std::move(sech2), std::move(du));
    }
    case FuncKind::Sqrt: {
      NodePtr two_root = d_mul(make_lit(2.0), make_func(FuncKind::Sqrt, u));
      return d_div(std::move(du), std::move(two_root));
    }
    case FuncKind::Abs: {
      // u/|u| * u'  (undefined at u = 0, consistent with evaluation)
      NodePtr sign = d_div(u, make_func(FuncKind::Abs, u));
      return d_mul(std::move(sign), std::move(du));
    }
  }
  return make_lit(0.0);
}

NodePtr diff(const NodePtr& n, Var v) {
  switch (n->kind) {
    case Kind::Lit: return make_lit(0.0);
    case Kind::Variable: return make_lit(n->var == v ? 1.0 : 0.0);
    case Kind::Neg: return make_unary(Kind::Neg, diff(n->a, v));
    case Kind::Add: return d_add(diff(n->a, v), diff(n->b, v));
    case Kind::Sub: return d_sub(diff(n->a, v), diff(n->b, v));
    case Kind::Mul: return d_add(d_mul(diff(n->a, v), n->b), d_mul(n->a, diff(n->b, v)));
    case Kind::Div: {
      NodePtr num = d_sub(d_mul(diff(n->a, v), n->b), d_mul(n->a, diff(n->b, v)));
      NodePtr den = make_binary(Kind::Pow, n->b, make_lit(2.0));
      return d_div(std::move(num), std::move(den));
    }
    case Kind::Pow: {
      long exponent = 0;
      if (small_integer_exponent(*n->b, exponent)) {
        // n * u^(n-1) * u'
        NodePtr reduced = make_binary(Kind::Pow, n->a, make_lit(static_cast<double>(exponent - 1)));
        return d_mul(make_lit(static_cast<double>(exponent)),
                     d_mul(std::move(reduced), diff(n->a, v)));
      }
      // a^b * (b' ln a + b a'/a)
      NodePtr lhs = d_mul(diff(n->b, v), make_func(FuncKind::Ln, n->a));
      NodePtr rhs = d_mul(n->b, d_div(diff(n->a, v), n->a));
      return d_mul(n, d_add(std::move(lhs), std::move(rhs)));
    }
    case Kind::Func: return diff_func(n, v);
    case Kind::Anti: {
      // d F(arg) = F'(arg) * arg', with F' the transformed source.
      const Antiderivative& fn = *n->anti;
      NodePtr s = substitute_var(fn.source().node(), fn.variable(), n->a);
      NodePtr fprime;
      switch (fn.kind()) {
        case AntiKind::Square: fprime = make_binary(Kind::Pow, std::move(s), make_lit(2.0)); break;
        case AntiKind::Reciprocal: fprime = d_div(make_lit(1.0), std::move(s)); break;
        case AntiKind::Plain: fprime = std::move(s); break;
      }
      return d_mul(std::move(fprime), diff(n->a, v));
    }
  }
  return make_lit(0.0);
}

// ---------------------------------------------------------------------------
// Lexer / parser

struct Token {
  enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

  Type type = Type::End;
  double number = 0.0;
  std::string_view ident;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token tok;
    tok.offset = pos_;
    if (pos_ >= text_.size()) {
      tok.type = Token::Type::End;
      return tok;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+': ++pos_; tok.type = Token::Type::Plus; return tok;
      case '-': ++pos_; tok.type = Token::Type::Minus; return tok;
      case '*': ++pos_; tok.type = Token::Type::Star; return tok;
      case '/': ++pos_; tok.type = Token::Type::Slash; return tok;
      case '^': ++pos_; tok.type = Token::Type::Caret; return tok;
      case '(': ++pos_; tok.type = Token::Type::LParen; return tok;
      case ')': ++pos_; tok.type = Token::Type::RParen; return tok;
      case ',': ++pos_; tok.type = Token::Type::Comma; return tok;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

 private:
  Token lex_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    // exponent only when followed by a digit (with optional sign)
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    Token tok;
    tok.type = Token::Type::Number;
    tok.offset = start;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, tok.number);
    if (ec != std::errc() || ptr != last) throw ParseError(start, "malformed number");
    return tok;
  }

  Token lex_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_'))
      ++pos_;
    Token tok;
    tok.type = Token::Type::Ident;
    tok.offset = start;
    tok.ident = text_.substr(start, pos_ - start);
    return tok;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (current_.type != Token::Type::End) throw ParseError(current_.offset, "unexpected token");
    return e;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  bool accept(Token::Type t) {
    if (current_.type != t) return false;
    advance();
    return true;
  }

  void expect(Token::Type t, const char* what) {
    if (current_.type != t) throw ParseError(current_.offset, what);
    advance();
  }

  NodePtr parse_expr() {
    NodePtr e = parse_term();
    for (;;) {
      if (accept(Token::Type::Plus)) {
        e = make_binary(Kind::Add, std::move(e), parse_term());
      } else if (accept(Token::Type::Minus)) {
        e = make_binary(Kind::Sub, std::move(e), parse_term());
      } else {
        return e;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr e = parse_unary();
    for (;;) {
      if (accept(Token::Type::Star)) {
        e = make_binary(Kind::Mul, std::move(e), parse_unary());
      } else if (accept(Token::Type::Slash)) {
        e = make_binary(Kind::Div, std::move(e), parse_unary());
      } else {
        return e;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept(Token::Type::Minus)) return make_unary(Kind::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept(Token::Type::Caret)) {
      return make_binary(Kind::Pow, std::move(base), parse_unary());  // right-associative
    }
    return base;
  }

  NodePtr parse_atom() {
    if (current_.type == Token::Type::Number) {
      const double v = current_.number;
      advance();
      return make_lit(v);
    }
    if (current_.type == Token::Type::LParen) {
      advance();
      NodePtr e = parse_expr();
      expect(Token::Type::RParen, "expected ')'");
      return e;
    }
    if (current_.type == Token::Type::Ident) {
      const Token tok = current_;
      advance();
      if (tok.ident == "x1") return make_var(Var::X1);
      if (tok.ident == "x2") return make_var(Var::X2);
      if (tok.ident == "antideriv") return parse_antideriv(tok);
      if (current_.type == Token::Type::LParen) {
        FuncKind f;
        if (!lookup_func(tok.ident, f))
          throw ParseError(tok.offset, "unknown function '" + std::string(tok.ident) + "'");
        advance();
        NodePtr arg = parse_expr();
        expect(Token::Type::RParen, "expected ')'");
        return make_func(f, std::move(arg));
      }
      throw ParseError(tok.offset, "unknown identifier '" + std::string(tok.ident) + "'");
    }
    throw ParseError(current_.offset, "expected operand");
  }

  NodePtr parse_antideriv(const Token& head) {
    expect(Token::Type::LParen, "expected '(' after 'antideriv'");
    if (current_.type != Token::Type::Ident)
      throw ParseError(current_.offset, "expected antiderivative kind (square|reciprocal|plain)");
    AntiKind kind;
    if (current_.ident == "square") {
      kind = AntiKind::Square;
    } else if (current_.ident == "reciprocal") {
      kind = AntiKind::Reciprocal;
    } else if (current_.ident == "plain") {
      kind = AntiKind::Plain;
    } else {
      throw ParseError(current_.offset,
                       "expected antiderivative kind (square|reciprocal|plain)");
    }
    advance();
    expect(Token::Type::Comma, "expected ','");
    NodePtr source = parse_expr();
    expect(Token::Type::Comma, "expected ','");
    const std::size_t anchor_offset = current_.offset;
    NodePtr anchor = fold_node(parse_expr());
    if (anchor->kind != Kind::Lit)
      throw ParseError(anchor_offset, "antiderivative anchor must be a constant");
    expect(Token::Type::Comma, "expected ','");
    NodePtr arg = parse_expr();
    expect(Token::Type::RParen, "expected ')'");
    try {
      auto fn = make_antiderivative(kind, Expr(std::move(source)), anchor->lit);
      return make_anti(std::move(fn), std::move(arg));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(head.offset, e.what());
    }
  }

  Lexer lexer_;
  Token current_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Expr surface

Expr::Expr() : node_(make_lit(0.0)) {}

Expr Expr::parse(std::string_view text) {
  Parser parser(text);
  return Expr(parser.parse_all());
}

Expr Expr::lit(double value) { return Expr(make_lit(value)); }
Expr Expr::var(Var v) { return Expr(make_var(v)); }
Expr Expr::neg(Expr a) { return Expr(make_unary(Kind::Neg, a.node_)); }
Expr Expr::add(Expr a, Expr b) { return Expr(make_binary(Kind::Add, a.node_, b.node_)); }
Expr Expr::sub(Expr a, Expr b) { return Expr(make_binary(Kind::Sub, a.node_, b.node_)); }
Expr Expr::mul(Expr a, Expr b) { return Expr(make_binary(Kind::Mul, a.node_, b.node_)); }
Expr Expr::div(Expr a, Expr b) { return Expr(make_binary(Kind::Div, a.node_, b.node_)); }
Expr Expr::pow(Expr base, Expr exponent) {
  return Expr(make_binary(Kind::Pow, base.node_, exponent.node_));
}
Expr Expr::call(FuncKind f, Expr argument) { return Expr(make_func(f, argument.node_)); }

Expr Expr::antideriv(AntiKind kind, Expr source, double anchor, Expr argument) {
  return Expr(make_anti(make_antiderivative(kind, std::move(source), anchor), argument.node_));
}

Expr Expr::antideriv(std::shared_ptr<const Antiderivative> fn, Expr argument) {
  return Expr(make_anti(std::move(fn), argument.node_));
}

std::string Expr::str() const { return print_tree(*node_); }

Jet2 Expr::jet(const Point& p) const { return eval_jet(*node_, p); }

double Expr::value(const Point& p) const { return eval_value(*node_, p); }

Expr Expr::derivative(Var v) const { return Expr(fold_node(diff(node_, v))); }

Expr Expr::folded() const { return Expr(fold_node(node_)); }

bool Expr::same_structure(const Expr& other) const { return same_node(*node_, *other.node_); }

bool Expr::depends_on(Var v) const { return node_depends_on(*node_, v); }

bool Expr::is_literal() const { return node_->kind == Kind::Lit; }

double Expr::literal_value() const {
  assert(is_literal());
  return node_->lit;
}

std::string format_double(double value) {
  char buf[64];
  for (int precision : {15, 16, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    double back = 0.0;
    auto [ptr, ec] = std::from_chars(buf, buf + std::strlen(buf), back);
    if (ec == std::errc() && ptr == buf + std::strlen(buf) && back == value) break;
  }
  return buf;
}

}  // namespace killing2d
