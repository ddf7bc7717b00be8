#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "killing2d/jet.hpp"

namespace killing2d {

enum class FuncKind { Exp, Ln, Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt, Abs };

/// Integrand transform applied to the source expression of an antiderivative
/// node: F' = f^2 (Square), F' = 1/f (Reciprocal), or F' = f (Plain).
enum class AntiKind { Square, Reciprocal, Plain };

class Antiderivative;

/// Immutable scalar expression in the variables x1, x2.
///
/// Grammar (whitespace-insensitive):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?            -- right-associative
///   atom   := number | 'x1' | 'x2' | func '(' expr ')' | '(' expr ')'
///           | 'antideriv' '(' kind ',' expr ',' number ',' expr ')'
///
/// '^' uses repeated multiplication for integer literal exponents with
/// |n| <= 8 (derivative-exact at zero base) and exp(b*ln(a)) otherwise,
/// which requires a positive base.
///
/// Expressions are values: copying shares the immutable tree, and evaluation
/// never mutates shared state, so concurrent read-only use is safe.
class Expr {
 public:
  Expr();  // literal 0

  /// Parses text in the grammar above. Throws ParseError with the byte offset
  /// of the problem; unknown identifiers and functions are rejected.
  static Expr parse(std::string_view text);

  static Expr lit(double value);
  static Expr var(Var v);
  static Expr neg(Expr a);
  static Expr add(Expr a, Expr b);
  static Expr sub(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  static Expr div(Expr a, Expr b);
  static Expr pow(Expr base, Expr exponent);
  static Expr call(FuncKind f, Expr argument);

  /// Antiderivative node F(argument) with F(anchor) = 0 and F' given by the
  /// transformed source (see AntiKind). The source must depend on at most one
  /// variable; it is read as a univariate function of that variable.
  static Expr antideriv(AntiKind kind, Expr source, double anchor, Expr argument);
  static Expr antideriv(std::shared_ptr<const Antiderivative> fn, Expr argument);

  /// Canonical text form; parses back to a structurally identical tree.
  std::string str() const;

  /// Value, gradient and Hessian at p. Throws EvalDomainError when a partial
  /// function is undefined at p, naming the offending subexpression.
  Jet2 jet(const Point& p) const;

  /// Value only. Plain double arithmetic, independent of the jet rules.
  double value(const Point& p) const;

  /// Exact derivative tree with respect to v, constant-folded. No algebraic
  /// simplification beyond folding.
  Expr derivative(Var v) const;

  /// Constant folding: literal subtrees are evaluated, identity elements
  /// (x+0, x*1, x*0, x^1, ...) are removed. Domain-violating folds are left
  /// in place.
  Expr folded() const;

  bool same_structure(const Expr& other) const;
  bool depends_on(Var v) const;

  bool is_literal() const;
  double literal_value() const;  // valid only when is_literal()

  struct Node;
  const std::shared_ptr<const Node>& node() const { return node_; }
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

/// Deterministic literal formatting: shortest of %.15g/%.16g/%.17g that
/// round-trips the exact double.
std::string format_double(double value);

}  // namespace killing2d
