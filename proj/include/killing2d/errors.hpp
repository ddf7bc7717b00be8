#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace killing2d {

/// Base class of all library errors. The CLI maps every Error to exit code 2;
/// a failed verification (field is not Killing) is a report, not an Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset into the input.
struct ParseError : Error {
  ParseError(std::size_t offset_, const std::string& detail_)
      : Error("syntax error at offset " + std::to_string(offset_) + ": " + detail_),
        offset(offset_),
        detail(detail_) {}

  std::size_t offset;
  std::string detail;
};

/// Evaluation left the domain of a partial function (log of a non-positive
/// value, division by zero, ...). Carries the offending subexpression and the
/// evaluation point.
struct EvalDomainError : Error {
  EvalDomainError(std::string subexpr_, double x1_, double x2_, const std::string& reason_)
      : Error(reason_ + " in '" + subexpr_ + "' at (" + std::to_string(x1_) + ", " +
              std::to_string(x2_) + ")"),
        subexpr(std::move(subexpr_)),
        x1(x1_),
        x2(x2_),
        reason(reason_) {}

  std::string subexpr;
  double x1;
  double x2;
  std::string reason;
};

/// Adaptive quadrature hit the subdivision cap before reaching the requested
/// tolerance. Reports the worst remaining subinterval.
struct QuadratureError : Error {
  QuadratureError(double a_, double b_, double err_)
      : Error("quadrature did not converge; worst subinterval [" + std::to_string(a_) + ", " +
              std::to_string(b_) + "] with error estimate " + std::to_string(err_)),
        a(a_),
        b(b_),
        err(err_) {}

  double a;
  double b;
  double err;
};

/// A family case was requested for a metric that does not satisfy its
/// hypotheses, or with malformed parameters.
struct AdmissibilityError : Error {
  using Error::Error;
};

/// Malformed input documents (JSON schema violations, unknown keys, ...).
struct InputError : Error {
  using Error::Error;
};

}  // namespace killing2d
