#pragma once

#include <memory>
#include <string>

#include "borelsum/jet.hpp"
#include "borelsum/types.hpp"

namespace borelsum {

/// Closed-form expression in one variable x over the complex numbers.
///
/// Grammar (EBNF):
///   expr    = term { ("+" | "-") term } ;
///   term    = factor { ("*" | "/") factor } ;
///   factor  = ("+" | "-") factor | power ;
///   power   = atom [ "^" integer ] ;           (* integer may be negative *)
///   atom    = number | "x" | "i" | "exp" "(" expr ")" | "log" "(" expr ")"
///           | "(" expr ")" ;
///   number  = decimal literal, e.g. 2, 0.5, 1e-3 ;
/// "i" denotes the imaginary unit.  Whitespace is insignificant.
class Expr {
 public:
  enum class Kind { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kExp, kLog, kNeg };

  using Ptr = std::shared_ptr<const Expr>;

  static Ptr constant(cx v);
  static Ptr var();
  static Ptr add(Ptr a, Ptr b);
  static Ptr sub(Ptr a, Ptr b);
  static Ptr mul(Ptr a, Ptr b);
  static Ptr div(Ptr a, Ptr b);
  static Ptr pow(Ptr a, int n);
  static Ptr exp(Ptr a);
  static Ptr log(Ptr a);
  static Ptr neg(Ptr a);

  Kind kind() const { return kind_; }
  cx value() const { return value_; }  // kConst only
  int exponent() const { return expo_; }
  const Ptr& left() const { return a_; }
  const Ptr& right() const { return b_; }

  /// Evaluate at x; throws evaluation_error on division by ~0 or log of ~0.
  cx eval(cx x) const;

  /// Taylor-mode evaluation: the jet of the expression around x, truncated
  /// to L coefficients.  Exact up to rounding; no numerical differentiation.
  Jet eval_jet(cx x, int L) const;

  /// Symbolic derivative with light simplification (0/1 folding).
  Ptr derivative() const;

  /// Printable form (for error messages and round-trip tests).
  std::string to_string() const;

  /// True if the expression is the literal constant c.
  bool is_const(cx c) const { return kind_ == Kind::kConst && value_ == c; }

 private:
  Kind kind_;
  cx value_{};
  int expo_ = 0;
  Ptr a_, b_;

  explicit Expr(Kind k) : kind_(k) {}
  friend Ptr make_node(Kind k, cx v, int e, Ptr a, Ptr b);
};

/// Parse the grammar above; throws validation_error with position info.
Expr::Ptr parse_expression(const std::string& text);

/// Derivative of order d (d >= 0).
Expr::Ptr derivative_n(Expr::Ptr e, int d);

}  // namespace borelsum
