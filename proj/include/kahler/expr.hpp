#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kahler/algebra.hpp"
#include "kahler/point.hpp"

namespace kahler {

enum class NodeKind {
  Constant,
  Variable,  // z = x + y dxdy
  CoordX,    // real coordinate x (raw-field components only)
  CoordY,    // real coordinate y (raw-field components only)
  Negate,
  Add,
  Sub,
  Mul,
  Div,
  IntPow,
  RealPow,
  Function,
  RawField,  // u(x, y) + v(x, y) dxdy from two real component expressions
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position, std::vector<std::string> expected);

  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

/// Evaluation hit a pole (zero divisor) or a branch point of log/sqrt.
class SingularEvaluation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotDifferentiable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Immutable expression tree. Copies share nodes.
class Expr {
 public:
  static Expr constant(const Edif& value);
  static Expr z();
  static Expr coord_x();
  static Expr coord_y();
  static Expr negate(Expr operand);
  static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
  static Expr int_pow(Expr base, int exponent);
  static Expr real_pow(Expr base, double exponent);
  static Expr apply(Elementary function, Expr argument);
  /// Raw field u + v dxdy; `u` and `v` are read through their scalar parts.
  static Expr raw_field(Expr u, Expr v);

  NodeKind kind() const;
  const Edif& value() const;
  int int_exponent() const;
  double real_exponent() const;
  Elementary function() const;
  std::span<const Expr> children() const;

  /// True when the tree contains no coordinate or raw-field nodes.
  bool is_function_of_z() const;
  std::size_t depth() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr lhs, Expr rhs);
Expr operator-(Expr lhs, Expr rhs);
Expr operator*(Expr lhs, Expr rhs);
Expr operator/(Expr lhs, Expr rhs);
Expr operator-(Expr operand);

/// Parses an expression in z. "I" is the unit dxdy; "pi" is a constant.
/// Constant subtrees are folded while parsing.
Expr parse_expr(std::string_view text);

/// Parses a real component expression in the coordinates x and y, for raw fields.
Expr parse_component(std::string_view text);

/// Fully parenthesized text that parses back to the same tree.
std::string render(const Expr& f);

/// Substitutes z = x + y dxdy and folds the tree with edif arithmetic.
/// Throws SingularEvaluation at poles and NonFinite on overflow.
Edif eval_field(const Expr& f, const Point& at);

/// Symbolic d/dz, which for fields built from z equals the co-valuation d/dx.
Expr differentiate(const Expr& f);
Expr differentiate(const Expr& f, int order);

}  // namespace kahler
