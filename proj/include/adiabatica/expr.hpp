#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "adiabatica/grid.hpp"

namespace adiabatica {

/// Scalar expressions for V(x;R), A(x;R) and g(R).
///
/// Grammar (whitespace ignored):
///
///     expr   := term (('+' | '-') term)*
///     term   := factor (('*' | '/') factor)*
///     factor := '-' factor | power
///     power  := atom ('^' factor)?
///     atom   := number | ident | func '(' expr ')' | '(' expr ')'
///
/// '^' is right-associative and binds tighter than unary minus, so -x^2 == -(x^2) and
/// 2^3^2 == 512. Identifiers are x, t and R1..Rm; functions are sin, cos, exp, sqrt, tanh
/// and abs. U+2212 is accepted as a minus sign.
class Expr {
public:
  enum class Function { sin, cos, exp, sqrt, tanh, abs };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Number {
    double value;
  };
  struct Variable {
    enum class Kind { x, t, param } kind;
    int index;  // 0-based parameter index for Kind::param
  };
  struct Negate {
    NodePtr operand;
  };
  struct Binary {
    char op;  // one of + - * / ^
    NodePtr lhs;
    NodePtr rhs;
  };
  struct Call {
    Function fn;
    NodePtr arg;
  };

  struct Node {
    std::variant<Number, Variable, Negate, Binary, Call> v;
  };

  /// Parses `src` with identifiers R1..R`params`. Throws ParseError.
  static Expr parse(std::string_view src, int params);

  /// Throws EvalError on a non-finite result or division by zero, and when the
  /// expression references a parameter beyond R.size().
  double eval(double x, std::span<const double> R, double t = 0.0) const;

  /// Evaluates at every grid node.
  RealField sample(const SpatialGrid& grid, std::span<const double> R, double t = 0.0) const;

  /// Fully parenthesized canonical text; parse(print()) reproduces the tree exactly.
  std::string print() const;

  const std::string& source() const noexcept { return source_; }
  bool depends_on_x() const;
  int params() const noexcept { return params_; }
  const Node& root() const noexcept { return *root_; }

  /// Structural equality of the syntax trees.
  friend bool operator==(const Expr& a, const Expr& b);

private:
  Expr(NodePtr root, std::string source, int params)
      : root_(std::move(root)), source_(std::move(source)), params_(params) {}

  NodePtr root_;
  std::string source_;
  int params_;
};

/// Convenience for the common case of parsing a whole expression.
inline Expr parse(std::string_view src, int params) { return Expr::parse(src, params); }

}  // namespace adiabatica
