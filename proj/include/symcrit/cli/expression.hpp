#pragma once

// Arithmetic expressions in one variable x:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' unary)?          right associative
//   atom   := number | 'x' | 'pi' | name '(' expr ')' | '(' expr ')'
// with name one of exp, log, sin, cos, sinh, cosh, tanh, abs, sqrt.

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "symcrit/errors.hpp"

namespace symcrit::expr {

class ExpressionError : public InputError {
 public:
  ExpressionError(const std::string& message, std::size_t column)
      : InputError("column " + std::to_string(column) + ": " + message), column_(column) {}
  /// 1-based column inside the expression string.
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

struct Node;

class Expression {
 public:
  static Expression parse(std::string_view source);
  static Expression constant(double value);

  double operator()(double x) const;
  const std::string& source() const { return source_; }
  bool depends_on_x() const;
  /// Coefficients (c0, c1, c2) when the expression is structurally a
  /// polynomial of degree <= 2 in x.
  std::optional<std::array<double, 3>> quadratic() const;

 private:
  Expression(std::string source, std::shared_ptr<const Node> root);
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace symcrit::expr
