#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dots {

/// Immutable arithmetic expression over named real variables.
///
/// Grammar (whitespace-insensitive):
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | ident | func '(' expr ')' | 'pow' '(' expr ',' expr ')' | '(' expr ')'
///   func    := 'sin' | 'cos' | 'exp'
///   ident   := [A-Za-z_][A-Za-z0-9_.]*
///
/// A '-' directly before a number literal (not itself raised to a power) is
/// read as a negative constant.
class Expr {
 public:
  enum class Op { constant, variable, neg, add, sub, mul, div, pow, sin, cos, exp };

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Op op() const noexcept;
  double value() const noexcept;
  const std::string& name() const noexcept;
  std::size_t arity() const noexcept;
  const Expr& arg(std::size_t k) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

/// Throws SyntaxError with the column of the offending character.
Expr parse_expr(std::string_view text);

/// Minimal-parenthesis rendering; parse_expr(to_string(e)) == e.
std::string to_string(const Expr& e);

using Env = std::unordered_map<std::string, double>;

/// IEEE evaluation. Throws UnboundVariable or DivisionByZero.
double eval(const Expr& e, const Env& env);

/// Replaces variables by expressions, literally (no simplification).
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

std::set<std::string> free_variables(const Expr& e);

}  // namespace dots
