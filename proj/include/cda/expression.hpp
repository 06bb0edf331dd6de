#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace cda {

class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& what, size_t position)
      : std::invalid_argument(what), position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

/// Compiled arithmetic expression in x and y.
///
/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?           (right associative)
///   primary := number | 'x' | 'y' | 'pi' | '(' expr ')'
///            | func '(' expr ')'              func ∈ sin cos tan exp log sqrt abs
///            | 'if' '(' cond ',' expr ',' expr ')'
///   cond    := expr ('<' | '<=' | '>' | '>=' | '==' | '!=') expr
class Expression {
 public:
  /// Throws ExpressionError with the offending character position.
  static Expression parse(const std::string& text);

  double operator()(double x, double y) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace cda
