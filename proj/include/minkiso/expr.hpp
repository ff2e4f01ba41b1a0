#pragma once

// Recursive-descent parser for scalar expressions in the parameters u and v.
//
//   list    := expr ',' expr ',' expr
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'u' | 'v' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | sinh | cosh | tanh | exp | log | sqrt

#include <array>
#include <memory>
#include <string>
#include <string_view>

namespace minkiso {

struct ExprNode;
class Expression;

std::array<Expression, 3> parse_component_list(std::string_view src);

class Expression {
 public:
  /// Throws ParseError(SyntaxError | UnknownIdentifier) with the byte offset of the fault.
  static Expression parse(std::string_view src);

  /// Throws Error(DomainError) when the value is not finite (log of a negative, ...).
  [[nodiscard]] double eval(double u, double v) const;

  [[nodiscard]] const std::string& source() const noexcept { return source_; }

 private:
  friend std::array<Expression, 3> parse_component_list(std::string_view src);

  Expression(std::shared_ptr<const ExprNode> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  std::shared_ptr<const ExprNode> root_;
  std::string source_;
};

/// Parses three comma-separated component expressions. Error offsets refer to `src`.
std::array<Expression, 3> parse_component_list(std::string_view src);

}  // namespace minkiso
