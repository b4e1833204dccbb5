#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pmfix {

/// Arithmetic expression in a single variable, used for user-defined gauges
/// (variable `t`) and self-maps (variable `x`).
///
/// Grammar, loosest to tightest binding:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?            right-associative
///   primary := number | variable | call | '(' expr ')'
///   call    := name '(' expr (',' expr)* ')'   exp log sqrt abs (1 arg), min max pow (2 args)
class Expression {
 public:
  enum class Op : std::uint8_t {
    Number,
    Variable,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Exp,
    Log,
    Sqrt,
    Abs,
    Min,
    Max,
  };

  struct Node {
    Op op;
    double value = 0.0;  // Number only
    std::int32_t lhs = -1;
    std::int32_t rhs = -1;
  };

  /// Throws SyntaxError with the byte offset of the offending token.
  static Expression parse(std::string_view source, std::string_view variable);

  /// Evaluates in extended precision; throws ExpressionDomainError when the
  /// result is undefined or non-finite at this point.
  long double evaluate(long double at) const;

  /// Fully parenthesised source text; numbers use the shortest decimal that
  /// reads back to the same double, so parse(render()) reproduces the tree.
  std::string render() const;

  const std::string& variable() const noexcept { return variable_; }
  const std::string& source() const noexcept { return source_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::int32_t root() const noexcept { return root_; }

 private:
  friend class ExpressionParser;

  long double eval_node(std::int32_t index, long double at) const;
  void render_node(std::int32_t index, std::string& out) const;

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  std::string variable_;
  std::string source_;
};

}  // namespace pmfix
