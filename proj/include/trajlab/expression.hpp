#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trajlab::expr {

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' base)?
//   base   := number | ident | '(' expr ')' | ('-'|'sin'|'cos'|'exp'|'sqrt') base
//   ident  := 'x' digits            (x1 is coordinate 0)
// Unary operators bind tighter than '^': "-x1^2" is (-x1)^2.

enum class Op { kNumber, kVariable, kNeg, kAdd, kSub, kMul, kDiv, kPow, kSin, kCos, kExp, kSqrt };

struct Node {
  Op op = Op::kNumber;
  double value = 0.0;
  int variable = -1;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

// Extra identifiers accepted besides x<digits>, mapped to coordinate indices.
using Aliases = std::map<std::string, int, std::less<>>;

class Expression {
 public:
  Expression();  // the constant 0
  explicit Expression(NodePtr root);

  static Expression constant(double value);
  static Expression variable(int index);

  // Throws kDomain (sqrt of a negative, division by zero, non-finite result).
  double evaluate(std::span<const double> x) const;

  // Fully parenthesized text that parses back to the same value.
  std::string to_string() const;

  // Symbolic partial derivative with respect to coordinate `index`.
  Expression derivative(int index) const;

  // Largest coordinate index referenced, or -1 for constants.
  int max_variable() const { return max_variable_; }
  bool is_constant() const { return max_variable_ < 0; }
  bool references(int index) const;
  const NodePtr& root() const { return root_; }

 private:
  struct Instr {
    Op op;
    double value;
    int variable;
  };

  void compile();

  NodePtr root_;
  std::vector<Instr> program_;
  int max_variable_ = -1;
  int max_depth_ = 0;
};

// Throws SyntaxError with the 1-based column of the problem.
Expression parse(std::string_view text, const Aliases& aliases = {});

}  // namespace trajlab::expr
