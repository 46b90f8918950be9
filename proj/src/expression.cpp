#include "trajlab/expression.hpp"

#include "trajlab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace trajlab::expr {

namespace {

bool is_number(const NodePtr& n, double v) { return n->op == Op::kNumber && n->value == v; }
bool is_number(const NodePtr& n) { return n->op == Op::kNumber; }

double apply_unary(Op op, double a) {
  switch (op) {
    case Op::kNeg: return -a;
    case Op::kSin: return std::sin(a);
    case Op::kCos: return std::cos(a);
    case Op::kExp: return std::exp(a);
    case Op::kSqrt: return std::sqrt(a);
    default: return std::nan("");
  }
}

double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::kAdd: return a + b;
    case Op::kSub: return a - b;
    case Op::kMul: return a * b;
    case Op::kDiv: return a / b;
    case Op::kPow: return std::pow(a, b);
    default: return std::nan("");
  }
}

NodePtr number(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::kNumber;
  n->value = v;
  return n;
}

NodePtr variable_node(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::kVariable;
  n->variable = index;
  return n;
}

// Raw constructors fold only when every operand is a number.
NodePtr unary(Op op, NodePtr a) {
  if (is_number(a)) {
    const double v = apply_unary(op, a->value);
    if (std::isfinite(v)) return number(v);
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr binary(Op op, NodePtr a, NodePtr b) {
  if (is_number(a) && is_number(b)) {
    const double v = apply_binary(op, a->value, b->value);
    if (std::isfinite(v) && !(op == Op::kDiv && b->value == 0.0)) return number(v);
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

// Simplifying constructors used by differentiation.
NodePtr neg(NodePtr a) {
  if (a->op == Op::kNeg) return a->lhs;
  return unary(Op::kNeg, std::move(a));
}
NodePtr add(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  return binary(Op::kAdd, std::move(a), std::move(b));
}
NodePtr sub(NodePtr a, NodePtr b) {
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return neg(std::move(b));
  return binary(Op::kSub, std::move(a), std::move(b));
}
NodePtr mul(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0) || is_number(b, 0.0)) return number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  return binary(Op::kMul, std::move(a), std::move(b));
}
NodePtr div(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0)) return number(0.0);
  if (is_number(b, 1.0)) return a;
  return binary(Op::kDiv, std::move(a), std::move(b));
}
NodePtr pow(NodePtr a, NodePtr b) {
  if (is_number(b, 1.0)) return a;
  if (is_number(b, 0.0)) return number(1.0);
  return binary(Op::kPow, std::move(a), std::move(b));
}

NodePtr differentiate(const NodePtr& n, int k) {
  switch (n->op) {
    case Op::kNumber: return number(0.0);
    case Op::kVariable: return number(n->variable == k ? 1.0 : 0.0);
    case Op::kNeg: return neg(differentiate(n->lhs, k));
    case Op::kAdd: return add(differentiate(n->lhs, k), differentiate(n->rhs, k));
    case Op::kSub: return sub(differentiate(n->lhs, k), differentiate(n->rhs, k));
    case Op::kMul:
      return add(mul(differentiate(n->lhs, k), n->rhs), mul(n->lhs, differentiate(n->rhs, k)));
    case Op::kDiv:
      return div(sub(mul(differentiate(n->lhs, k), n->rhs), mul(n->lhs, differentiate(n->rhs, k))),
                 mul(n->rhs, n->rhs));
    case Op::kPow: {
      const NodePtr& base = n->lhs;
      const NodePtr& expo = n->rhs;
      if (is_number(expo)) {
        return mul(mul(expo, pow(base, number(expo->value - 1.0))), differentiate(base, k));
      }
      if (is_number(base) && base->value > 0.0) {
        return mul(mul(n, number(std::log(base->value))), differentiate(expo, k));
      }
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot differentiate a power whose base and exponent both vary");
    }
    case Op::kSin: return mul(unary(Op::kCos, n->lhs), differentiate(n->lhs, k));
    case Op::kCos: return mul(neg(unary(Op::kSin, n->lhs)), differentiate(n->lhs, k));
    case Op::kExp: return mul(n, differentiate(n->lhs, k));
    case Op::kSqrt: return div(differentiate(n->lhs, k), mul(number(2.0), n));
  }
  return number(0.0);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::abs(v));
  return std::signbit(v) ? "(-" + std::string(buf) + ")" : std::string(buf);
}

void print(const NodePtr& n, std::string& out) {
  auto binop = [&](char c) {
    out += '(';
    print(n->lhs, out);
    out += c;
    print(n->rhs, out);
    out += ')';
  };
  auto fn = [&](const char* name) {
    out += name;
    out += '(';
    print(n->lhs, out);
    out += ')';
  };
  switch (n->op) {
    case Op::kNumber: out += format_number(n->value); break;
    case Op::kVariable: out += "x" + std::to_string(n->variable + 1); break;
    case Op::kNeg: fn("-"); break;
    case Op::kAdd: binop('+'); break;
    case Op::kSub: binop('-'); break;
    case Op::kMul: binop('*'); break;
    case Op::kDiv: binop('/'); break;
    case Op::kPow: binop('^'); break;
    case Op::kSin: fn("sin"); break;
    case Op::kCos: fn("cos"); break;
    case Op::kExp: fn("exp"); break;
    case Op::kSqrt: fn("sqrt"); break;
  }
}

// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, const Aliases& aliases) : text_(text), aliases_(aliases) {}

  NodePtr parse() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') fail("unmatched ')'", pos_);
      fail(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    const int column = static_cast<int>(at) + 1;
    throw SyntaxError("syntax error at column " + std::to_string(column) + ": " + what, column);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Op::kAdd, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(Op::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Op::kMul, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = binary(Op::kDiv, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_base();
    if (accept('^')) return binary(Op::kPow, base, parse_base());
    return base;
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      const std::size_t open = pos_++;
      NodePtr inner = parse_expr();
      if (!accept(')')) {
        skip_ws();
        if (pos_ >= text_.size()) fail("unclosed parenthesis", open);
        fail(std::string("expected ')' but found '") + text_[pos_] + "'", pos_);
      }
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return unary(Op::kNeg, parse_base());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent", start);
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(value)) {
      fail("number out of range", start);
    }
    return number(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == "sin") return unary(Op::kSin, parse_base());
    if (id == "cos") return unary(Op::kCos, parse_base());
    if (id == "exp") return unary(Op::kExp, parse_base());
    if (id == "sqrt") return unary(Op::kSqrt, parse_base());
    if (auto it = aliases_.find(id); it != aliases_.end()) return variable_node(it->second);
    if (id.size() >= 2 && id[0] == 'x') {
      int index = 0;
      const auto res = std::from_chars(id.data() + 1, id.data() + id.size(), index);
      if (res.ec == std::errc() && res.ptr == id.data() + id.size() && index >= 1) {
        return variable_node(index - 1);
      }
    }
    fail("unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view text_;
  const Aliases& aliases_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

Expression::Expression() : Expression(number(0.0)) {}

Expression::Expression(NodePtr root) : root_(std::move(root)) { compile(); }

Expression Expression::constant(double value) { return Expression(number(value)); }

Expression Expression::variable(int index) { return Expression(variable_node(index)); }

void Expression::compile() {
  program_.clear();
  max_variable_ = -1;
  max_depth_ = 0;
  int depth = 0;
  auto emit = [&](auto&& self, const NodePtr& n) -> void {
    if (n->lhs) self(self, n->lhs);
    if (n->rhs) self(self, n->rhs);
    program_.push_back({n->op, n->value, n->variable});
    if (n->op == Op::kNumber || n->op == Op::kVariable) {
      ++depth;
    } else if (n->rhs) {
      --depth;
    }
    max_depth_ = std::max(max_depth_, depth);
    if (n->op == Op::kVariable) max_variable_ = std::max(max_variable_, n->variable);
  };
  emit(emit, root_);
}

double Expression::evaluate(std::span<const double> x) const {
  if (max_variable_ >= static_cast<int>(x.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "expression references x" + std::to_string(max_variable_ + 1) +
                    " but only " + std::to_string(x.size()) + " coordinates were given");
  }
  constexpr int kInline = 64;
  double inline_stack[kInline];
  std::vector<double> heap_stack;
  double* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  int top = -1;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::kNumber: stack[++top] = in.value; break;
      case Op::kVariable: stack[++top] = x[in.variable]; break;
      case Op::kNeg: stack[top] = -stack[top]; break;
      case Op::kSin: stack[top] = std::sin(stack[top]); break;
      case Op::kCos: stack[top] = std::cos(stack[top]); break;
      case Op::kExp: stack[top] = std::exp(stack[top]); break;
      case Op::kSqrt:
        if (stack[top] < 0.0) throw Error(ErrorCode::kDomain, "sqrt of a negative number");
        stack[top] = std::sqrt(stack[top]);
        break;
      case Op::kAdd: --top; stack[top] += stack[top + 1]; break;
      case Op::kSub: --top; stack[top] -= stack[top + 1]; break;
      case Op::kMul: --top; stack[top] *= stack[top + 1]; break;
      case Op::kDiv:
        --top;
        if (stack[top + 1] == 0.0) throw Error(ErrorCode::kDomain, "division by zero");
        stack[top] /= stack[top + 1];
        break;
      case Op::kPow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
    }
  }
  const double result = stack[top];
  if (!std::isfinite(result)) {
    throw Error(ErrorCode::kDomain, "expression " + to_string() + " is not finite at point");
  }
  return result;
}

std::string Expression::to_string() const {
  std::string out;
  print(root_, out);
  return out;
}

bool Expression::references(int index) const {
  return std::any_of(program_.begin(), program_.end(), [index](const Instr& in) {
    return in.op == Op::kVariable && in.variable == index;
  });
}

Expression Expression::derivative(int index) const {
  return Expression(differentiate(root_, index));
}

Expression parse(std::string_view text, const Aliases& aliases) {
  return Expression(Parser(text, aliases).parse());
}

}  // namespace trajlab::expr
