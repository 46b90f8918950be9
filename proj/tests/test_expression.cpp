#include "trajlab/errors.hpp"
#include "trajlab/expression.hpp"

#include <doctest.h>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

using namespace trajlab;

namespace {

// Direct-evaluation recursive descent over the same grammar; no tree, no
// bytecode. Used as the reference for the compiled evaluator.
class Reference {
 public:
  Reference(const std::string& text, const std::vector<double>& x) : s_(text), x_(x) {}

  double run() {
    const double v = expr();
    skip();
    REQUIRE(p_ == s_.size());
    return v;
  }

 private:
  void skip() {
    while (p_ < s_.size() && s_[p_] == ' ') ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  double expr() {
    double v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  double term() {
    double v = factor();
    for (;;) {
      if (eat('*')) v *= factor();
      else if (eat('/')) v /= factor();
      else return v;
    }
  }
  double factor() {
    const double b = base();
    if (eat('^')) return std::pow(b, base());
    return b;
  }
  double base() {
    skip();
    if (eat('(')) {
      const double v = expr();
      REQUIRE(eat(')'));
      return v;
    }
    if (eat('-')) return -base();
    if (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.') {
      char* end = nullptr;
      const double v = std::strtod(s_.c_str() + p_, &end);
      p_ = static_cast<std::size_t>(end - s_.c_str());
      return v;
    }
    std::string word;
    while (p_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[p_]))) word += s_[p_++];
    if (word == "sin") return std::sin(base());
    if (word == "cos") return std::cos(base());
    if (word == "exp") return std::exp(base());
    if (word == "sqrt") return std::sqrt(base());
    REQUIRE(word.size() >= 2);
    REQUIRE(word[0] == 'x');
    return x_.at(static_cast<std::size_t>(std::stoi(word.substr(1)) - 1));
  }

  std::string s_;
  std::vector<double> x_;
  std::size_t p_ = 0;
};

// Random expressions whose denominators, sqrt arguments and exponentials stay
// in range on |x| ≤ 2. Binary operands are sometimes left unparenthesized so
// precedence and associativity get exercised.
class Generator {
 public:
  explicit Generator(unsigned seed) : rng_(seed) {}

  std::string make(int depth) {
    if (depth == 0 || pick(5) == 0) return leaf();
    const std::string a = make(depth - 1);
    switch (pick(11)) {
      case 0: return a + " + " + make(depth - 1);
      case 1: return a + "-" + make(depth - 1);
      case 2: return "(" + a + ")*(" + make(depth - 1) + ")";
      case 3: return a + "*" + leaf();
      case 4: return "(" + a + ")/(2.5+cos(" + make(depth - 1) + "))";
      case 5: return "sin(" + a + ")";
      case 6: return "cos " + leaf();
      case 7: return "exp(sin(" + a + "))";
      case 8: return "sqrt(1+(" + a + ")^2)";
      case 9: return "(sin(" + a + "))^" + std::to_string(1 + pick(3));
      default: return "-" + leaf() + "^2";
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string leaf() {
    switch (pick(4)) {
      case 0: return std::to_string(pick(9) + 1);
      case 1: return "0." + std::to_string(pick(90) + 10);
      case 2: return "1.5e-1";
      default: return "x" + std::to_string(pick(3) + 1);
    }
  }
  std::mt19937 rng_;
};

double eval(const std::string& text, std::vector<double> x) {
  return expr::parse(text).evaluate(x);
}

int syntax_column(const std::string& text) {
  try {
    (void)expr::parse(text);
  } catch (const SyntaxError& e) {
    return e.column();
  }
  return -1;
}

}  // namespace

TEST_SUITE("expression") {
  TEST_CASE("arithmetic and precedence") {
    const std::vector<double> x{2.0, -3.0, 0.5};
    CHECK(eval("1 + 2*3", x) == 7.0);
    CHECK(eval("(1+2)*3", x) == 9.0);
    CHECK(eval("8/4/2", x) == 1.0);
    CHECK(eval("7-2-1", x) == 4.0);
    CHECK(eval("x1^3", x) == 8.0);
    CHECK(eval("-x1^2", x) == 4.0);  // unary binds tighter than '^'
    CHECK(eval("0-x1^2", x) == -4.0);
    CHECK(eval("2*x2 + x3", x) == -5.5);
    CHECK(eval("sqrt(x1*8)", x) == 4.0);
    CHECK(eval("exp(0)+cos(0)+sin(0)", x) == 2.0);
    CHECK(eval("2.5e1", x) == 25.0);
    CHECK(eval(".5", x) == 0.5);
    CHECK(eval("x1^-1", x) == 0.5);
  }

  TEST_CASE("chained powers are rejected") {
    CHECK(syntax_column("2^3^2") == 4);
  }

  TEST_CASE("syntax errors carry columns") {
    CHECK(syntax_column("sin(x1") == 4);
    CHECK(syntax_column("x1)") == 3);
    CHECK(syntax_column("y1") == 1);
    CHECK(syntax_column("1 + * 2") == 5);
    CHECK(syntax_column("1e") == 1);
    CHECK(syntax_column("") == 1);
    CHECK(syntax_column("x1 x2") == 4);
    CHECK(syntax_column("tan(x1)") == 1);
    try {
      (void)expr::parse("x1)");
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(std::string(e.what()).find("unmatched ')'") != std::string::npos);
      CHECK(e.code() == ErrorCode::kSyntax);
    }
  }

  TEST_CASE("domain errors") {
    const std::vector<double> x{1.0, 1.0};
    auto code = [&](const std::string& text) {
      try {
        (void)eval(text, x);
      } catch (const Error& e) {
        return static_cast<int>(e.code());
      }
      return -1;
    };
    CHECK(code("sqrt(-1)") == static_cast<int>(ErrorCode::kDomain));
    CHECK(code("1/(x1-x2)") == static_cast<int>(ErrorCode::kDomain));
    CHECK(code("exp(1000)") == static_cast<int>(ErrorCode::kDomain));
  }

  TEST_CASE("aliases map to coordinates") {
    const expr::Aliases aliases{{"z", 2}, {"t", 2}};
    const expr::Expression e = expr::parse("z^2 + t", aliases);
    const std::vector<double> x{0.0, 0.0, 3.0};
    CHECK(e.evaluate(x) == 12.0);
    CHECK(e.max_variable() == 2);
    CHECK(e.references(2));
    CHECK_FALSE(e.references(0));
    CHECK(syntax_column("z") == 1);
  }

  TEST_CASE("differential test against a reference evaluator") {
    Generator gen(20240611);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    int compared = 0;
    for (int i = 0; i < 1000; ++i) {
      const std::string text = gen.make(5);
      const std::vector<double> x{coord(rng), coord(rng), coord(rng)};
      const double expected = Reference(text, x).run();
      REQUIRE(std::isfinite(expected));
      const expr::Expression e = expr::parse(text);
      const double got = e.evaluate(x);
      INFO(text);
      CHECK(std::abs(got - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
      // Printed form parses back to the same function.
      const double again = expr::parse(e.to_string()).evaluate(x);
      CHECK(std::abs(again - got) <= 1e-14 * std::max(1.0, std::abs(got)));
      ++compared;
    }
    CHECK(compared == 1000);
  }

  TEST_CASE("symbolic derivatives match central differences") {
    Generator gen(7);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
      const std::string text = gen.make(4);
      const expr::Expression e = expr::parse(text);
      std::vector<double> x{coord(rng), coord(rng), coord(rng)};
      for (int k = 0; k < 3; ++k) {
        const double h = 1e-4;
        std::vector<double> p = x, m = x, p2 = x, m2 = x;
        p[k] += h;
        m[k] -= h;
        p2[k] += 2 * h;
        m2[k] -= 2 * h;
        const double fd =
            (e.evaluate(m2) - 8 * e.evaluate(m) + 8 * e.evaluate(p) - e.evaluate(p2)) / (12 * h);
        const double d = e.derivative(k).evaluate(x);
        INFO(text, " d/dx", k + 1);
        CHECK(std::abs(d - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }

  TEST_CASE("derivative of a varying power is rejected") {
    CHECK_THROWS_AS((void)expr::parse("x1^x2").derivative(0), Error);
    const std::vector<double> x{2.0};
    CHECK(expr::parse("2^x1").derivative(0).evaluate(x) ==
          doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-14));
  }

  TEST_CASE("constants") {
    CHECK(expr::Expression().is_constant());
    CHECK(expr::Expression::constant(2.5).evaluate({}) == 2.5);
    const std::vector<double> x{0.0, 4.0};
    CHECK(expr::Expression::variable(1).evaluate(x) == 4.0);
    CHECK(expr::parse("x2").derivative(1).evaluate(x) == 1.0);
    CHECK(expr::parse("x2").derivative(0).is_constant());
  }
}
