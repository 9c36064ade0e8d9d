#include "symcrit/cli/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace symcrit::expr {

enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Exp, Log, Sin, Cos, Sinh, Cosh, Tanh, Abs, Sqrt };

struct Node {
  Op op = Op::Number;
  double value = 0.0;
  Fn fn = Fn::Exp;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr number(double v) {
  auto n = std::make_shared<Node>();
  n->value = v;
  return n;
}

struct FnName {
  std::string_view name;
  Fn fn;
};
constexpr std::array<FnName, 9> kFunctions = {{{"exp", Fn::Exp},
                                               {"log", Fn::Log},
                                               {"sin", Fn::Sin},
                                               {"cos", Fn::Cos},
                                               {"sinh", Fn::Sinh},
                                               {"cosh", Fn::Cosh},
                                               {"tanh", Fn::Tanh},
                                               {"abs", Fn::Abs},
                                               {"sqrt", Fn::Sqrt}}};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr run() {
    auto n = expr();
    skip();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ExpressionError(msg, i_ + 1); }

  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  bool accept(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto n = term();
    while (true) {
      if (accept('+')) {
        n = make(Op::Add, n, term());
      } else if (accept('-')) {
        n = make(Op::Sub, n, term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    auto n = unary();
    while (true) {
      if (accept('*')) {
        n = make(Op::Mul, n, unary());
      } else if (accept('/')) {
        n = make(Op::Div, n, unary());
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = atom();
    if (accept('^')) return make(Op::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      auto n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      const auto name = s_.substr(start, i_ - start);
      if (name == "x") return make(Op::Var);
      if (name == "pi") return number(std::numbers::pi);
      for (const auto& f : kFunctions) {
        if (f.name != name) continue;
        if (!accept('(')) fail("expected '(' after " + std::string(name));
        auto arg = expr();
        if (!accept(')')) fail("expected ')'");
        auto n = std::make_shared<Node>();
        n->op = Op::Call;
        n->fn = f.fn;
        n->a = std::move(arg);
        return n;
      }
      i_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr literal() {
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        i_ = j;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + i_, v);
    if (ec != std::errc() || ptr != s_.data() + i_) {
      i_ = start;
      fail("invalid number");
    }
    return number(v);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

double apply(Fn fn, double v) {
  switch (fn) {
    case Fn::Exp: return std::exp(v);
    case Fn::Log: return std::log(v);
    case Fn::Sin: return std::sin(v);
    case Fn::Cos: return std::cos(v);
    case Fn::Sinh: return std::sinh(v);
    case Fn::Cosh: return std::cosh(v);
    case Fn::Tanh: return std::tanh(v);
    case Fn::Abs: return std::abs(v);
    case Fn::Sqrt: return std::sqrt(v);
  }
  return v;
}

double eval(const Node& n, double x) {
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::Var: return x;
    case Op::Neg: return -eval(*n.a, x);
    case Op::Add: return eval(*n.a, x) + eval(*n.b, x);
    case Op::Sub: return eval(*n.a, x) - eval(*n.b, x);
    case Op::Mul: return eval(*n.a, x) * eval(*n.b, x);
    case Op::Div: return eval(*n.a, x) / eval(*n.b, x);
    case Op::Pow: return std::pow(eval(*n.a, x), eval(*n.b, x));
    case Op::Call: return apply(n.fn, eval(*n.a, x));
  }
  return 0.0;
}

bool uses_x(const Node& n) {
  if (n.op == Op::Var) return true;
  return (n.a && uses_x(*n.a)) || (n.b && uses_x(*n.b));
}

using Poly = std::array<double, 3>;

std::optional<Poly> poly(const Node& n) {
  if (!uses_x(n)) return Poly{eval(n, 0.0), 0.0, 0.0};
  switch (n.op) {
    case Op::Var: return Poly{0.0, 1.0, 0.0};
    case Op::Neg: {
      auto p = poly(*n.a);
      if (!p) return std::nullopt;
      return Poly{-(*p)[0], -(*p)[1], -(*p)[2]};
    }
    case Op::Add:
    case Op::Sub: {
      auto p = poly(*n.a), q = poly(*n.b);
      if (!p || !q) return std::nullopt;
      const double s = n.op == Op::Add ? 1.0 : -1.0;
      return Poly{(*p)[0] + s * (*q)[0], (*p)[1] + s * (*q)[1], (*p)[2] + s * (*q)[2]};
    }
    case Op::Mul: {
      auto p = poly(*n.a), q = poly(*n.b);
      if (!p || !q) return std::nullopt;
      double r[5] = {0, 0, 0, 0, 0};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) r[i + j] += (*p)[i] * (*q)[j];
      }
      if (r[3] != 0.0 || r[4] != 0.0) return std::nullopt;
      return Poly{r[0], r[1], r[2]};
    }
    case Op::Div: {
      if (uses_x(*n.b)) return std::nullopt;
      auto p = poly(*n.a);
      const double d = eval(*n.b, 0.0);
      if (!p || d == 0.0) return std::nullopt;
      return Poly{(*p)[0] / d, (*p)[1] / d, (*p)[2] / d};
    }
    case Op::Pow: {
      if (uses_x(*n.b)) return std::nullopt;
      const double e = eval(*n.b, 0.0);
      auto p = poly(*n.a);
      if (!p) return std::nullopt;
      if (e == 0.0) return Poly{1.0, 0.0, 0.0};
      if (e == 1.0) return p;
      if (e == 2.0 && (*p)[2] == 0.0) {
        const double a = (*p)[0], b = (*p)[1];
        return Poly{a * a, 2.0 * a * b, b * b};
      }
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

}  // namespace

Expression::Expression(std::string source, std::shared_ptr<const Node> root)
    : source_(std::move(source)), root_(std::move(root)) {}

Expression Expression::parse(std::string_view source) {
  Parser p(source);
  auto root = p.run();
  return Expression(std::string(source), std::move(root));
}

Expression Expression::constant(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return Expression(std::string(buf, ptr), number(value));
}

double Expression::operator()(double x) const { return eval(*root_, x); }

bool Expression::depends_on_x() const { return uses_x(*root_); }

std::optional<std::array<double, 3>> Expression::quadratic() const { return poly(*root_); }

}  // namespace symcrit::expr
