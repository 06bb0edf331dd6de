#include "cda/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace cda {

struct Expression::Node {
  enum class Op {
    Number, X, Y, Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Tan, Exp, Log, Sqrt, Abs,
    Lt, Le, Gt, Ge, Eq, Ne, If
  };
  Op op = Op::Number;
  double value = 0.0;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double x, double y) const {
    auto a = [&](size_t i) { return args[i]->eval(x, y); };
    switch (op) {
      case Op::Number: return value;
      case Op::X: return x;
      case Op::Y: return y;
      case Op::Add: return a(0) + a(1);
      case Op::Sub: return a(0) - a(1);
      case Op::Mul: return a(0) * a(1);
      case Op::Div: return a(0) / a(1);
      case Op::Pow: return std::pow(a(0), a(1));
      case Op::Neg: return -a(0);
      case Op::Sin: return std::sin(a(0));
      case Op::Cos: return std::cos(a(0));
      case Op::Tan: return std::tan(a(0));
      case Op::Exp: return std::exp(a(0));
      case Op::Log: return std::log(a(0));
      case Op::Sqrt: return std::sqrt(a(0));
      case Op::Abs: return std::abs(a(0));
      case Op::Lt: return a(0) < a(1);
      case Op::Le: return a(0) <= a(1);
      case Op::Gt: return a(0) > a(1);
      case Op::Ge: return a(0) >= a(1);
      case Op::Eq: return a(0) == a(1);
      case Op::Ne: return a(0) != a(1);
      case Op::If: return a(0) != 0.0 ? a(1) : a(2);
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = Node::Op;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = value;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExpressionError("expression error at position " + std::to_string(pos_) + ": " + msg +
                              " in \"" + s_ + "\"",
                          pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = make(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr condition() {
    NodePtr lhs = expr();
    skip();
    static const std::pair<const char*, Op> ops[] = {{"<=", Op::Le}, {">=", Op::Ge},
                                                     {"==", Op::Eq}, {"!=", Op::Ne},
                                                     {"<", Op::Lt},  {">", Op::Gt}};
    for (const auto& [tok, op] : ops) {
      const std::string t(tok);
      if (s_.compare(pos_, t.size(), t) == 0) {
        pos_ += t.size();
        return make(op, {lhs, expr()});
      }
    }
    fail("expected a comparison operator");
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<size_t>(end - begin);
      return make(Op::Number, {}, v);
    }
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return make(Op::X);
      if (name == "y") return make(Op::Y);
      if (name == "pi") return make(Op::Number, {}, std::numbers::pi);
      if (name == "if") {
        expect('(');
        NodePtr cond = condition();
        expect(',');
        NodePtr a = expr();
        expect(',');
        NodePtr b = expr();
        expect(')');
        return make(Op::If, {cond, a, b});
      }
      static const std::pair<const char*, Op> funcs[] = {
          {"sin", Op::Sin}, {"cos", Op::Cos},   {"tan", Op::Tan}, {"exp", Op::Exp},
          {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"abs", Op::Abs}};
      for (const auto& [fname, op] : funcs) {
        if (name == fname) {
          expect('(');
          NodePtr arg = expr();
          expect(')');
          return make(op, {arg});
        }
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

}  // namespace cda
