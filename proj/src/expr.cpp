#include "minkiso/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "minkiso/error.hpp"

namespace minkiso {

enum class Op { Const, U, V, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Sinh, Cosh, Tanh, Exp, Log, Sqrt };

struct ExprNode {
  Op op = Op::Const;
  double value = 0.0;
  std::unique_ptr<ExprNode> lhs;
  std::unique_ptr<ExprNode> rhs;
};

namespace {

using NodePtr = std::unique_ptr<ExprNode>;

NodePtr leaf(Op op, double value = 0.0) {
  auto n = std::make_unique<ExprNode>();
  n->op = op;
  n->value = value;
  return n;
}

NodePtr node(Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_unique<ExprNode>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (peek('+')) {
        ++pos_;
        lhs = node(Op::Add, std::move(lhs), parse_term());
      } else if (peek('-')) {
        ++pos_;
        lhs = node(Op::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (!peek(c)) fail(ErrorKind::SyntaxError, what);
    ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= src_.size();
  }

  std::size_t pos() const noexcept { return pos_; }

  [[noreturn]] void fail(ErrorKind kind, const std::string& expected) const {
    std::ostringstream os;
    if (kind == ErrorKind::UnknownIdentifier) {
      os << "unknown identifier at offset " << pos_ << ": " << expected;
    } else {
      os << "syntax error at offset " << pos_ << ": expected " << expected;
      if (pos_ < src_.size()) {
        os << ", found '" << src_[pos_] << "'";
      } else {
        os << ", found end of input";
      }
    }
    throw ParseError(kind, pos_, expected, os.str());
  }

 private:
  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (peek('*')) {
        ++pos_;
        lhs = node(Op::Mul, std::move(lhs), parse_unary());
      } else if (peek('/')) {
        ++pos_;
        lhs = node(Op::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    if (peek('-')) {
      ++pos_;
      return node(Op::Neg, parse_unary());
    }
    if (peek('+')) {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    if (peek('^')) {
      ++pos_;
      return node(Op::Pow, std::move(base), parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail(ErrorKind::SyntaxError, "number, identifier or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')', "')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(ErrorKind::SyntaxError, "number, identifier or '('");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        pos_ = q;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      pos_ = start;
      fail(ErrorKind::SyntaxError, "numeric literal");
    }
    return leaf(Op::Const, value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "u") return leaf(Op::U);
    if (name == "v") return leaf(Op::V);
    if (name == "pi") return leaf(Op::Const, std::numbers::pi);
    if (name == "e") return leaf(Op::Const, std::numbers::e);

    static constexpr std::pair<std::string_view, Op> kFuncs[] = {
        {"sin", Op::Sin},   {"cos", Op::Cos}, {"sinh", Op::Sinh}, {"cosh", Op::Cosh},
        {"tanh", Op::Tanh}, {"exp", Op::Exp}, {"log", Op::Log},   {"sqrt", Op::Sqrt}};
    for (const auto& [fname, op] : kFuncs) {
      if (name == fname) {
        expect('(', "'(' after function name");
        NodePtr arg = parse_expr();
        expect(')', "')'");
        return node(op, std::move(arg));
      }
    }
    pos_ = start;
    fail(ErrorKind::UnknownIdentifier, std::string(name));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek(char c) const { return pos_ < src_.size() && src_[pos_] == c; }

  std::string_view src_;
  std::size_t pos_ = 0;
};

double eval_node(const ExprNode& n, double u, double v) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::U: return u;
    case Op::V: return v;
    case Op::Add: return eval_node(*n.lhs, u, v) + eval_node(*n.rhs, u, v);
    case Op::Sub: return eval_node(*n.lhs, u, v) - eval_node(*n.rhs, u, v);
    case Op::Mul: return eval_node(*n.lhs, u, v) * eval_node(*n.rhs, u, v);
    case Op::Div: return eval_node(*n.lhs, u, v) / eval_node(*n.rhs, u, v);
    case Op::Pow: {
      const double b = eval_node(*n.lhs, u, v);
      const double x = eval_node(*n.rhs, u, v);
      if (x == 2.0) return b * b;
      return std::pow(b, x);
    }
    case Op::Neg: return -eval_node(*n.lhs, u, v);
    case Op::Sin: return std::sin(eval_node(*n.lhs, u, v));
    case Op::Cos: return std::cos(eval_node(*n.lhs, u, v));
    case Op::Sinh: return std::sinh(eval_node(*n.lhs, u, v));
    case Op::Cosh: return std::cosh(eval_node(*n.lhs, u, v));
    case Op::Tanh: return std::tanh(eval_node(*n.lhs, u, v));
    case Op::Exp: return std::exp(eval_node(*n.lhs, u, v));
    case Op::Log: return std::log(eval_node(*n.lhs, u, v));
    case Op::Sqrt: return std::sqrt(eval_node(*n.lhs, u, v));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view src) {
  Parser p(src);
  NodePtr root = p.parse_expr();
  if (!p.at_end()) p.fail(ErrorKind::SyntaxError, "operator or end of input");
  return Expression(std::shared_ptr<const ExprNode>(std::move(root)), std::string(src));
}

double Expression::eval(double u, double v) const {
  const double r = eval_node(*root_, u, v);
  if (!std::isfinite(r)) {
    std::ostringstream os;
    os << "expression '" << source_ << "' is not finite at (u,v) = (" << u << ", " << v << ")";
    throw Error(ErrorKind::DomainError, os.str());
  }
  return r;
}

std::array<Expression, 3> parse_component_list(std::string_view src) {
  Parser p(src);
  std::vector<std::shared_ptr<const ExprNode>> roots;
  std::vector<std::size_t> starts;
  for (int k = 0; k < 3; ++k) {
    starts.push_back(p.pos());
    roots.emplace_back(p.parse_expr());
    if (k < 2) p.expect(',', "',' between components");
  }
  if (!p.at_end()) p.fail(ErrorKind::SyntaxError, "end of input after third component");
  starts.push_back(src.size());
  auto make = [&](std::size_t k) {
    std::string text(src.substr(starts[k], starts[k + 1] - starts[k]));
    while (!text.empty() && (text.back() == ',' || std::isspace(static_cast<unsigned char>(text.back())))) {
      text.pop_back();
    }
    return Expression(roots[k], text);
  };
  return {make(0), make(1), make(2)};
}

}  // namespace minkiso
