#include "isophote/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>
#include <string>

namespace isophote {

namespace {

struct FuncName {
  std::string_view name;
  Op op;
};

constexpr std::array<FuncName, 10> kFunctions{{
    {"sin", Op::Sin}, {"cos", Op::Cos}, {"tan", Op::Tan}, {"sinh", Op::Sinh},
    {"cosh", Op::Cosh}, {"tanh", Op::Tanh}, {"exp", Op::Exp}, {"log", Op::Log},
    {"sqrt", Op::Sqrt}, {"abs", Op::Abs},
}};

std::string_view func_name(Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return "?";
}

bool is_function(Op op) { return op >= Op::Sin; }

NodePtr make_literal(double x) {
  auto n = std::make_shared<Node>();
  n->op = Op::Literal;
  n->value = x;
  return n;
}

NodePtr make_variable(Var v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->var = v;
  n->vars = static_cast<std::uint8_t>(1u << static_cast<int>(v));
  return n;
}

NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->vars = a->vars;
  n->depth = a->depth + 1;
  if (b) {
    n->vars |= b->vars;
    n->depth = std::max(a->depth, b->depth) + 1;
  }
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool literal(const Expr& e, double* out = nullptr) {
  if (e.root().op != Op::Literal) return false;
  if (out) *out = e.root().value;
  return true;
}

// Folds a node whose operands are literals; returns false if the fold would
// leave the real domain (the node is then kept symbolic).
bool try_fold(Op op, const Expr& a, const Expr* b, double* out) {
  double x = 0.0, y = 0.0;
  if (!literal(a, &x)) return false;
  if (b && !literal(*b, &y)) return false;
  try {
    Expr tmp(b ? make_node(op, a.node(), b->node()) : make_node(op, a.node()));
    const double r = evaluate(tmp);
    if (!std::isfinite(r)) return false;
    *out = r;
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    skip_ws();
    if (pos_ >= text_.size()) fail(ErrorCode::SyntaxError, "empty expression");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail(ErrorCode::SyntaxError, "unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& msg) const {
    throw Error(code, msg + " at offset " + std::to_string(pos_), pos_);
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

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = Expr(make_node(Op::Add, lhs.node(), parse_term().node()));
      else if (accept('-'))
        lhs = Expr(make_node(Op::Sub, lhs.node(), parse_term().node()));
      else
        return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr(make_node(Op::Mul, lhs.node(), parse_unary().node()));
      else if (accept('/'))
        lhs = Expr(make_node(Op::Div, lhs.node(), parse_unary().node()));
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr(make_node(Op::Neg, parse_unary().node()));
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr(make_node(Op::Pow, base.node(), parse_unary().node()));
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail(ErrorCode::SyntaxError, "unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail(ErrorCode::SyntaxError, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        digits();
      else
        pos_ = save;
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail(ErrorCode::SyntaxError, "malformed number");
    }
    return Expr(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == "u") return Expr::variable(Var::U);
    if (id == "v") return Expr::variable(Var::V);
    if (id == "t") return Expr::variable(Var::T);
    if (id == "s") return Expr::variable(Var::S);
    if (id == "pi") return Expr(std::numbers::pi);
    for (const auto& f : kFunctions) {
      if (f.name == id) {
        if (!accept('(')) fail(ErrorCode::SyntaxError, "expected '(' after " + std::string(id));
        Expr arg = parse_expr();
        if (!accept(')')) fail(ErrorCode::SyntaxError, "expected ')'");
        return Expr(make_node(f.op, arg.node()));
      }
    }
    pos_ = start;
    fail(ErrorCode::UnknownIdentifier, "unknown identifier '" + std::string(id) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Literal: return n.value < 0.0 ? 0 : 5;
    default: return 5;
  }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_node(child, out);
  if (parens) out += ')';
}

void print_node(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Literal: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Op::Variable:
      out += to_string(n.var);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const int p = precedence(n);
      print_child(*n.lhs, precedence(*n.lhs) < p, out);
      out += n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
      print_child(*n.rhs, precedence(*n.rhs) <= p, out);
      return;
    }
    case Op::Neg:
      out += '-';
      print_child(*n.lhs, precedence(*n.lhs) < 3, out);
      return;
    case Op::Pow:
      print_child(*n.lhs, precedence(*n.lhs) <= 4, out);
      out += '^';
      print_child(*n.rhs, precedence(*n.rhs) < 4, out);
      return;
    default:
      out += func_name(n.op);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Literal: return a.value == b.value;
    case Op::Variable: return a.var == b.var;
    default: break;
  }
  if (!equal_nodes(*a.lhs, *b.lhs)) return false;
  if (a.rhs || b.rhs) return a.rhs && b.rhs && equal_nodes(*a.rhs, *b.rhs);
  return true;
}

}  // namespace

std::string_view to_string(Var v) {
  switch (v) {
    case Var::U: return "u";
    case Var::V: return "v";
    case Var::T: return "t";
    case Var::S: return "s";
  }
  return "?";
}

namespace detail {

void throw_domain(const char* what) { throw Error(ErrorCode::DomainError, what); }

void throw_unbound(Var v) {
  throw Error(ErrorCode::UnboundVariable,
              "variable '" + std::string(to_string(v)) + "' is not bound");
}

}  // namespace detail

Expr::Expr(double literal) : root_(make_literal(literal)) {}

Expr Expr::parse(std::string_view text) { return Parser(text).run(); }

Expr Expr::variable(Var v) { return Expr(make_variable(v)); }

std::string Expr::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  return a.node() == b.node() || equal_nodes(a.root(), b.root());
}

// ---------------------------------------------------------------------------
// Simplifying constructors

Expr operator+(const Expr& a, const Expr& b) {
  double r;
  if (try_fold(Op::Add, a, &b, &r)) return Expr(r);
  if (a.is_literal(0.0)) return b;
  if (b.is_literal(0.0)) return a;
  return Expr(make_node(Op::Add, a.node(), b.node()));
}

Expr operator-(const Expr& a, const Expr& b) {
  double r;
  if (try_fold(Op::Sub, a, &b, &r)) return Expr(r);
  if (b.is_literal(0.0)) return a;
  if (a.is_literal(0.0)) return -b;
  return Expr(make_node(Op::Sub, a.node(), b.node()));
}

Expr operator*(const Expr& a, const Expr& b) {
  double r;
  if (try_fold(Op::Mul, a, &b, &r)) return Expr(r);
  if (a.is_literal(0.0) || b.is_literal(0.0)) return Expr(0.0);
  if (a.is_literal(1.0)) return b;
  if (b.is_literal(1.0)) return a;
  return Expr(make_node(Op::Mul, a.node(), b.node()));
}

Expr operator/(const Expr& a, const Expr& b) {
  double r;
  if (try_fold(Op::Div, a, &b, &r)) return Expr(r);
  if (b.is_literal(1.0)) return a;
  if (a.is_literal(0.0) && !b.is_literal(0.0)) return Expr(0.0);
  return Expr(make_node(Op::Div, a.node(), b.node()));
}

Expr operator-(const Expr& a) {
  double x;
  if (literal(a, &x)) return Expr(-x);
  if (a.root().op == Op::Neg) return Expr(a.root().lhs);
  return Expr(make_node(Op::Neg, a.node()));
}

Expr pow(const Expr& a, const Expr& b) {
  double r;
  if (try_fold(Op::Pow, a, &b, &r)) return Expr(r);
  if (b.is_literal(1.0)) return a;
  if (b.is_literal(0.0)) return Expr(1.0);
  return Expr(make_node(Op::Pow, a.node(), b.node()));
}

Expr apply(Op func, const Expr& a) {
  if (!is_function(func)) throw Error(ErrorCode::InvalidArgument, "not a unary function");
  double r;
  if (try_fold(func, a, nullptr, &r)) return Expr(r);
  return Expr(make_node(func, a.node()));
}

// ---------------------------------------------------------------------------
// Differentiation

Expr Expr::diff(Var v) const {
  const Node& n = *root_;
  if (!((n.vars >> static_cast<int>(v)) & 1u)) return Expr(0.0);
  switch (n.op) {
    case Op::Literal:
      return Expr(0.0);
    case Op::Variable:
      return Expr(n.var == v ? 1.0 : 0.0);
    default:
      break;
  }
  const Expr a(n.lhs);
  const Expr da = a.diff(v);
  switch (n.op) {
    case Op::Add:
      return da + Expr(n.rhs).diff(v);
    case Op::Sub:
      return da - Expr(n.rhs).diff(v);
    case Op::Mul: {
      const Expr b(n.rhs);
      return da * b + a * b.diff(v);
    }
    case Op::Div: {
      const Expr b(n.rhs);
      return (da * b - a * b.diff(v)) / pow(b, Expr(2.0));
    }
    case Op::Neg:
      return -da;
    case Op::Pow: {
      const Expr b(n.rhs);
      if (b.is_constant()) return (b * pow(a, b - Expr(1.0))) * da;
      // d(a^b) = a^(b-1)*b*a' + a^b*b'*log(a)
      return (pow(a, b - Expr(1.0)) * b) * da + (*this * b.diff(v)) * apply(Op::Log, a);
    }
    case Op::Sin:
      return apply(Op::Cos, a) * da;
    case Op::Cos:
      return -(apply(Op::Sin, a) * da);
    case Op::Tan:
      return da / pow(apply(Op::Cos, a), Expr(2.0));
    case Op::Sinh:
      return apply(Op::Cosh, a) * da;
    case Op::Cosh:
      return apply(Op::Sinh, a) * da;
    case Op::Tanh:
      return da / pow(apply(Op::Cosh, a), Expr(2.0));
    case Op::Exp:
      return *this * da;
    case Op::Log:
      return da / a;
    case Op::Sqrt:
      return da / (Expr(2.0) * *this);
    case Op::Abs:
      return (a / *this) * da;
    default:
      break;
  }
  return Expr(0.0);
}

}  // namespace isophote
