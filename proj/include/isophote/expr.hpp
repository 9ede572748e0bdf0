#ifndef ISOPHOTE_EXPR_HPP
#define ISOPHOTE_EXPR_HPP

// Coordinate-function expressions: parsing, evaluation over any scalar type
// (double or Taylor series), and symbolic differentiation.
//
// Grammar (whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'pi' | variable | func '(' expr ')' | '(' expr ')'
//   variable:= 'u' | 'v' | 't' | 's'
//   func    := sin cos tan sinh cosh tanh exp log sqrt abs

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>

#include "isophote/error.hpp"
#include "isophote/taylor.hpp"

namespace isophote {

enum class Var : std::uint8_t { U = 0, V = 1, T = 2, S = 3 };

std::string_view to_string(Var v);

enum class Op : std::uint8_t {
  Literal, Variable,
  Add, Sub, Mul, Div, Pow, Neg,
  Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Literal;
  double value = 0.0;    // Literal
  Var var = Var::U;      // Variable
  NodePtr lhs;           // unary operand or left operand
  NodePtr rhs;           // right operand
  std::uint8_t vars = 0; // bitmask of variables referenced below this node
  int depth = 1;
};

class Expr {
 public:
  Expr() : Expr(0.0) {}
  explicit Expr(double literal);
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  static Expr parse(std::string_view text);
  static Expr variable(Var v);

  const Node& root() const { return *root_; }
  const NodePtr& node() const { return root_; }

  int depth() const { return root_->depth; }
  bool uses(Var v) const { return (root_->vars >> static_cast<int>(v)) & 1u; }
  bool is_constant() const { return root_->vars == 0; }
  bool is_literal(double x) const { return root_->op == Op::Literal && root_->value == x; }

  /// Exact symbolic derivative with 0/1 identity folding.
  Expr diff(Var v) const;

  /// Canonical text form; parse(print()) reproduces the tree.
  std::string print() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  NodePtr root_;
};

// Simplifying constructors used by diff and by callers assembling trees.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, const Expr& b);
Expr apply(Op func, const Expr& a);

template <typename S>
class Bindings {
 public:
  Bindings() = default;

  Bindings& set(Var v, const S& x) {
    values_[index(v)] = x;
    mask_ |= static_cast<std::uint8_t>(1u << index(v));
    return *this;
  }
  bool has(Var v) const { return (mask_ >> index(v)) & 1u; }
  const S& get(Var v) const { return values_[index(v)]; }
  std::uint8_t mask() const { return mask_; }

 private:
  static std::size_t index(Var v) { return static_cast<std::size_t>(v); }
  std::array<S, 4> values_{};
  std::uint8_t mask_ = 0;
};

namespace detail {

[[noreturn]] void throw_domain(const char* what);
[[noreturn]] void throw_unbound(Var v);

template <typename S>
S integer_power(S base, long n) {
  const bool invert = n < 0;
  unsigned long k = static_cast<unsigned long>(invert ? -n : n);
  S result(1.0);
  while (k != 0) {
    if (k & 1ul) result = result * base;
    base = base * base;
    k >>= 1;
  }
  if (invert) {
    if (value_of(result) == 0.0) throw_domain("division by zero in negative power");
    result = S(1.0) / result;
  }
  return result;
}

template <typename S>
S eval_node(const Node& n, const Bindings<S>& b) {
  using std::abs, std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt,
      std::tan, std::tanh;
  switch (n.op) {
    case Op::Literal:
      return S(n.value);
    case Op::Variable:
      if (!b.has(n.var)) throw_unbound(n.var);
      return b.get(n.var);
    case Op::Add:
      return eval_node(*n.lhs, b) + eval_node(*n.rhs, b);
    case Op::Sub:
      return eval_node(*n.lhs, b) - eval_node(*n.rhs, b);
    case Op::Mul:
      return eval_node(*n.lhs, b) * eval_node(*n.rhs, b);
    case Op::Div: {
      const S den = eval_node(*n.rhs, b);
      if (value_of(den) == 0.0) throw_domain("division by zero");
      return eval_node(*n.lhs, b) / den;
    }
    case Op::Neg:
      return -eval_node(*n.lhs, b);
    case Op::Pow: {
      const S base = eval_node(*n.lhs, b);
      if (n.rhs->vars == 0) {
        const double e = value_of(eval_node(*n.rhs, Bindings<S>{}));
        if (std::nearbyint(e) == e && std::abs(e) <= 1024.0)
          return integer_power(base, static_cast<long>(e));
      }
      if (!(value_of(base) > 0.0)) throw_domain("non-integer power of a non-positive base");
      return exp(eval_node(*n.rhs, b) * log(base));
    }
    case Op::Sin:
      return sin(eval_node(*n.lhs, b));
    case Op::Cos:
      return cos(eval_node(*n.lhs, b));
    case Op::Tan: {
      const S x = eval_node(*n.lhs, b);
      if (std::cos(value_of(x)) == 0.0) throw_domain("tan at a pole");
      return tan(x);
    }
    case Op::Sinh:
      return sinh(eval_node(*n.lhs, b));
    case Op::Cosh:
      return cosh(eval_node(*n.lhs, b));
    case Op::Tanh:
      return tanh(eval_node(*n.lhs, b));
    case Op::Exp:
      return exp(eval_node(*n.lhs, b));
    case Op::Log: {
      const S x = eval_node(*n.lhs, b);
      if (!(value_of(x) > 0.0)) throw_domain("log of a non-positive value");
      return log(x);
    }
    case Op::Sqrt: {
      const S x = eval_node(*n.lhs, b);
      if (value_of(x) < 0.0) throw_domain("sqrt of a negative value");
      if constexpr (!std::is_same_v<S, double>) {
        if (value_of(x) == 0.0) throw_domain("sqrt is not differentiable at zero");
      }
      return sqrt(x);
    }
    case Op::Abs:
      return abs(eval_node(*n.lhs, b));
  }
  throw_domain("unknown operation");
}

}  // namespace detail

/// Evaluates e with the given bindings. Domain violations (log of a
/// non-positive value, division by zero, ...) raise DomainError; a variable
/// without a binding raises UnboundVariable.
template <typename S>
S evaluate(const Expr& e, const Bindings<S>& b) {
  return detail::eval_node(e.root(), b);
}

inline double evaluate(const Expr& e, double u = 0.0, double v = 0.0, double t = 0.0,
                       double s = 0.0) {
  Bindings<double> b;
  b.set(Var::U, u).set(Var::V, v).set(Var::T, t).set(Var::S, s);
  return evaluate(e, b);
}

}  // namespace isophote

#endif  // ISOPHOTE_EXPR_HPP
