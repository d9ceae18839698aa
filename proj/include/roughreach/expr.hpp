#pragma once

// Small arithmetic-expression language over variables y1..yd with exact
// symbolic differentiation. Grammar: literals; yk; unary -, sin, cos, exp;
// binary + - * /; ^ with an integer-literal exponent.

#include <cmath>
#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughreach {

enum class ExprKind { Const, Var, Neg, Sin, Cos, Exp, Add, Sub, Mul, Div, Pow };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  double value = 0.0;   // Const
  int index = 0;        // Var, 0-based
  int exponent = 0;     // Pow
  Expr a, b;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

inline Expr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Const;
  n->value = v;
  return n;
}

inline Expr make_var(int index) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Var;
  n->index = index;
  return n;
}

inline bool is_const(const Expr& e, double v) {
  return e->kind == ExprKind::Const && e->value == v;
}

inline Expr make_unary(ExprKind kind, Expr a) {
  if (a->kind == ExprKind::Const) {
    switch (kind) {
      case ExprKind::Neg: return make_const(-a->value);
      case ExprKind::Sin: return make_const(std::sin(a->value));
      case ExprKind::Cos: return make_const(std::cos(a->value));
      case ExprKind::Exp: return make_const(std::exp(a->value));
      default: break;
    }
  }
  if (kind == ExprKind::Neg && a->kind == ExprKind::Neg) return a->a;
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = std::move(a);
  return n;
}

inline Expr make_binary(ExprKind kind, Expr a, Expr b) {
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const) {
    switch (kind) {
      case ExprKind::Add: return make_const(a->value + b->value);
      case ExprKind::Sub: return make_const(a->value - b->value);
      case ExprKind::Mul: return make_const(a->value * b->value);
      default: break;  // keep Div symbolic so 1/0 fails at eval time
    }
  }
  switch (kind) {
    case ExprKind::Add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case ExprKind::Sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return make_unary(ExprKind::Neg, b);
      break;
    case ExprKind::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case ExprKind::Div:
      if (is_const(a, 0.0)) return make_const(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    default:
      break;
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

inline Expr make_pow(Expr a, int exponent) {
  if (exponent == 0) return make_const(1.0);
  if (exponent == 1) return a;
  if (a->kind == ExprKind::Const)
    return make_const(std::pow(a->value, exponent));
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Pow;
  n->exponent = exponent;
  n->a = std::move(a);
  return n;
}

inline double eval(const Expr& e, const std::vector<double>& y) {
  double r = 0.0;
  switch (e->kind) {
    case ExprKind::Const: r = e->value; break;
    case ExprKind::Var:
      if (e->index >= static_cast<int>(y.size()))
        throw EvalError("variable index out of range at evaluation");
      r = y[e->index];
      break;
    case ExprKind::Neg: r = -eval(e->a, y); break;
    case ExprKind::Sin: r = std::sin(eval(e->a, y)); break;
    case ExprKind::Cos: r = std::cos(eval(e->a, y)); break;
    case ExprKind::Exp: r = std::exp(eval(e->a, y)); break;
    case ExprKind::Add: r = eval(e->a, y) + eval(e->b, y); break;
    case ExprKind::Sub: r = eval(e->a, y) - eval(e->b, y); break;
    case ExprKind::Mul: r = eval(e->a, y) * eval(e->b, y); break;
    case ExprKind::Div: {
      const double den = eval(e->b, y);
      if (den == 0.0) throw EvalError("division by zero");
      r = eval(e->a, y) / den;
      break;
    }
    case ExprKind::Pow: r = std::pow(eval(e->a, y), e->exponent); break;
  }
  if (!std::isfinite(r)) throw EvalError("non-finite value in evaluation");
  return r;
}

/// Exact symbolic derivative with respect to variable `index` (0-based).
inline Expr diff(const Expr& e, int index) {
  using K = ExprKind;
  switch (e->kind) {
    case K::Const: return make_const(0.0);
    case K::Var: return make_const(e->index == index ? 1.0 : 0.0);
    case K::Neg: return make_unary(K::Neg, diff(e->a, index));
    case K::Sin:
      return make_binary(K::Mul, make_unary(K::Cos, e->a), diff(e->a, index));
    case K::Cos:
      return make_binary(K::Mul,
                         make_unary(K::Neg, make_unary(K::Sin, e->a)),
                         diff(e->a, index));
    case K::Exp:
      return make_binary(K::Mul, make_unary(K::Exp, e->a), diff(e->a, index));
    case K::Add: return make_binary(K::Add, diff(e->a, index), diff(e->b, index));
    case K::Sub: return make_binary(K::Sub, diff(e->a, index), diff(e->b, index));
    case K::Mul:
      return make_binary(K::Add,
                         make_binary(K::Mul, diff(e->a, index), e->b),
                         make_binary(K::Mul, e->a, diff(e->b, index)));
    case K::Div:
      // (a'b - ab') / b^2
      return make_binary(
          K::Div,
          make_binary(K::Sub,
                      make_binary(K::Mul, diff(e->a, index), e->b),
                      make_binary(K::Mul, e->a, diff(e->b, index))),
          make_pow(e->b, 2));
    case K::Pow:
      return make_binary(K::Mul,
                         make_binary(K::Mul, make_const(e->exponent),
                                     make_pow(e->a, e->exponent - 1)),
                         diff(e->a, index));
  }
  throw std::logic_error("unreachable");
}

namespace detail {

inline int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

inline void print_rec(const Expr& e, std::string& out, int parent_prec,
                      bool right_operand) {
  const int prec = precedence(e->kind);
  const bool need_parens =
      prec < parent_prec || (prec == parent_prec && right_operand);
  if (need_parens) out += '(';
  switch (e->kind) {
    case ExprKind::Const: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", e->value);
      if (e->value < 0.0 && !need_parens && parent_prec > 0) {
        out += '(';
        out += buf;
        out += ')';
        if (need_parens) out += ')';
        return;
      }
      out += buf;
      break;
    }
    case ExprKind::Var: out += "y" + std::to_string(e->index + 1); break;
    case ExprKind::Neg:
      out += '-';
      print_rec(e->a, out, precedence(ExprKind::Neg), true);
      break;
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
      out += e->kind == ExprKind::Sin ? "sin"
             : e->kind == ExprKind::Cos ? "cos" : "exp";
      out += '(';
      print_rec(e->a, out, 0, false);
      out += ')';
      break;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      const char op = e->kind == ExprKind::Add ? '+'
                      : e->kind == ExprKind::Sub ? '-'
                      : e->kind == ExprKind::Mul ? '*' : '/';
      print_rec(e->a, out, prec, false);
      out += op;
      print_rec(e->b, out, prec, true);
      break;
    }
    case ExprKind::Pow:
      print_rec(e->a, out, prec, false);
      out += '^';
      if (e->exponent < 0) out += '(' + std::to_string(e->exponent) + ')';
      else out += std::to_string(e->exponent);
      break;
  }
  if (need_parens) out += ')';
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr parse() {
    auto e = expression();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr expression() {
    auto e = term();
    for (;;) {
      if (consume('+')) e = make_binary(ExprKind::Add, e, term());
      else if (consume('-')) e = make_binary(ExprKind::Sub, e, term());
      else return e;
    }
  }

  Expr term() {
    auto e = unary();
    for (;;) {
      if (consume('*')) e = make_binary(ExprKind::Mul, e, unary());
      else if (consume('/')) e = make_binary(ExprKind::Div, e, unary());
      else return e;
    }
  }

  Expr unary() {
    if (consume('-')) return make_unary(ExprKind::Neg, unary());
    return power();
  }

  Expr power() {
    auto base = atom();
    if (consume('^')) {
      skip_ws();
      bool parens = consume('(');
      skip_ws();
      const std::size_t start = pos_;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
        ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (pos_ == start)
        throw ParseError("expected integer exponent after '^'", pos_);
      const int exponent = std::stoi(std::string(text_.substr(start, pos_ - start)));
      if (parens && !consume(')'))
        throw ParseError("expected ')' after exponent", pos_);
      return make_pow(base, exponent);
    }
    return base;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expression();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    try {
      return make_const(std::stod(std::string(text_.substr(start, pos_ - start))));
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (name == "y") {
      const std::size_t num_start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (pos_ == num_start)
        throw ParseError("expected variable index after 'y'", pos_);
      const int idx = std::stoi(std::string(text_.substr(num_start, pos_ - num_start)));
      if (idx < 1 || idx > dim_)
        throw ParseError("variable index out of range", start);
      return make_var(idx - 1);
    }
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!consume('(')) throw ParseError("expected '(' after " + name, pos_);
      auto arg = expression();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return make_unary(name == "sin" ? ExprKind::Sin
                        : name == "cos" ? ExprKind::Cos : ExprKind::Exp,
                        arg);
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }
};

}  // namespace detail

inline Expr parse_expr(std::string_view text, int dim) {
  return detail::Parser(text, dim).parse();
}

inline std::string print_expr(const Expr& e) {
  std::string out;
  detail::print_rec(e, out, 0, false);
  return out;
}

}  // namespace roughreach
