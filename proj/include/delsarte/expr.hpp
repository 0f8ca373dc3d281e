// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "delsarte/grid.hpp"

#include <cctype>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string_view>

namespace delsarte {

/// Complex-valued expression in the coordinates x, y with exact symbolic
/// differentiation. Grammar: + - * / ^, unary minus, parentheses, numbers
/// (a trailing `i` makes a literal imaginary), the constants i, pi, and the
/// functions sin cos tan exp log sqrt sinh cosh tanh sech.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr constant(cplx v) { return Expr(std::make_shared<Node>(Node(Op::constant, v))); }
  static Expr variable(int axis) {
    Node n(Op::variable);
    n.var = axis;
    return Expr(std::make_shared<Node>(n));
  }

  static Expr parse(std::string_view text) {
    Parser p{text};
    Expr e(p.expr());
    p.skip();
    if (p.pos != text.size())
      throw ParseError("unexpected '" + std::string(1, text[p.pos]) + "' in expression '" + std::string(text) + "'");
    return e;
  }

  cplx eval(const Point& x) const { return eval(*node_, x); }

  Expr derivative(int axis) const { return Expr(diff(node_, axis)); }
  Expr derivative(const MultiIndex& alpha) const {
    Expr e = *this;
    for (int j = 0; j < alpha.dim(); ++j)
      for (int k = 0; k < alpha[j]; ++k) e = e.derivative(j);
    return e;
  }

  bool is_constant() const { return node_->op == Op::constant; }
  cplx constant_value() const { return node_->value; }
  // Highest coordinate axis referenced, -1 for none.
  int max_axis() const { return max_axis(*node_); }

  std::string str() const { return str(*node_); }

  friend Expr operator+(const Expr& a, const Expr& b) { return Expr(add(a.node_, b.node_)); }
  friend Expr operator-(const Expr& a, const Expr& b) { return Expr(sub(a.node_, b.node_)); }
  friend Expr operator*(const Expr& a, const Expr& b) { return Expr(mul(a.node_, b.node_)); }
  friend Expr operator/(const Expr& a, const Expr& b) { return Expr(div(a.node_, b.node_)); }

 private:
  enum class Op { constant, variable, add, sub, mul, div, neg, pow, func };
  struct Node;
  using P = std::shared_ptr<const Node>;
  struct Node {
    Op op = Op::constant;
    cplx value{};
    int var = 0;
    std::string fn;
    P a, b;
    explicit Node(Op o = Op::constant, cplx v = 0.0) : op(o), value(v) {}
  };

  explicit Expr(P n) : node_(std::move(n)) {}

  static P make(Op op, P a, P b = nullptr, std::string fn = {}) {
    Node n(op);
    n.a = std::move(a);
    n.b = std::move(b);
    n.fn = std::move(fn);
    return std::make_shared<Node>(std::move(n));
  }
  static P cnst(cplx v) { return std::make_shared<Node>(Node(Op::constant, v)); }
  static bool is_c(const P& p, cplx v) { return p->op == Op::constant && p->value == v; }
  static bool is_c(const P& p) { return p->op == Op::constant; }

  static P add(P a, P b) {
    if (is_c(a) && is_c(b)) return cnst(a->value + b->value);
    if (is_c(a, 0.0)) return b;
    if (is_c(b, 0.0)) return a;
    return make(Op::add, a, b);
  }
  static P sub(P a, P b) {
    if (is_c(a) && is_c(b)) return cnst(a->value - b->value);
    if (is_c(b, 0.0)) return a;
    if (is_c(a, 0.0)) return neg(b);
    return make(Op::sub, a, b);
  }
  static P mul(P a, P b) {
    if (is_c(a) && is_c(b)) return cnst(a->value * b->value);
    if (is_c(a, 0.0) || is_c(b, 0.0)) return cnst(0.0);
    if (is_c(a, 1.0)) return b;
    if (is_c(b, 1.0)) return a;
    return make(Op::mul, a, b);
  }
  static P div(P a, P b) {
    if (is_c(a) && is_c(b)) return cnst(a->value / b->value);
    if (is_c(a, 0.0)) return cnst(0.0);
    if (is_c(b, 1.0)) return a;
    return make(Op::div, a, b);
  }
  static P neg(P a) {
    if (is_c(a)) return cnst(-a->value);
    if (a->op == Op::neg) return a->a;
    return make(Op::neg, a);
  }
  static P pow(P a, P b) {
    if (is_c(a) && is_c(b)) return cnst(power_of(a->value, b->value));
    if (is_c(b, 1.0)) return a;
    if (is_c(b, 0.0)) return cnst(1.0);
    return make(Op::pow, a, b);
  }
  static P fn(const std::string& name, P a) {
    if (is_c(a)) return cnst(apply_fn(name, a->value));
    return make(Op::func, a, nullptr, name);
  }

  static cplx apply_fn(const std::string& f, cplx v) {
    if (f == "sin") return std::sin(v);
    if (f == "cos") return std::cos(v);
    if (f == "tan") return std::tan(v);
    if (f == "exp") return std::exp(v);
    if (f == "log") return std::log(v);
    if (f == "sqrt") return std::sqrt(v);
    if (f == "sinh") return std::sinh(v);
    if (f == "cosh") return std::cosh(v);
    if (f == "tanh") return std::tanh(v);
    if (f == "sech") return 1.0 / std::cosh(v);
    throw ParseError("unknown function '" + f + "'");
  }

  // Small integer exponents by repeated multiplication, which is exact where
  // std::pow on complex arguments is not.
  static cplx power_of(cplx base, cplx e) {
    if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) < 64) {
      const int k = static_cast<int>(e.real());
      cplx r = 1.0;
      for (int i = 0; i < std::abs(k); ++i) r *= base;
      return k < 0 ? 1.0 / r : r;
    }
    return std::pow(base, e);
  }

  static cplx eval(const Node& n, const Point& x) {
    switch (n.op) {
      case Op::constant: return n.value;
      case Op::variable: return x[n.var];
      case Op::add: return eval(*n.a, x) + eval(*n.b, x);
      case Op::sub: return eval(*n.a, x) - eval(*n.b, x);
      case Op::mul: return eval(*n.a, x) * eval(*n.b, x);
      case Op::div: return eval(*n.a, x) / eval(*n.b, x);
      case Op::neg: return -eval(*n.a, x);
      case Op::pow: return power_of(eval(*n.a, x), eval(*n.b, x));
      case Op::func: return apply_fn(n.fn, eval(*n.a, x));
    }
    return 0.0;
  }

  static P diff(const P& p, int v) {
    const Node& n = *p;
    switch (n.op) {
      case Op::constant: return cnst(0.0);
      case Op::variable: return cnst(n.var == v ? 1.0 : 0.0);
      case Op::add: return add(diff(n.a, v), diff(n.b, v));
      case Op::sub: return sub(diff(n.a, v), diff(n.b, v));
      case Op::mul: return add(mul(diff(n.a, v), n.b), mul(n.a, diff(n.b, v)));
      case Op::div:
        return div(sub(mul(diff(n.a, v), n.b), mul(n.a, diff(n.b, v))), pow(n.b, cnst(2.0)));
      case Op::neg: return neg(diff(n.a, v));
      case Op::pow: {
        P da = diff(n.a, v);
        if (is_c(n.b)) return mul(mul(n.b, pow(n.a, cnst(n.b->value - 1.0))), da);
        // d(a^b) = a^b (b' log a + b a'/a)
        return mul(p, add(mul(diff(n.b, v), fn("log", n.a)), div(mul(n.b, da), n.a)));
      }
      case Op::func: {
        P da = diff(n.a, v);
        if (is_c(da, 0.0)) return cnst(0.0);
        P outer;
        const auto& f = n.fn;
        if (f == "sin") outer = fn("cos", n.a);
        else if (f == "cos") outer = neg(fn("sin", n.a));
        else if (f == "tan") outer = add(cnst(1.0), pow(p, cnst(2.0)));
        else if (f == "exp") outer = p;
        else if (f == "log") outer = div(cnst(1.0), n.a);
        else if (f == "sqrt") outer = div(cnst(0.5), p);
        else if (f == "sinh") outer = fn("cosh", n.a);
        else if (f == "cosh") outer = fn("sinh", n.a);
        else if (f == "tanh") outer = sub(cnst(1.0), pow(p, cnst(2.0)));
        else if (f == "sech") outer = neg(mul(p, fn("tanh", n.a)));
        else throw ParseError("no derivative rule for '" + f + "'");
        return mul(outer, da);
      }
    }
    return cnst(0.0);
  }

  static int max_axis(const Node& n) {
    if (n.op == Op::variable) return n.var;
    int m = -1;
    if (n.a) m = std::max(m, max_axis(*n.a));
    if (n.b) m = std::max(m, max_axis(*n.b));
    return m;
  }

  static std::string str(const Node& n) {
    switch (n.op) {
      case Op::constant: {
        std::ostringstream os;
        os.precision(17);
        if (n.value.imag() == 0.0) os << n.value.real();
        else if (n.value.real() == 0.0) os << n.value.imag() << "i";
        else os << "(" << n.value.real() << (n.value.imag() < 0 ? "-" : "+") << std::abs(n.value.imag()) << "i)";
        return os.str();
      }
      case Op::variable: return n.var == 0 ? "x" : "y";
      case Op::add: return "(" + str(*n.a) + " + " + str(*n.b) + ")";
      case Op::sub: return "(" + str(*n.a) + " - " + str(*n.b) + ")";
      case Op::mul: return str(*n.a) + "*" + str(*n.b);
      case Op::div: return str(*n.a) + "/(" + str(*n.b) + ")";
      case Op::neg: return "-(" + str(*n.a) + ")";
      case Op::pow: return "(" + str(*n.a) + ")^(" + str(*n.b) + ")";
      case Op::func: return n.fn + "(" + str(*n.a) + ")";
    }
    return "?";
  }

  struct Parser {
    std::string_view s;
    size_t pos = 0;

    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    P expr() {
      P lhs = term();
      while (true) {
        if (eat('+')) lhs = add(lhs, term());
        else if (eat('-')) lhs = sub(lhs, term());
        else return lhs;
      }
    }
    P term() {
      P lhs = unary();
      while (true) {
        if (eat('*')) lhs = mul(lhs, unary());
        else if (eat('/')) lhs = div(lhs, unary());
        else return lhs;
      }
    }
    P unary() {
      if (eat('-')) return neg(unary());
      if (eat('+')) return unary();
      return power();
    }
    P power() {
      P base = primary();
      if (eat('^')) return pow(base, unary());
      return base;
    }
    P primary() {
      skip();
      if (pos >= s.size()) throw ParseError("unexpected end of expression");
      char c = s[pos];
      if (c == '(') {
        ++pos;
        P e = expr();
        if (!eat(')')) throw ParseError("missing ')'");
        return e;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::string buf(s.substr(pos));
        char* end = nullptr;
        double v = std::strtod(buf.c_str(), &end);
        pos += static_cast<size_t>(end - buf.c_str());
        if (pos < s.size() && s[pos] == 'i' &&
            (pos + 1 == s.size() || !std::isalnum(static_cast<unsigned char>(s[pos + 1])))) {
          ++pos;
          return cnst(cplx(0.0, v));
        }
        return cnst(v);
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        size_t b = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        std::string id(s.substr(b, pos - b));
        if (eat('(')) {
          P arg = expr();
          if (!eat(')')) throw ParseError("missing ')' after argument of " + id);
          apply_fn(id, 0.5);  // rejects unknown names
          return fn(id, arg);
        }
        if (id == "x") return var(0);
        if (id == "y") return var(1);
        if (id == "i") return cnst(imag_unit);
        if (id == "pi") return cnst(3.14159265358979323846);
        throw ParseError("unknown identifier '" + id + "'");
      }
      throw ParseError("unexpected '" + std::string(1, c) + "'");
    }
    static P var(int a) {
      Node n(Op::variable);
      n.var = a;
      return std::make_shared<Node>(n);
    }
  };

  P node_;
};

}  // namespace delsarte
