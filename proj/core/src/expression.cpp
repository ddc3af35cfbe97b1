#include "linkspec/expression.hpp"

#include "linkspec/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

namespace linkspec {

enum class Op { constant, var, neg, add, sub, mul, div, pow, call };
enum class Fn { sin, cos, exp, log, sqrt, abs, tanh, step, min, max, pow };

struct ExprNode {
  Op op = Op::constant;
  double value = 0.0;
  Var var = Var::t;
  Fn fn = Fn::sin;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr constant_node(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::constant;
  n->value = v;
  return n;
}

NodePtr var_node(Var v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::var;
  n->var = v;
  return n;
}

NodePtr op_node(Op op, std::vector<NodePtr> args) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

NodePtr call_node(Fn fn, std::vector<NodePtr> args) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::call;
  n->fn = fn;
  n->args = std::move(args);
  return n;
}

struct FnInfo {
  const char* name;
  Fn fn;
  int arity;
};

constexpr FnInfo kFunctions[] = {
    {"sin", Fn::sin, 1},   {"cos", Fn::cos, 1},   {"exp", Fn::exp, 1},   {"log", Fn::log, 1},
    {"sqrt", Fn::sqrt, 1}, {"abs", Fn::abs, 1},   {"tanh", Fn::tanh, 1}, {"step", Fn::step, 1},
    {"min", Fn::min, 2},   {"max", Fn::max, 2},   {"pow", Fn::pow, 2},
};

const char* fn_name(Fn fn) {
  for (const auto& f : kFunctions)
    if (f.fn == fn) return f.name;
  return "?";
}

double eval_node(const ExprNode& n, const Point& p) {
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::var:
      return n.var == Var::t ? p.t : n.var == Var::z ? p.z : p.r;
    case Op::neg:
      return -eval_node(*n.args[0], p);
    case Op::add:
      return eval_node(*n.args[0], p) + eval_node(*n.args[1], p);
    case Op::sub:
      return eval_node(*n.args[0], p) - eval_node(*n.args[1], p);
    case Op::mul:
      return eval_node(*n.args[0], p) * eval_node(*n.args[1], p);
    case Op::div:
      return eval_node(*n.args[0], p) / eval_node(*n.args[1], p);
    case Op::pow:
      return std::pow(eval_node(*n.args[0], p), eval_node(*n.args[1], p));
    case Op::call: {
      const double a = eval_node(*n.args[0], p);
      switch (n.fn) {
        case Fn::sin: return std::sin(a);
        case Fn::cos: return std::cos(a);
        case Fn::exp: return std::exp(a);
        case Fn::log: return std::log(a);
        case Fn::sqrt: return std::sqrt(a);
        case Fn::abs: return std::abs(a);
        case Fn::tanh: return std::tanh(a);
        case Fn::step: return a >= 0.0 ? 1.0 : 0.0;
        case Fn::min: return std::min(a, eval_node(*n.args[1], p));
        case Fn::max: return std::max(a, eval_node(*n.args[1], p));
        case Fn::pow: return std::pow(a, eval_node(*n.args[1], p));
      }
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Interval eval_node(const ExprNode& n, const Box& b) {
  switch (n.op) {
    case Op::constant:
      return Interval(n.value);
    case Op::var:
      return n.var == Var::t ? b.t : n.var == Var::z ? b.z : b.r;
    case Op::neg:
      return -eval_node(*n.args[0], b);
    case Op::add:
      return eval_node(*n.args[0], b) + eval_node(*n.args[1], b);
    case Op::sub:
      return eval_node(*n.args[0], b) - eval_node(*n.args[1], b);
    case Op::mul:
      // x*x is common enough to be worth the tighter square enclosure
      if (n.args[0] == n.args[1]) return pow_int(eval_node(*n.args[0], b), 2);
      return eval_node(*n.args[0], b) * eval_node(*n.args[1], b);
    case Op::div:
      return eval_node(*n.args[0], b) / eval_node(*n.args[1], b);
    case Op::pow:
      return pow(eval_node(*n.args[0], b), eval_node(*n.args[1], b));
    case Op::call: {
      const Interval a = eval_node(*n.args[0], b);
      switch (n.fn) {
        case Fn::sin: return sin(a);
        case Fn::cos: return cos(a);
        case Fn::exp: return exp(a);
        case Fn::log: return log(a);
        case Fn::sqrt: return sqrt(a);
        case Fn::abs: return abs(a);
        case Fn::tanh: return tanh(a);
        case Fn::step: return step(a);
        case Fn::min: return min(a, eval_node(*n.args[1], b));
        case Fn::max: return max(a, eval_node(*n.args[1], b));
        case Fn::pow: return pow(a, eval_node(*n.args[1], b));
      }
    }
  }
  return Interval::entire();
}

struct Dual {
  Interval v;
  Interval d;
};

bool is_zero(const Interval& x) { return x.lo == 0.0 && x.hi == 0.0; }

// c * d with d == 0 kept exact even when c is unbounded
Interval times_d(const Interval& c, const Interval& d) { return is_zero(d) ? Interval(0.0) : c * d; }

Interval finite_or_entire(const Interval& x) {
  if (x.is_empty() || !std::isfinite(x.lo) || !std::isfinite(x.hi)) return Interval::entire();
  return x;
}

Dual pow_dual(const Dual& a, const Dual& b) {
  const Interval v = pow(a.v, b.v);
  if (!is_zero(b.d) || !b.v.is_point()) {
    if (a.v.lo <= 0.0) return {v, Interval::entire()};
    // d(a^b) = a^b (b' log a + b a'/a)
    return {v, v * (times_d(log(a.v), b.d) + times_d(b.v / a.v, a.d))};
  }
  const double e = b.v.lo;
  if (e == 0.0) return {v, Interval(0.0)};
  if (e == std::floor(e) && std::abs(e) < 1e6) {
    const long long n = static_cast<long long>(e);
    if (n == 1) return {v, a.d};
    return {v, times_d(Interval(e) * pow_int(a.v, n - 1), a.d)};
  }
  if (a.v.lo <= 0.0 && e < 1.0) return {v, Interval::entire()};
  return {v, times_d(Interval(e) * pow(a.v, Interval(e - 1.0)), a.d)};
}

Dual eval_dual(const ExprNode& n, const Box& b, Var wrt) {
  switch (n.op) {
    case Op::constant:
      return {Interval(n.value), Interval(0.0)};
    case Op::var: {
      const Interval x = n.var == Var::t ? b.t : n.var == Var::z ? b.z : b.r;
      return {x, Interval(n.var == wrt ? 1.0 : 0.0)};
    }
    case Op::neg: {
      const Dual a = eval_dual(*n.args[0], b, wrt);
      return {-a.v, -a.d};
    }
    case Op::add: {
      const Dual a = eval_dual(*n.args[0], b, wrt), c = eval_dual(*n.args[1], b, wrt);
      return {a.v + c.v, a.d + c.d};
    }
    case Op::sub: {
      const Dual a = eval_dual(*n.args[0], b, wrt), c = eval_dual(*n.args[1], b, wrt);
      return {a.v - c.v, a.d - c.d};
    }
    case Op::mul: {
      const Dual a = eval_dual(*n.args[0], b, wrt);
      if (n.args[0] == n.args[1]) return {pow_int(a.v, 2), times_d(Interval(2.0) * a.v, a.d)};
      const Dual c = eval_dual(*n.args[1], b, wrt);
      return {a.v * c.v, times_d(c.v, a.d) + times_d(a.v, c.d)};
    }
    case Op::div: {
      const Dual a = eval_dual(*n.args[0], b, wrt), c = eval_dual(*n.args[1], b, wrt);
      const Interval v = a.v / c.v;
      return {v, (a.d - times_d(v, c.d)) / c.v};
    }
    case Op::pow:
      return pow_dual(eval_dual(*n.args[0], b, wrt), eval_dual(*n.args[1], b, wrt));
    case Op::call: {
      const Dual a = eval_dual(*n.args[0], b, wrt);
      switch (n.fn) {
        case Fn::sin: return {sin(a.v), times_d(cos(a.v), a.d)};
        case Fn::cos: return {cos(a.v), times_d(-sin(a.v), a.d)};
        case Fn::exp: {
          const Interval v = exp(a.v);
          return {v, times_d(v, a.d)};
        }
        case Fn::log: return {log(a.v), a.d / a.v};
        case Fn::sqrt: {
          const Interval v = sqrt(a.v);
          if (is_zero(a.d)) return {v, Interval(0.0)};
          return {v, a.v.lo > 0.0 ? a.d / (Interval(2.0) * v) : Interval::entire()};
        }
        case Fn::tanh: {
          const Interval v = tanh(a.v);
          return {v, times_d(Interval(1.0) - pow_int(v, 2), a.d)};
        }
        case Fn::abs: {
          const Interval s = a.v.lo > 0.0 ? Interval(1.0) : a.v.hi < 0.0 ? Interval(-1.0) : Interval(-1.0, 1.0);
          return {abs(a.v), times_d(s, a.d)};
        }
        case Fn::step:
          if (a.v.lo >= 0.0 || a.v.hi < 0.0 || is_zero(a.d)) return {step(a.v), Interval(0.0)};
          return {step(a.v), Interval::entire()};
        case Fn::min:
        case Fn::max: {
          const Dual c = eval_dual(*n.args[1], b, wrt);
          const bool mn = n.fn == Fn::min;
          const Interval v = mn ? min(a.v, c.v) : max(a.v, c.v);
          // Clarke generalized gradient: the hull where the branches overlap
          if (a.v.hi < c.v.lo) return {v, mn ? a.d : c.d};
          if (c.v.hi < a.v.lo) return {v, mn ? c.d : a.d};
          return {v, hull(a.d, c.d)};
        }
        case Fn::pow:
          return pow_dual(a, eval_dual(*n.args[1], b, wrt));
      }
    }
  }
  return {Interval::entire(), Interval::entire()};
}

bool depends(const ExprNode& n, Var v) {
  if (n.op == Op::var) return n.var == v;
  for (const auto& a : n.args)
    if (depends(*a, v)) return true;
  return false;
}

std::string format_number(double v) {
  char buf[40];
  // shortest representation that parses back to the same double
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const ExprNode& n, std::string& out) {
  auto binary = [&](const char* sym) {
    out += '(';
    print(*n.args[0], out);
    out += sym;
    print(*n.args[1], out);
    out += ')';
  };
  switch (n.op) {
    case Op::constant:
      if (n.value < 0.0 || std::signbit(n.value)) {
        out += "(" + format_number(n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      return;
    case Op::var:
      out += n.var == Var::t ? 't' : n.var == Var::z ? 'z' : 'r';
      return;
    case Op::neg:
      out += "(-";
      print(*n.args[0], out);
      out += ')';
      return;
    case Op::add: binary(" + "); return;
    case Op::sub: binary(" - "); return;
    case Op::mul: binary("*"); return;
    case Op::div: binary("/"); return;
    case Op::pow: binary("^"); return;
    case Op::call:
      out += fn_name(n.fn);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
      }
      out += ')';
      return;
  }
}

NodePtr reverse_time(const NodePtr& n) {
  if (n->op == Op::var && n->var == Var::t)
    return op_node(Op::sub, {constant_node(1.0), var_node(Var::t)});
  // undo a previous reversal so that reversing twice is the identity
  if (n->op == Op::sub && n->args[0]->op == Op::constant && n->args[0]->value == 1.0 &&
      n->args[1]->op == Op::var && n->args[1]->var == Var::t)
    return n->args[1];
  if (n->args.empty()) return n;
  auto copy = std::make_shared<ExprNode>(*n);
  for (auto& a : copy->args) a = reverse_time(a);
  return copy;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression: " + msg + " at offset " + std::to_string(pos_) + " in \"" +
                     std::string(s_) + "\"");
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

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = op_node(Op::add, {lhs, term()});
      else if (accept('-')) lhs = op_node(Op::sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) lhs = op_node(Op::mul, {lhs, unary()});
      else if (accept('/')) lhs = op_node(Op::div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto a = unary();
      if (a->op == Op::constant) return constant_node(-a->value);
      return op_node(Op::neg, {a});
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return op_node(Op::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double v = 0.0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return constant_node(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string_view id = s_.substr(start, pos_ - start);
    if (id == "t") return var_node(Var::t);
    if (id == "z") return var_node(Var::z);
    if (id == "r") return var_node(Var::r);
    if (id == "pi") return constant_node(std::numbers::pi);
    if (id == "e") return constant_node(std::numbers::e);
    for (const auto& f : kFunctions) {
      if (id != f.name) continue;
      if (!accept('(')) fail("expected '(' after " + std::string(id));
      std::vector<NodePtr> args{expr()};
      while (accept(',')) args.push_back(expr());
      if (!accept(')')) fail("expected ')'");
      if (static_cast<int>(args.size()) != f.arity)
        fail(std::string(id) + " takes " + std::to_string(f.arity) + " argument(s)");
      return call_node(f.fn, std::move(args));
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(id) + "'");
  }
};

}  // namespace

Expr::Expr() : node_(constant_node(0.0)) {}
Expr::Expr(double constant) : node_(constant_node(constant)) {}

Expr Expr::variable(Var v) { return Expr(var_node(v)); }
Expr Expr::parse(std::string_view text) { return Expr(Parser(text).parse()); }

double Expr::eval(const Point& p) const { return eval_node(*node_, p); }
Interval Expr::eval(const Box& b) const { return eval_node(*node_, b); }

Interval Expr::eval_slope(const Box& b, Var v) const { return finite_or_entire(eval_dual(*node_, b, v).d); }

bool Expr::depends_on(Var v) const { return depends(*node_, v); }
bool Expr::is_constant() const {
  return !depends_on(Var::t) && !depends_on(Var::z) && !depends_on(Var::r);
}
double Expr::constant_value() const { return eval(Point{}); }

std::string Expr::to_string() const {
  std::string out;
  print(*node_, out);
  return out;
}

Expr Expr::time_reversed() const { return Expr(reverse_time(node_)); }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.node_->op == Op::constant && a.node_->value == 0.0) return b;
  if (b.node_->op == Op::constant && b.node_->value == 0.0) return a;
  if (a.node_->op == Op::constant && b.node_->op == Op::constant)
    return Expr(a.node_->value + b.node_->value);
  return Expr(op_node(Op::add, {a.node_, b.node_}));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.node_->op == Op::constant && b.node_->value == 0.0) return a;
  if (a.node_->op == Op::constant && b.node_->op == Op::constant)
    return Expr(a.node_->value - b.node_->value);
  return Expr(op_node(Op::sub, {a.node_, b.node_}));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.node_->op == Op::constant && a.node_->value == 1.0) return b;
  if (b.node_->op == Op::constant && b.node_->value == 1.0) return a;
  if (a.node_->op == Op::constant && b.node_->op == Op::constant)
    return Expr(a.node_->value * b.node_->value);
  return Expr(op_node(Op::mul, {a.node_, b.node_}));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.node_->op == Op::constant && b.node_->value == 1.0) return a;
  return Expr(op_node(Op::div, {a.node_, b.node_}));
}

Expr operator-(const Expr& a) {
  if (a.node_->op == Op::constant) return Expr(-a.node_->value);
  if (a.node_->op == Op::neg) return Expr(a.node_->args[0]);
  return Expr(op_node(Op::neg, {a.node_}));
}

}  // namespace linkspec
