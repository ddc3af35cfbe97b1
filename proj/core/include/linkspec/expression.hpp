#pragma once

#include "linkspec/interval.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace linkspec {

// Variables understood by the expression language.
enum class Var { t, z, r };

struct Point {
  double t = 0.0;
  double z = 0.0;
  double r = 0.0;
};

struct Box {
  Interval t{0.0};
  Interval z{0.0};
  Interval r{0.0};
};

struct ExprNode;

// Immutable scalar expression in t, z, r. Cheap to copy (shared tree).
class Expr {
 public:
  Expr();  // the constant 0
  explicit Expr(double constant);

  static Expr variable(Var v);
  static Expr parse(std::string_view text);

  double eval(const Point& p) const;
  Interval eval(const Box& b) const;
  // Enclosure of the partial derivative in v over the box; entire() where the
  // expression is not Lipschitz (step, fractional powers through 0, ...).
  Interval eval_slope(const Box& b, Var v) const;

  bool depends_on(Var v) const;
  bool is_constant() const;
  // Defined only when is_constant().
  double constant_value() const;

  std::string to_string() const;

  // Substitutes t -> 1 - t.
  Expr time_reversed() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  const ExprNode& node() const { return *node_; }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

}  // namespace linkspec
