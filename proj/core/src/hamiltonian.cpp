#include "linkspec/hamiltonian.hpp"

#include "linkspec/error.hpp"
#include "linkspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace linkspec {

const char* to_string(HamKind k) {
  switch (k) {
    case HamKind::z_profile: return "z_profile";
    case HamKind::radial: return "radial";
    case HamKind::grid: return "grid";
  }
  return "?";
}

const char* to_string(Model m) { return m == Model::sphere ? "sphere" : "disc"; }

namespace {

class ExprField final : public Field {
 public:
  ExprField(Expr e, Var x) : e_(std::move(e)), x_(x), autonomous_(!e_.depends_on(Var::t)) {}

  double value(double t, double x, double) const override { return e_.eval(point(t, x)); }
  Interval level_range(double t, double x) const override { return Interval(value(t, x, 0.0)); }
  Interval enclose(double t, const Interval& X) const override {
    Box b;
    b.t = Interval(t);
    (x_ == Var::z ? b.z : b.r) = X;
    return e_.eval(b);
  }
  Interval slope(double t, const Interval& X) const override {
    Box b;
    b.t = Interval(t);
    (x_ == Var::z ? b.z : b.r) = X;
    return e_.eval_slope(b, x_);
  }
  double theta_mean(double t, double x) const override { return value(t, x, 0.0); }
  bool autonomous() const override { return autonomous_; }
  bool theta_independent() const override { return true; }

 private:
  Point point(double t, double x) const {
    Point p;
    p.t = t;
    (x_ == Var::z ? p.z : p.r) = x;
    return p;
  }
  Expr e_;
  Var x_;
  bool autonomous_;
};

class GridField final : public Field {
 public:
  explicit GridField(GridData g) : g_(std::move(g)) {
    if (g_.nx < 2 || g_.ntheta < 2) throw ValidationError("grid needs at least 2 samples in each direction");
    if (static_cast<long>(g_.values.size()) != static_cast<long>(g_.nx) * g_.ntheta)
      throw ValidationError("grid value count does not match nx * ntheta");
    if (!(g_.x_hi > g_.x_lo)) throw ValidationError("grid x range is empty");
    for (double v : g_.values)
      if (!std::isfinite(v)) throw ValidationError("grid contains a non-finite sample");
    row_mean_.resize(g_.nx);
    for (int i = 0; i < g_.nx; ++i) {
      double s = 0.0;
      for (int j = 0; j < g_.ntheta; ++j) s += at(i, j);
      row_mean_[i] = s / g_.ntheta;
    }
  }

  double value(double, double x, double theta) const override {
    const auto [i, a] = locate(x);
    const double u = (theta - std::floor(theta)) * g_.ntheta;
    int j = static_cast<int>(std::floor(u));
    double b = u - j;
    if (j >= g_.ntheta) j = 0, b = 0.0;
    const int j1 = (j + 1) % g_.ntheta;
    const double lo = (1 - b) * at(i, j) + b * at(i, j1);
    const double hi = (1 - b) * at(i + 1, j) + b * at(i + 1, j1);
    return (1 - a) * lo + a * hi;
  }

  // Piecewise linear in theta, so the extreme values sit on lattice columns.
  Interval level_range(double, double x) const override {
    const auto [i, a] = locate(x);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int j = 0; j < g_.ntheta; ++j) {
      const double v = (1 - a) * at(i, j) + a * at(i + 1, j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {lo, hi};
  }

  Interval enclose(double t, const Interval& X) const override {
    const double a = std::clamp(X.lo, g_.x_lo, g_.x_hi);
    const double b = std::clamp(X.hi, g_.x_lo, g_.x_hi);
    Interval r = hull(level_range(t, a), level_range(t, b));
    for (int i = 0; i < g_.nx; ++i) {
      const double xi = node(i);
      if (xi > a && xi < b) r = hull(r, level_range(t, xi));
    }
    return r;
  }

  double theta_mean(double, double x) const override {
    const auto [i, a] = locate(x);
    return (1 - a) * row_mean_[i] + a * row_mean_[i + 1];
  }
  bool autonomous() const override { return true; }
  bool theta_independent() const override { return false; }
  std::vector<double> breakpoints() const override {
    std::vector<double> b;
    for (int i = 0; i < g_.nx; ++i) b.push_back(node(i));
    return b;
  }

 private:
  double at(int i, int j) const { return g_.values[static_cast<std::size_t>(i) * g_.ntheta + j]; }
  double node(int i) const { return g_.x_lo + (g_.x_hi - g_.x_lo) * i / (g_.nx - 1); }
  std::pair<int, double> locate(double x) const {
    const double f = (std::clamp(x, g_.x_lo, g_.x_hi) - g_.x_lo) / (g_.x_hi - g_.x_lo) * (g_.nx - 1);
    int i = std::min(static_cast<int>(std::floor(f)), g_.nx - 2);
    return {i, f - i};
  }
  GridData g_;
  std::vector<double> row_mean_;
};

std::vector<double> merge_breaks(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// Dense theta scan; used only when two theta-dependent fields are combined.
Interval scan_level(const Field& f, double t, double x) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int j = 0; j < 1024; ++j) {
    const double v = f.value(t, x, j / 1024.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

class SumField final : public Field {
 public:
  SumField(FieldPtr a, FieldPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  double value(double t, double x, double th) const override { return a_->value(t, x, th) + b_->value(t, x, th); }
  Interval level_range(double t, double x) const override {
    if (a_->theta_independent() || b_->theta_independent())
      return a_->level_range(t, x) + b_->level_range(t, x);
    return scan_level(*this, t, x);
  }
  Interval enclose(double t, const Interval& X) const override { return a_->enclose(t, X) + b_->enclose(t, X); }
  Interval slope(double t, const Interval& X) const override { return a_->slope(t, X) + b_->slope(t, X); }
  double theta_mean(double t, double x) const override { return a_->theta_mean(t, x) + b_->theta_mean(t, x); }
  bool autonomous() const override { return a_->autonomous() && b_->autonomous(); }
  bool theta_independent() const override { return a_->theta_independent() && b_->theta_independent(); }
  std::vector<double> breakpoints() const override { return merge_breaks(a_->breakpoints(), b_->breakpoints()); }

 private:
  FieldPtr a_, b_;
};

class ScaledField final : public Field {
 public:
  ScaledField(double c, FieldPtr a) : c_(c), a_(std::move(a)) {}
  double value(double t, double x, double th) const override { return c_ * a_->value(t, x, th); }
  Interval level_range(double t, double x) const override { return Interval(c_) * a_->level_range(t, x); }
  Interval enclose(double t, const Interval& X) const override { return Interval(c_) * a_->enclose(t, X); }
  Interval slope(double t, const Interval& X) const override { return Interval(c_) * a_->slope(t, X); }
  double theta_mean(double t, double x) const override { return c_ * a_->theta_mean(t, x); }
  bool autonomous() const override { return a_->autonomous(); }
  bool theta_independent() const override { return a_->theta_independent(); }
  std::vector<double> breakpoints() const override { return a_->breakpoints(); }
  double factor() const { return c_; }
  const FieldPtr& inner() const { return a_; }

 private:
  double c_;
  FieldPtr a_;
};

class TimeReversedField final : public Field {
 public:
  explicit TimeReversedField(FieldPtr a) : a_(std::move(a)) {}
  double value(double t, double x, double th) const override { return a_->value(1.0 - t, x, th); }
  Interval level_range(double t, double x) const override { return a_->level_range(1.0 - t, x); }
  Interval enclose(double t, const Interval& X) const override { return a_->enclose(1.0 - t, X); }
  Interval slope(double t, const Interval& X) const override { return a_->slope(1.0 - t, X); }
  double theta_mean(double t, double x) const override { return a_->theta_mean(1.0 - t, x); }
  bool autonomous() const override { return a_->autonomous(); }
  bool theta_independent() const override { return a_->theta_independent(); }
  std::vector<double> breakpoints() const override { return a_->breakpoints(); }
  const FieldPtr& inner() const { return a_; }

 private:
  FieldPtr a_;
};

// F'(t, x, theta + t * rate(x)): pull-back by the inverse flow of an
// autonomous level-preserving H.
class RotatedField final : public Field {
 public:
  RotatedField(FieldPtr base, FieldPtr flow, Model model) : base_(std::move(base)), flow_(std::move(flow)), model_(model) {}
  double value(double t, double x, double th) const override { return base_->value(t, x, th + t * rate(x)); }
  Interval level_range(double t, double x) const override { return base_->level_range(t, x); }
  Interval enclose(double t, const Interval& X) const override { return base_->enclose(t, X); }
  double theta_mean(double t, double x) const override { return base_->theta_mean(t, x); }
  bool autonomous() const override { return false; }
  bool theta_independent() const override { return false; }
  std::vector<double> breakpoints() const override { return base_->breakpoints(); }

 private:
  double rate(double x) const {
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    auto f = [&](double y) { return flow_->value(0.0, y, 0.0); };
    const double d = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    if (model_ == Model::sphere) return d;
    return x > 0.0 ? d / (2.0 * std::numbers::pi * x) : 0.0;
  }
  FieldPtr base_, flow_;
  Model model_;
};

class CapField final : public Field {
 public:
  CapField(FieldPtr radial, double radius) : f_(std::move(radial)), cap_(std::numbers::pi * radius * radius) {}
  double value(double t, double z, double th) const override {
    return z < cap_ ? f_->value(t, r_of(z), th) : 0.0;
  }
  Interval level_range(double t, double z) const override {
    return z < cap_ ? f_->level_range(t, r_of(z)) : Interval(0.0);
  }
  Interval enclose(double t, const Interval& Z) const override {
    std::optional<Interval> out;
    if (Z.lo < cap_) {
      const Interval R(r_of(std::max(Z.lo, 0.0)), r_of(std::min(Z.hi, cap_)));
      out = f_->enclose(t, R);
    }
    if (Z.hi >= cap_) out = out ? hull(*out, Interval(0.0)) : Interval(0.0);
    return *out;
  }
  double theta_mean(double t, double z) const override { return z < cap_ ? f_->theta_mean(t, r_of(z)) : 0.0; }
  bool autonomous() const override { return f_->autonomous(); }
  bool theta_independent() const override { return f_->theta_independent(); }
  std::vector<double> breakpoints() const override {
    std::vector<double> b{cap_};
    for (double r : f_->breakpoints()) b.push_back(std::numbers::pi * r * r);
    std::sort(b.begin(), b.end());
    return b;
  }

 private:
  static double r_of(double z) { return std::sqrt(std::max(z, 0.0) / std::numbers::pi); }
  FieldPtr f_;
  double cap_;
};

double shift_integral(const ShiftTerm& s, Model model, double radius) {
  if (s.kind == ShiftTerm::Kind::expr) {
    if (!s.s.depends_on(Var::t)) return s.s.constant_value();
    const auto r = integrate_adaptive([&](double t) { return s.s.eval(Point{t, 0, 0}); }, 0.0, 1.0);
    if (!r.converged) throw NumericError("shift term quadrature did not converge");
    return r.value;
  }
  const double area = model == Model::sphere ? 1.0 : std::numbers::pi * radius * radius;
  return -s.coeff * (integrate_field(s.mean_of, model, radius) / area);
}

double field_spatial(const Field& f, Model model, double radius, double t, double rel_tol) {
  const double hi = model == Model::sphere ? 1.0 : radius;
  std::vector<double> cuts{0.0};
  for (double b : f.breakpoints())
    if (b > 0.0 && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::vector<double> parts;
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    QuadratureResult r;
    if (model == Model::sphere) {
      r = integrate_adaptive([&](double x) { return f.theta_mean(t, x); }, cuts[p], cuts[p + 1], opts);
    } else {
      r = integrate_adaptive([&](double x) { return 2.0 * std::numbers::pi * x * f.theta_mean(t, x); }, cuts[p],
                             cuts[p + 1], opts);
    }
    if (!r.converged) throw NumericError("spatial quadrature did not reach tolerance");
    parts.push_back(r.value);
  }
  double s = 0.0;
  for (double v : parts) s += v;
  return s;
}

}  // namespace

FieldPtr expr_field(const Expr& e, Var x) { return std::make_shared<ExprField>(e, x); }
FieldPtr grid_field(GridData g) { return std::make_shared<GridField>(std::move(g)); }
FieldPtr sum_field(FieldPtr a, FieldPtr b) { return std::make_shared<SumField>(std::move(a), std::move(b)); }

FieldPtr scaled_field(double c, FieldPtr a) {
  if (c == 1.0) return a;
  if (auto s = std::dynamic_pointer_cast<const ScaledField>(a); s && c == -1.0 && s->factor() == -1.0)
    return s->inner();
  return std::make_shared<ScaledField>(c, std::move(a));
}

FieldPtr time_reversed_field(FieldPtr a) {
  if (a->autonomous()) return a;
  if (auto r = std::dynamic_pointer_cast<const TimeReversedField>(a)) return r->inner();
  return std::make_shared<TimeReversedField>(std::move(a));
}

Hamiltonian::Hamiltonian() : field_(expr_field(Expr(0.0), Var::z)) {}

Hamiltonian Hamiltonian::z_profile(const Expr& e) {
  if (e.depends_on(Var::r)) throw ValidationError("z_profile Hamiltonian may only use t and z");
  return from_field(HamKind::z_profile, Model::sphere, 1.0, expr_field(e, Var::z));
}

Hamiltonian Hamiltonian::radial(const Expr& e, double radius) {
  if (e.depends_on(Var::z)) throw ValidationError("radial Hamiltonian may only use t and r");
  return from_field(HamKind::radial, Model::disc, radius, expr_field(e, Var::r));
}

Hamiltonian Hamiltonian::grid(Model model, GridData g, double radius) {
  return from_field(HamKind::grid, model, radius, grid_field(std::move(g)));
}

Hamiltonian Hamiltonian::from_field(HamKind kind, Model model, double radius, FieldPtr field) {
  if (!(radius > 0.0)) throw ValidationError("disc radius must be positive");
  if (!field) throw ValidationError("null field");
  Hamiltonian h;
  h.kind_ = kind;
  h.model_ = model;
  h.radius_ = model == Model::sphere ? 1.0 : radius;
  h.field_ = std::move(field);
  return h;
}

double Hamiltonian::area() const { return model_ == Model::sphere ? 1.0 : std::numbers::pi * radius_ * radius_; }
Interval Hamiltonian::domain() const { return model_ == Model::sphere ? Interval(0.0, 1.0) : Interval(0.0, radius_); }

Hamiltonian Hamiltonian::with_support(Band b) const {
  if (!(b.lo <= b.hi)) throw ValidationError("support band is empty");
  Hamiltonian h = *this;
  h.support_ = b;
  return h;
}

Hamiltonian Hamiltonian::with_shifts(std::vector<ShiftTerm> s) const {
  Hamiltonian h = *this;
  h.shifts_ = std::move(s);
  h.parts_.reset();
  return h;
}

double Hamiltonian::operator()(double t, double x, double theta) const {
  return field_->value(t, x, theta) + shift_at(t);
}

double Hamiltonian::shift_at(double t) const {
  double s = 0.0;
  for (const auto& term : shifts_) {
    if (term.kind == ShiftTerm::Kind::expr) {
      s += term.s.eval(Point{t, 0, 0});
    } else {
      s -= term.coeff * field_spatial(*term.mean_of, model_, radius_, t, 1e-11) / area();
    }
  }
  return s;
}

bool Hamiltonian::autonomous() const {
  if (!field_->autonomous()) return false;
  for (const auto& term : shifts_) {
    if (term.kind == ShiftTerm::Kind::expr && term.s.depends_on(Var::t)) return false;
    if (term.kind == ShiftTerm::Kind::minus_mean && !term.mean_of->autonomous()) return false;
  }
  return true;
}

double integrate_field(const FieldPtr& f, Model model, double radius, double rel_tol) {
  if (f->autonomous()) return field_spatial(*f, model, radius, 0.0, rel_tol);
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  const auto r = integrate_adaptive([&](double t) { return field_spatial(*f, model, radius, t, rel_tol * 0.1); }, 0.0,
                                    1.0, opts);
  if (!r.converged) throw NumericError("time quadrature did not reach tolerance");
  return r.value;
}

double spatial_integral(const Hamiltonian& h, double t) {
  return field_spatial(*h.field(), h.model(), h.radius(), t, 1e-11) + h.shift_at(t) * h.area();
}

double spatial_mean(const Hamiltonian& h, double t) { return spatial_integral(h, t) / h.area(); }

double integrate(const Hamiltonian& h, double rel_tol) {
  double v = integrate_field(h.field(), h.model(), h.radius(), rel_tol);
  for (const auto& s : h.shifts()) v += shift_integral(s, h.model(), h.radius()) * h.area();
  return v;
}

Hamiltonian mean_normalize(const Hamiltonian& h) {
  ShiftTerm s;
  if (h.field()->autonomous()) {
    s.kind = ShiftTerm::Kind::expr;
    s.s = Expr(-field_spatial(*h.field(), h.model(), h.radius(), 0.0, 1e-13) / h.area());
  } else {
    s.kind = ShiftTerm::Kind::minus_mean;
    s.mean_of = h.field();
    s.coeff = 1.0;
  }
  return h.with_shifts({s});
}

std::pair<Interval, Interval> field_extrema(const Field& f, double t, const Interval& X, double tol) {
  struct Node {
    double lo, hi, bound;
  };
  auto sample = [&](double x) { return f.level_range(t, x); };
  // natural enclosure tightened by the centered form f(m) + f'(X) (X - m)
  auto enclose = [&](const Interval& Y) {
    const Interval nat = f.enclose(t, Y);
    if (Y.is_point()) return nat;
    const Interval d = f.slope(t, Y);
    if (!std::isfinite(d.lo) || !std::isfinite(d.hi)) return nat;
    const double m = Y.mid();
    const Interval c = f.level_range(t, m) + d * (Y - Interval(m));
    const Interval both = intersect(nat, c);
    return both.is_empty() ? nat : both;
  };

  auto run = [&](bool minimize) -> Interval {
    auto key = [&](const Interval& e) { return minimize ? e.lo : -e.hi; };
    auto value_key = [&](const Interval& s) { return minimize ? s.lo : -s.hi; };
    double best = std::min(value_key(sample(X.lo)), value_key(sample(X.hi)));
    if (X.lo == X.hi) {
      const double rig = key(f.enclose(t, X));
      return minimize ? Interval(rig, best) : Interval(-best, -rig);
    }
    auto cmp = [](const Node& a, const Node& b) { return a.bound > b.bound; };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> q(cmp);
    q.push({X.lo, X.hi, key(enclose(X))});
    int splits = 0;
    while (!q.empty()) {
      const Node n = q.top();
      if (n.bound >= best - tol * (1.0 + std::abs(best))) break;
      if (splits > 4000 || n.hi - n.lo < 1e-14 * (1.0 + std::abs(n.lo))) break;
      q.pop();
      ++splits;
      const double m = 0.5 * (n.lo + n.hi);
      best = std::min(best, value_key(sample(m)));
      q.push({n.lo, m, std::max(n.bound, key(enclose(Interval(n.lo, m))))});
      q.push({m, n.hi, std::max(n.bound, key(enclose(Interval(m, n.hi))))});
    }
    const double rigorous = q.empty() ? best : std::min(q.top().bound, best);
    return minimize ? Interval(rigorous, best) : Interval(-best, -rigorous);
  };
  return {run(true), run(false)};
}

Interval spatial_range(const Hamiltonian& h, double t) {
  const auto [mn, mx] = field_extrema(*h.field(), t, h.domain());
  const double s = h.shift_at(t);
  return {mn.hi + s, mx.lo + s};
}

double hofer_norm(const Hamiltonian& h) {
  auto osc = [&](double t) {
    const auto [mn, mx] = field_extrema(*h.field(), t, h.domain());
    return mx.lo - mn.hi;
  };
  if (h.field()->autonomous()) return osc(0.0);
  QuadratureOptions opts;
  opts.rel_tol = 1e-9;
  opts.max_depth = 16;
  const auto r = integrate_adaptive(osc, 0.0, 1.0, opts);
  return r.value;
}

namespace {

void require_same_model(const Hamiltonian& a, const Hamiltonian& b) {
  if (a.model() != b.model() || a.radius() != b.radius())
    throw ValidationError("Hamiltonians live on different models");
}

HamKind combined_kind(const Hamiltonian& a, const Hamiltonian& b) {
  if (a.kind() == HamKind::grid || b.kind() == HamKind::grid) return HamKind::grid;
  return a.kind();
}

ShiftTerm scaled_term(const ShiftTerm& s, double c) {
  ShiftTerm out = s;
  if (s.kind == ShiftTerm::Kind::expr) out.s = Expr(c) * s.s;
  else out.coeff = c * s.coeff;
  return out;
}

}  // namespace

Hamiltonian add(const Hamiltonian& a, const Hamiltonian& b) {
  require_same_model(a, b);
  Hamiltonian h = Hamiltonian::from_field(combined_kind(a, b), a.model(), a.radius(), sum_field(a.field(), b.field()));
  std::vector<ShiftTerm> s = a.shifts();
  s.insert(s.end(), b.shifts().begin(), b.shifts().end());
  h = h.with_shifts(std::move(s));
  if (a.support() && b.support())
    h = h.with_support({std::min(a.support()->lo, b.support()->lo), std::max(a.support()->hi, b.support()->hi)});
  return h;
}

Hamiltonian scale(const Hamiltonian& h, double c) {
  Hamiltonian out = Hamiltonian::from_field(h.kind(), h.model(), h.radius(), scaled_field(c, h.field()));
  std::vector<ShiftTerm> s;
  for (const auto& term : h.shifts()) s.push_back(scaled_term(term, c));
  out = out.with_shifts(std::move(s));
  if (h.support()) out = out.with_support(*h.support());
  return out;
}

Hamiltonian add_shift(const Hamiltonian& h, const Expr& s) {
  if (s.depends_on(Var::z) || s.depends_on(Var::r)) throw ValidationError("a shift may depend on t only");
  auto terms = h.shifts();
  ShiftTerm term;
  term.s = s;
  terms.push_back(term);
  Hamiltonian out = h.with_shifts(std::move(terms));
  return out;
}

Hamiltonian bar(const Hamiltonian& h) {
  Hamiltonian out =
      Hamiltonian::from_field(h.kind(), h.model(), h.radius(), scaled_field(-1.0, time_reversed_field(h.field())));
  std::vector<ShiftTerm> s;
  for (const auto& term : h.shifts()) {
    ShiftTerm r = term;
    if (term.kind == ShiftTerm::Kind::expr) {
      r.s = -term.s.time_reversed();
    } else {
      r.mean_of = time_reversed_field(term.mean_of);
      r.coeff = -term.coeff;
    }
    s.push_back(r);
  }
  out = out.with_shifts(std::move(s));
  if (h.support()) out = out.with_support(*h.support());
  return out;
}

Hamiltonian compose(const Hamiltonian& h, const Hamiltonian& hp) {
  require_same_model(h, hp);
  if (!h.field()->autonomous() || !h.field()->theta_independent())
    throw ValidationError("compose needs the first Hamiltonian to be autonomous and level-preserving");
  FieldPtr f = hp.field()->theta_independent()
                   ? sum_field(h.field(), hp.field())
                   : sum_field(h.field(), std::make_shared<RotatedField>(hp.field(), h.field(), h.model()));
  Hamiltonian out = Hamiltonian::from_field(combined_kind(h, hp), h.model(), h.radius(), f);
  std::vector<ShiftTerm> s = h.shifts();
  s.insert(s.end(), hp.shifts().begin(), hp.shifts().end());
  out = out.with_shifts(std::move(s));
  out.parts_ = std::make_shared<const std::pair<Hamiltonian, Hamiltonian>>(h, hp);
  return out;
}

Hamiltonian compose_power(const Hamiltonian& h, int n) {
  if (n < 1) throw ValidationError("compose_power needs n >= 1");
  // an autonomous flow preserves H, so its n-th iterate is generated by nH
  if (!h.field()->autonomous()) throw ValidationError("compose_power needs an autonomous Hamiltonian");
  return scale(h, static_cast<double>(n));
}

Hamiltonian embed_in_sphere_cap(const Hamiltonian& radial) {
  if (radial.model() != Model::disc) throw ValidationError("embed_in_sphere_cap expects a disc Hamiltonian");
  if (!radial.shifts().empty()) throw ValidationError("cannot embed a Hamiltonian with shift terms");
  const double R = radial.radius();
  if (std::numbers::pi * R * R > 1.0) throw ValidationError("disc area exceeds the sphere area");
  auto f = std::make_shared<CapField>(radial.field(), R);
  Hamiltonian out = Hamiltonian::from_field(radial.field()->theta_independent() ? HamKind::z_profile : HamKind::grid,
                                            Model::sphere, 1.0, f);
  Band b{0.0, std::numbers::pi * R * R};
  if (radial.support())
    b = {std::numbers::pi * radial.support()->lo * radial.support()->lo,
         std::numbers::pi * radial.support()->hi * radial.support()->hi};
  return out.with_support(b);
}

}  // namespace linkspec
