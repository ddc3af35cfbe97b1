#include "linkspec/twist.hpp"

#include "linkspec/error.hpp"
#include "linkspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace linkspec {

namespace {

// C-infinity step: 1 for s <= 0, 0 for s >= 1.
double smooth_step_down(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - s));
  const double b = std::exp(-1.0 / s);
  return a / (a + b);
}

// Tabulated primitive with cubic Hermite interpolation; the derivative is known
// exactly, F'(r) = -2 pi r f_c(r).
class TwistField final : public Field {
 public:
  TwistField(TwistProfile p, double level) : p_(std::move(p)), level_(level) {
    const double R = p_.radius;
    kink_ = find_kink();
    // node sets on [0, kink] and [kink, R] so the kink is a node
    auto add_nodes = [&](double a, double b, int n) {
      for (int i = 0; i < n; ++i) nodes_.push_back(a + (b - a) * i / n);
    };
    if (kink_ > 0.0 && kink_ < R) {
      const int n1 = std::max(64, static_cast<int>(4096 * kink_ / R));
      add_nodes(0.0, kink_, n1);
      add_nodes(kink_, R, std::max(64, 4096 - n1));
    } else {
      add_nodes(0.0, R, 4096);
    }
    nodes_.push_back(R);
    const std::size_t n = nodes_.size();
    F_.assign(n, 0.0);
    dF_.assign(n, 0.0);
    const GaussRule& rule = gauss_legendre(16);
    for (std::size_t i = n - 1; i-- > 0;) {
      const double a = nodes_[i], b = nodes_[i + 1];
      double s = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
        s += rule.weights[q] * x * fc(x);
      }
      F_[i] = F_[i + 1] + std::numbers::pi * (b - a) * s;
    }
    for (std::size_t i = 0; i < n; ++i) dF_[i] = -2.0 * std::numbers::pi * nodes_[i] * fc(nodes_[i]);
  }

  double value(double, double r, double) const override { return eval(r); }
  Interval level_range(double, double r) const override { return Interval(eval(r)); }
  Interval enclose(double, const Interval& X) const override {
    // decreasing in r; pad by the interpolation error scale
    const double pad = 1e-12 * (1.0 + F_.front());
    return {eval(X.hi) - pad, eval(X.lo) + pad};
  }
  double theta_mean(double, double r) const override { return eval(r); }
  bool autonomous() const override { return true; }
  bool theta_independent() const override { return true; }
  std::vector<double> breakpoints() const override {
    std::vector<double> b{p_.cut_lo * p_.radius, p_.cut_hi * p_.radius};
    if (kink_ > 0.0 && kink_ < p_.radius) b.push_back(kink_);
    std::sort(b.begin(), b.end());
    return b;
  }

 private:
  double fc(double r) const { return r <= 0.0 ? level_ : std::min(p_.value(r), level_); }

  // Largest r with f(r) >= level (f decreasing), or 0 if none.
  double find_kink() const {
    const double R = p_.radius;
    if (p_.value(1e-300 + R * 1e-12) < level_) return 0.0;
    double lo = R * 1e-12, hi = p_.cut_hi * R;
    if (p_.value(hi) >= level_) return hi;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (lo + hi);
      (p_.value(m) >= level_ ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
  }

  double eval(double r) const {
    const double R = p_.radius;
    if (r >= R) return 0.0;
    if (r <= 0.0) return F_.front();
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    i = std::min(i, nodes_.size() - 2);
    const double a = nodes_[i], b = nodes_[i + 1];
    const double h = b - a;
    const double s = (r - a) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * F_[i] + h10 * h * dF_[i] + h01 * F_[i + 1] + h11 * h * dF_[i + 1];
  }

  TwistProfile p_;
  double level_;
  double kink_ = 0.0;
  std::vector<double> nodes_, F_, dF_;
};

}  // namespace

double TwistProfile::raw(double r) const { return f.eval(Point{0.0, 0.0, r}); }

double TwistProfile::value(double r) const {
  const double a = cut_lo * radius, b = cut_hi * radius;
  const double chi = smooth_step_down((r - a) / (b - a));
  if (chi == 0.0) return 0.0;
  return chi * raw(r);
}

TwistProfile make_twist_profile(const Expr& f, double radius) {
  if (!(radius > 0.0)) throw ValidationError("twist radius must be positive");
  if (f.depends_on(Var::t) || f.depends_on(Var::z)) throw ValidationError("twist profile must be a function of r only");
  TwistProfile p;
  p.f = f;
  p.radius = radius;
  // decreasing and non-negative on a log-spaced sample of (0, R]
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) {
    const double r = radius * std::pow(10.0, -8.0 + 8.0 * i / 2000.0);
    const double v = p.value(r);
    if (!std::isfinite(v)) throw ValidationError("twist profile is not finite at r = " + std::to_string(r));
    if (v < 0.0) throw ValidationError("twist profile must be non-negative");
    if (v > prev * (1.0 + 1e-12) + 1e-300) throw ValidationError("twist profile must be decreasing in r");
    prev = v;
  }
  // slope of log(r^3 f) between r = 1e-7 R and 1e-6 R; divergence iff <= -1
  const double r1 = 1e-7 * radius, r2 = 1e-6 * radius;
  const double g1 = r1 * r1 * r1 * p.raw(r1), g2 = r2 * r2 * r2 * p.raw(r2);
  if (g1 > 0.0 && g2 > 0.0) {
    const double slope = (std::log(g2) - std::log(g1)) / (std::log(r2) - std::log(r1));
    p.divergent = slope <= -1.0 + 1e-3;
  }
  return p;
}

std::vector<double> truncation_levels(const TwistProfile& p, int count, TruncationRule rule) {
  std::vector<double> c;
  for (int i = 1; i <= count; ++i)
    c.push_back(rule == TruncationRule::linear ? static_cast<double>(i) : p.raw(p.radius / i));
  return c;
}

Hamiltonian twist_hamiltonian(const TwistProfile& p, double level) {
  if (level <= 0.0) return Hamiltonian::radial(Expr(0.0), p.radius).with_support({0.0, 0.0});
  Hamiltonian h = Hamiltonian::from_field(HamKind::radial, Model::disc, p.radius, std::make_shared<TwistField>(p, level));
  return h.with_support({0.0, p.cut_hi * p.radius});
}

std::vector<Hamiltonian> twist_truncations(const TwistProfile& p, int count, TruncationRule rule) {
  if (!p.divergent) throw ValidationError("twist profile has finite int r^3 f dr; truncations would stay bounded");
  std::vector<Hamiltonian> out;
  for (double c : truncation_levels(p, count, rule)) out.push_back(twist_hamiltonian(p, c));
  return out;
}

}  // namespace linkspec
