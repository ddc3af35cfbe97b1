#pragma once

#include "linkspec/expression.hpp"
#include "linkspec/interval.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace linkspec {

enum class HamKind { z_profile, radial, grid };
enum class Model { sphere, disc };

const char* to_string(HamKind k);
const char* to_string(Model m);

// Spatial part of a Hamiltonian. Coordinates are (t, x, theta) where x is z on
// the sphere model and r on the disc model; theta is measured in turns.
class Field {
 public:
  virtual ~Field() = default;
  virtual double value(double t, double x, double theta) const = 0;
  // Range over theta at level x; exact up to rounding for the built-in fields.
  virtual Interval level_range(double t, double x) const = 0;
  // Sound enclosure over x in X and all theta.
  virtual Interval enclose(double t, const Interval& X) const = 0;
  // Encloses d/dx over X and all theta; entire() when unknown.
  virtual Interval slope(double, const Interval&) const { return Interval::entire(); }
  // Average over theta at level x.
  virtual double theta_mean(double t, double x) const = 0;
  virtual bool autonomous() const = 0;
  virtual bool theta_independent() const = 0;
  // Points in x where the field may fail to be smooth.
  virtual std::vector<double> breakpoints() const { return {}; }
};

using FieldPtr = std::shared_ptr<const Field>;

FieldPtr expr_field(const Expr& e, Var x);

// Periodic in theta, bilinear between lattice nodes. values[i * ntheta + j] is
// the sample at x_i = x_lo + i (x_hi - x_lo)/(nx - 1), theta_j = j / ntheta.
struct GridData {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int nx = 0;
  int ntheta = 0;
  std::vector<double> values;
};
FieldPtr grid_field(GridData g);

FieldPtr sum_field(FieldPtr a, FieldPtr b);
FieldPtr scaled_field(double c, FieldPtr a);
FieldPtr time_reversed_field(FieldPtr a);

struct Band {
  double lo = 0.0;
  double hi = 0.0;
};

// Time-wise constant added to the field: either an expression in t or a
// multiple of minus the spatial mean of a field (from mean-normalization).
struct ShiftTerm {
  enum class Kind { expr, minus_mean };
  Kind kind = Kind::expr;
  Expr s;
  FieldPtr mean_of;
  double coeff = 1.0;
};

class Hamiltonian {
 public:
  Hamiltonian();  // zero z-profile on the sphere

  static Hamiltonian z_profile(const Expr& e);
  static Hamiltonian z_profile(const std::string& text) { return z_profile(Expr::parse(text)); }
  static Hamiltonian radial(const Expr& e, double radius);
  static Hamiltonian grid(Model model, GridData g, double radius = 1.0);
  static Hamiltonian from_field(HamKind kind, Model model, double radius, FieldPtr field);

  HamKind kind() const { return kind_; }
  Model model() const { return model_; }
  double radius() const { return radius_; }
  // Model area: 1 on the sphere, pi R^2 on the disc.
  double area() const;
  // Coordinate range of x.
  Interval domain() const;

  const FieldPtr& field() const { return field_; }
  const std::vector<ShiftTerm>& shifts() const { return shifts_; }
  const std::optional<Band>& support() const { return support_; }
  Hamiltonian with_support(Band b) const;
  Hamiltonian with_shifts(std::vector<ShiftTerm> s) const;

  double operator()(double t, double x, double theta = 0.0) const;
  double shift_at(double t) const;
  bool autonomous() const;

  // Set when this Hamiltonian was produced by compose().
  const Hamiltonian* composed_first() const { return parts_ ? &parts_->first : nullptr; }
  const Hamiltonian* composed_second() const { return parts_ ? &parts_->second : nullptr; }

 private:
  HamKind kind_ = HamKind::z_profile;
  Model model_ = Model::sphere;
  double radius_ = 1.0;
  FieldPtr field_;
  std::vector<ShiftTerm> shifts_;
  std::optional<Band> support_;
  std::shared_ptr<const std::pair<Hamiltonian, Hamiltonian>> parts_;

  friend Hamiltonian compose(const Hamiltonian&, const Hamiltonian&);
};

// Integral of H_t over the model surface.
double spatial_integral(const Hamiltonian& h, double t);
double spatial_mean(const Hamiltonian& h, double t);
// int_0^1 int_Sigma H omega dt.
double integrate(const Hamiltonian& h, double rel_tol = 1e-9);
// Same, restricted to the field (shift terms ignored).
double integrate_field(const FieldPtr& f, Model model, double radius, double rel_tol = 1e-9);

Hamiltonian mean_normalize(const Hamiltonian& h);

// Spatial extrema of H_t (shifts included).
Interval spatial_range(const Hamiltonian& h, double t);
double hofer_norm(const Hamiltonian& h);

Hamiltonian add(const Hamiltonian& a, const Hamiltonian& b);
Hamiltonian scale(const Hamiltonian& h, double c);
Hamiltonian add_shift(const Hamiltonian& h, const Expr& s);
// H-bar: (t, x) -> -H(1 - t, x)
Hamiltonian bar(const Hamiltonian& h);

// H # H' for autonomous theta-independent H (rotations along level circles).
Hamiltonian compose(const Hamiltonian& h, const Hamiltonian& hp);
Hamiltonian compose_power(const Hamiltonian& h, int n);

// Area-preserving embedding of a radial Hamiltonian on the radius-R disc into
// the southern polar cap z = pi r^2 of the sphere model; zero outside the cap.
Hamiltonian embed_in_sphere_cap(const Hamiltonian& radial);

// Extrema search over x in X at time t: returns {enclosure of min, enclosure of max}.
std::pair<Interval, Interval> field_extrema(const Field& f, double t, const Interval& X, double tol = 1e-12);

}  // namespace linkspec
