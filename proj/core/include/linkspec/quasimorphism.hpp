#pragma once

#include "linkspec/equidistributed.hpp"
#include "linkspec/hamiltonian.hpp"
#include "linkspec/spectral_calculus.hpp"
#include "linkspec/surface_link.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace linkspec {

struct DefectBound {
  int k = 0;
  Rational eta{0};
  Rational lambda{0};
  Rational defect{0};  // 2 (k+1) lambda / k
  // (k+1) lambda / k, the right side of c(H) + c(H-bar) <= ...
  Rational duality_constant() const { return defect / 2; }
};

DefectBound defect_bound(int k, const Rational& eta);

// Defect data of a monotone link on the sphere of area 1.
DefectBound defect_bound(const SurfaceLink& link, const std::optional<Rational>& eta = std::nullopt);

struct QuasiValue {
  double lower = 0.0;  // enclosure of c_L(nH)/n
  double upper = 0.0;
  int n_used = 1;
  double error_bound = 0.0;  // defect/n, 0 when exact
  bool exact = false;
  double value() const { return 0.5 * (lower + upper); }
  // Interval guaranteed to contain mu_L(phi).
  double mu_lo() const { return lower - error_bound; }
  double mu_hi() const { return upper + error_bound; }
};

// c_L(nH)/n for autonomous mean-normalized H on the sphere.
QuasiValue homogenize(const Hamiltonian& h, const SurfaceLink& link, int n,
                      const std::optional<Rational>& eta = std::nullopt);

struct DualityResult {
  SpectralBound h;
  SpectralBound hbar;
  double lhs = 0.0;  // lower(H) + lower(H-bar)
  Rational rhs{0};   // (k+1) lambda / k
  double slack = 0.0;
  bool holds = false;
};

DualityResult duality_check(const Hamiltonian& h, const SurfaceLink& link,
                            const std::optional<Rational>& eta = std::nullopt);

// Family H_n on the cylinder: supported in z <= 0.75/n, mean zero, equal to n(2n-1)
// on z = 1/(2n), so that mu on the 2n-1 level link minus mu on the equator is n.
Hamiltonian scl_family_hamiltonian(int n);
// Circles at z = j/(2n), j = 1 .. 2n-1.
SurfaceLink scl_family_link(int n);

struct SclRow {
  int n = 0;
  double mu_ln = 0.0;
  double mu_l1 = 0.0;
  double f_value = 0.0;  // mu_{L_n} - mu_{L_1}
  bool exact = false;
  Rational defect_l1{0};
  Rational defect_ln{0};
  Rational defect_sum{0};
  double scl_lower = 0.0;  // |f_value| / defect_sum
};

std::vector<SclRow> scl_lower_bound(int n_lo, int n_hi);

struct IndependenceMember {
  int k = 0;
  Rational eta{0};
  Rational lambda{0};
  Rational level{0};   // distinguishing circle
  int circle = 0;      // its index from the bottom
  double half_width = 0.0;
  SurfaceLink link;
  Hamiltonian witness;
};

struct IndependenceWitness {
  // Elimination order, ties broken by (lambda, eta).
  std::vector<IndependenceMember> members;
  // matrix[i][j] = mu_j(witness_i)
  std::vector<std::vector<double>> matrix;
  bool triangular_unit = false;
};

IndependenceWitness independence_witness(const std::vector<std::pair<int, Rational>>& family);

enum class LinkFamily { parallel, equidistributed };

struct QuasiCalabiRow {
  int k = 0;
  Rational eta{0};
  Rational lambda{0};
  Rational d_k{0};  // (k+1) lambda / k
  double c_lo = 0.0;
  double c_hi = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double radius() const;
};

std::vector<QuasiCalabiRow> quasicalabi_check(const Hamiltonian& h, int k_lo, int k_hi, const EtaRule& eta_rule,
                                              LinkFamily family = LinkFamily::parallel);

// mu_{L_2} - mu_{L_1} with L_1 the equator and L_2 two circles near it, both
// disjoint from the southern cap of area A < 1/2.
struct FragmentationWitness {
  Rational area{0};
  SurfaceLink l1;
  SurfaceLink l2;
  Rational eta2{0};
};

FragmentationWitness fragmentation_witness(const Rational& area);

// Enclosure of (mu_{L_2} - mu_{L_1})(phi_H) for autonomous H supported in the cap.
std::pair<double, double> fragmentation_value(const FragmentationWitness& w, const Hamiltonian& h);

}  // namespace linkspec
