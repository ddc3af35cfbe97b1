#pragma once

#include "linkspec/equidistributed.hpp"
#include "linkspec/hamiltonian.hpp"
#include "linkspec/surface_link.hpp"
#include "linkspec/twist.hpp"

#include <optional>
#include <string>
#include <vector>

namespace linkspec {

enum class Rule { LagrangianControl, HoferLipschitz, Monotonicity, SupportControl, Shift, Subadditivity, ExactLinkAdapted };

const char* to_string(Rule r);

struct DerivationStep {
  Rule rule;
  double lower;
  double upper;
  std::string detail;
};

struct SpectralBound {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<DerivationStep> derivation;
  double width() const { return upper - lower; }
  double mid() const { return 0.5 * (lower + upper); }
};

struct BoundOptions {
  bool lagrangian_control = true;
  bool hofer_lipschitz = true;
  bool monotonicity = true;
  bool support_control = true;
  bool exact_link_adapted = true;
  bool subadditivity = true;
  double adapted_tol = 1e-12;
  int time_panels = 8;  // composite 16-point rule in t for non-autonomous fields
};

// (1/k) sum_i int s_i(t) dt when H_t is constant (= s_i(t)) on every circle.
double exact_link_adapted(const Hamiltonian& h, const SurfaceLink& link, double tol = 1e-12);

// Interval for c_L(H) valid for every functional with the listed properties.
// The link must be eta-monotone for the given eta (or for some eta if none given).
SpectralBound bound(const Hamiltonian& h, const SurfaceLink& link, const std::optional<Rational>& eta = std::nullopt,
                    const BoundOptions& opts = {});

struct ConvergenceRow {
  int m = 0;
  int k = 0;
  Rational alpha{0};
  SpectralBound bound;
  double target = 0.0;
  double gap = 0.0;
  Rational alpha_times_count{0};  // alpha_m (k_m + l_m)
  Rational complement_area{0};
  double max_diameter = 0.0;
};

std::vector<ConvergenceRow> calabi_property_table(const Hamiltonian& h, const std::vector<EquidistributedLink>& links);

struct ZetaRow {
  int m = 0;
  int i = 0;  // truncation index, 0 = zero Hamiltonian
  double level = 0.0;
  double calabi = 0.0;  // int F_i over the sphere
  double lower = 0.0;   // lower end of the bound on c_{L^m}(F_i)
  double upper = 0.0;
  double base = 0.0;    // c_{L^1}(F_i), pinned by support control
};

struct ZetaTable {
  std::vector<ZetaRow> rows;
  // per link, max over i of the lower bounds: a lower bound for zeta_m of the twist
  std::vector<std::pair<int, double>> zeta_lower;
};

// Truncations F_0 = 0, F_1, ..., F_count embedded in the southern polar cap.
ZetaTable zeta_divergence_table(const TwistProfile& profile, int count, const std::vector<EquidistributedLink>& links,
                                const SurfaceLink& base_link, TruncationRule rule = TruncationRule::radius);

}  // namespace linkspec
