#pragma once

#include "linkspec/surface_link.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace linkspec {

using Complex = std::complex<double>;

struct ComplexRational {
  Rational re{0};
  Rational im{0};
  bool operator==(const ComplexRational&) const = default;
};

struct Monomial {
  ComplexRational coeff{Rational(1), Rational(0)};
  std::vector<long long> exponent;  // one entry per circle
  Rational area_exponent{0};        // formal power of T; 0 for the specialized potential
  std::string region;
};

struct DiscPotential {
  std::vector<std::string> variables;  // circle ids
  std::vector<Monomial> monomials;
  std::vector<std::string> warnings;
  std::size_t nvars() const { return variables.size(); }
};

// One monomial per region; the exponent of x_i is the net signed incidence of
// circle i on that region. With eta, each monomial carries T^{A_j + 2(k_j-1) eta}.
DiscPotential build_potential(const SurfaceLink& link, const std::optional<Rational>& eta = std::nullopt);

// x_1 + ... + x_k + 1/(x_1 ... x_k)
DiscPotential clifford_potential(int k);

// Drops the area exponents (T = 1).
DiscPotential specialize(const DiscPotential& w);

std::string to_string(const DiscPotential& w);

// Exact partial derivatives at (1, ..., 1).
std::vector<ComplexRational> gradient_at_ones(const DiscPotential& w);

// Per variable, the sum of its exponents over all monomials.
std::vector<long long> exponent_sums(const DiscPotential& w);

struct Evaluation {
  Complex value;
  std::vector<Complex> gradient;
  std::vector<std::vector<Complex>> hessian;
};

// T = 1 evaluation. Throws ValidationError on a zero coordinate.
Evaluation eval_grad_hess(const DiscPotential& w, const std::vector<Complex>& x);
Complex hessian_det(const DiscPotential& w, const std::vector<Complex>& x);

struct CriticalPoint {
  std::vector<Complex> coords;
  double residual = 0.0;
  Complex hessian_det;
  double alpha = 0.0;  // Newton step times |H^-1| |D^3 W| / 2
  bool non_degenerate = false;
};

struct SolverOptions {
  int starts = 200;
  int batch = 8;
  int max_iterations = 200;
  double tolerance = 1e-12;
  double degeneracy = 1e-9;
  std::uint64_t seed = 20240601;
};

struct CriticalPointSearch {
  std::vector<CriticalPoint> points;  // sorted by coordinates
  int starts = 0;
  int failed_starts = 0;
};

CriticalPointSearch find_critical_points(const DiscPotential& w, const SolverOptions& opts = {});

// Rewrites w in the coordinates x'_i = x_i x_j^eps (other coordinates fixed).
DiscPotential handleslide(const DiscPotential& w, std::size_t i, std::size_t j, int eps);
// Image of a point under the same coordinate change.
std::vector<Complex> handleslide_point(const std::vector<Complex>& x, std::size_t i, std::size_t j, int eps);

}  // namespace linkspec
