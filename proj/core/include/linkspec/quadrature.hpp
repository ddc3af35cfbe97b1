#pragma once

#include <functional>
#include <vector>

namespace linkspec {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule. n = 16 is cached.
const GaussRule& gauss_legendre(int n);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  long evaluations = 0;
  bool converged = true;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_depth = 40;
  int initial_panels = 1;
};

// Adaptive bisection with a 16-point rule on every panel; a panel is accepted
// when the rule on it and on its two halves agree.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts = {});

// Fixed composite rule, panels of equal width.
double integrate_composite(const std::function<double(double)>& f, double a, double b, int panels,
                           int points = 16);

}  // namespace linkspec
