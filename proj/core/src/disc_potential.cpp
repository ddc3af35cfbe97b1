#include "linkspec/disc_potential.hpp"

#include "linkspec/error.hpp"
#include "linkspec/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace linkspec {

DiscPotential build_potential(const SurfaceLink& link, const std::optional<Rational>& eta) {
  require_valid(link);
  if (eta && *eta < 0) throw ValidationError("eta must be non-negative");
  DiscPotential w;
  for (const auto& c : link.circles) w.variables.push_back(c.id);
  for (const auto& r : link.regions) {
    Monomial m;
    m.region = r.id;
    m.exponent.assign(link.k(), 0);
    for (const auto& b : r.boundary) {
      const int i = link.circle_index(b.circle);
      m.exponent[i] += b.sign * link.circles[i].orientation;
    }
    if (eta) m.area_exponent = r.area + 2 * (r.boundary_count - 1) * *eta;
    w.monomials.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < link.k(); ++i) {
    bool appears = false;
    for (const auto& m : w.monomials) appears = appears || m.exponent[i] != 0;
    if (!appears)
      w.warnings.push_back("circle '" + link.circles[i].id +
                           "' has net-zero exponent in every monomial; the potential does not depend on it");
  }
  return w;
}

DiscPotential clifford_potential(int k) {
  if (k < 1) throw ValidationError("clifford_potential needs k >= 1");
  DiscPotential w;
  for (int i = 0; i < k; ++i) {
    w.variables.push_back("x" + std::to_string(i + 1));
    Monomial m;
    m.exponent.assign(k, 0);
    m.exponent[i] = 1;
    m.region = "B" + std::to_string(i + 1);
    w.monomials.push_back(std::move(m));
  }
  Monomial last;
  last.exponent.assign(k, -1);
  last.region = "B" + std::to_string(k + 1);
  w.monomials.push_back(std::move(last));
  return w;
}

DiscPotential specialize(const DiscPotential& w) {
  DiscPotential out = w;
  for (auto& m : out.monomials) m.area_exponent = 0;
  return out;
}

std::string to_string(const DiscPotential& w) {
  std::ostringstream os;
  for (std::size_t t = 0; t < w.monomials.size(); ++t) {
    const auto& m = w.monomials[t];
    if (t) os << " + ";
    const bool unit = m.coeff.re == 1 && m.coeff.im == 0;
    if (!unit) {
      os << '(' << m.coeff.re;
      if (m.coeff.im != 0) os << (m.coeff.im > 0 ? "+" : "") << m.coeff.im << 'i';
      os << ')';
    }
    bool first = unit;
    auto sep = [&] {
      if (!first) os << '*';
      first = false;
    };
    if (m.area_exponent != 0) {
      sep();
      os << "T^(" << m.area_exponent << ')';
    }
    for (std::size_t i = 0; i < m.exponent.size(); ++i) {
      if (m.exponent[i] == 0) continue;
      sep();
      os << w.variables[i];
      if (m.exponent[i] != 1) os << "^" << m.exponent[i];
    }
    if (first) os << '1';
  }
  return os.str();
}

std::vector<ComplexRational> gradient_at_ones(const DiscPotential& w) {
  std::vector<ComplexRational> g(w.nvars());
  for (const auto& m : w.monomials)
    for (std::size_t i = 0; i < w.nvars(); ++i) {
      g[i].re += m.coeff.re * m.exponent[i];
      g[i].im += m.coeff.im * m.exponent[i];
    }
  return g;
}

std::vector<long long> exponent_sums(const DiscPotential& w) {
  std::vector<long long> s(w.nvars(), 0);
  for (const auto& m : w.monomials)
    for (std::size_t i = 0; i < w.nvars(); ++i) s[i] += m.exponent[i];
  return s;
}

namespace {

Complex ipow(Complex x, long long e) {
  if (e < 0) return 1.0 / ipow(x, -e);
  Complex r = 1.0;
  while (e) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

Complex coeff_value(const Monomial& m) { return {to_double(m.coeff.re), to_double(m.coeff.im)}; }

Eigen::MatrixXcd to_matrix(const std::vector<std::vector<Complex>>& h) {
  const Eigen::Index n = static_cast<Eigen::Index>(h.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = h[i][j];
  return m;
}

double norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double dist2(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return s;
}

bool out_of_range(const std::vector<Complex>& x) {
  for (const auto& c : x) {
    const double a = std::abs(c);
    if (!(a > 1e-8 && a < 1e8)) return true;
  }
  return false;
}

// Newton step in logarithmic coordinates x = exp(y): solves (x * grad W) = 0,
// whose Jacobian sum_m e e^T m is polynomial. Returns the step in x.
std::optional<Eigen::VectorXcd> newton_step(const DiscPotential& w, const std::vector<Complex>& x) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n);
  Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& m : w.monomials) {
    Complex v = coeff_value(m);
    for (Eigen::Index i = 0; i < n; ++i)
      if (m.exponent[i]) v *= ipow(x[i], m.exponent[i]);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!m.exponent[i]) continue;
      f(i) += static_cast<double>(m.exponent[i]) * v;
      for (Eigen::Index j = 0; j < n; ++j)
        jac(i, j) += static_cast<double>(m.exponent[i] * m.exponent[j]) * v;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(jac);
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::VectorXcd dy = lu.solve(-f);
  if (!dy.allFinite()) return std::nullopt;
  // keep single steps from wrapping around the torus
  const double big = dy.cwiseAbs().maxCoeff();
  if (big > 1.0) dy /= big;
  Eigen::VectorXcd dx(n);
  for (Eigen::Index i = 0; i < n; ++i) dx(i) = x[i] * (std::exp(dy(i)) - 1.0);
  return dx;
}

struct Attempt {
  bool ok = false;
  std::vector<Complex> x;
  double residual = 0.0;
};

// Newton on M(x) F(x) with M = prod_j (1/|x - r_j|^2 + 1), so known roots repel.
Attempt deflated_newton(const DiscPotential& w, std::vector<Complex> x, const std::vector<std::vector<Complex>>& roots,
                        const SolverOptions& opts) {
  Attempt a;
  const std::size_t n = x.size();
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (out_of_range(x)) return a;
    auto step = newton_step(w, x);
    if (!step) return a;
    double dlog = 0.0;
    for (const auto& r : roots) {
      const double d2 = dist2(x, r);
      if (d2 == 0.0) return a;
      double ip = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        ip += std::real(std::conj(x[i] - r[i]) * (*step)(static_cast<Eigen::Index>(i)));
      const double inv = 1.0 / d2;
      dlog += (-2.0 * ip * inv * inv) / (inv + 1.0);
    }
    double scale = 1.0 / (1.0 - dlog);
    if (!std::isfinite(scale) || scale <= 0.0) scale = 1.0;
    scale = std::min(scale, 4.0);
    for (std::size_t i = 0; i < n; ++i) x[i] += scale * (*step)(static_cast<Eigen::Index>(i));
    if (step->norm() < 1e-13 * (1.0 + norm(x))) break;
  }
  // polish without deflation
  for (int it = 0; it < 30; ++it) {
    if (out_of_range(x)) return a;
    auto step = newton_step(w, x);
    if (!step) break;
    for (std::size_t i = 0; i < n; ++i) x[i] += (*step)(static_cast<Eigen::Index>(i));
    if (step->norm() < 1e-16 * (1.0 + norm(x))) break;
  }
  if (out_of_range(x)) return a;
  a.residual = norm(eval_grad_hess(w, x).gradient);
  a.ok = a.residual < opts.tolerance;
  a.x = std::move(x);
  return a;
}

// beta * gamma with beta = |H^-1 grad W| and gamma from the third derivative only.
double alpha_estimate(const DiscPotential& w, const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  if (n == 0) return 0.0;
  const Evaluation ev = eval_grad_hess(w, x);
  const Eigen::MatrixXcd h = to_matrix(ev.hessian);
  Eigen::VectorXcd g(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i)) = ev.gradient[i];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smin = svd.singularValues()(static_cast<Eigen::Index>(n) - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  const double beta = svd.solve(g).norm();
  double t2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        Complex s = 0.0;
        for (const auto& m : w.monomials) {
          std::vector<long long> e = m.exponent;
          double c = 1.0;
          for (std::size_t idx : {i, j, l}) {
            c *= static_cast<double>(e[idx]);
            e[idx] -= 1;
          }
          if (c == 0.0) continue;
          Complex v = coeff_value(m) * c;
          for (std::size_t q = 0; q < n; ++q)
            if (e[q]) v *= ipow(x[q], e[q]);
          s += v;
        }
        t2 += std::norm(s);
      }
  return beta * std::sqrt(t2) / (2.0 * smin);
}

bool point_less(const CriticalPoint& a, const CriticalPoint& b) {
  auto key = [](double v) { return std::round(v * 1e9); };
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double ar = key(a.coords[i].real()), br = key(b.coords[i].real());
    if (ar != br) return ar < br;
    const double ai = key(a.coords[i].imag()), bi = key(b.coords[i].imag());
    if (ai != bi) return ai < bi;
  }
  return false;
}

}  // namespace

Evaluation eval_grad_hess(const DiscPotential& w, const std::vector<Complex>& x) {
  const std::size_t n = w.nvars();
  if (x.size() != n) throw ValidationError("point has wrong dimension");
  for (const auto& c : x)
    if (c == Complex(0.0)) throw ValidationError("potential evaluated at a zero coordinate");
  Evaluation ev;
  ev.gradient.assign(n, 0.0);
  ev.hessian.assign(n, std::vector<Complex>(n, 0.0));
  for (const auto& m : w.monomials) {
    Complex v = coeff_value(m);
    for (std::size_t i = 0; i < n; ++i)
      if (m.exponent[i]) v *= ipow(x[i], m.exponent[i]);
    ev.value += v;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = static_cast<double>(m.exponent[i]);
      if (ei == 0.0) continue;
      ev.gradient[i] += ei * v / x[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double ej = static_cast<double>(m.exponent[j]);
        if (i == j) ev.hessian[i][i] += ei * (ei - 1.0) * v / (x[i] * x[i]);
        else if (ej != 0.0) ev.hessian[i][j] += ei * ej * v / (x[i] * x[j]);
      }
    }
  }
  return ev;
}

Complex hessian_det(const DiscPotential& w, const std::vector<Complex>& x) {
  if (w.nvars() == 0) return 1.0;
  return to_matrix(eval_grad_hess(w, x).hessian).determinant();
}

CriticalPointSearch find_critical_points(const DiscPotential& w0, const SolverOptions& opts) {
  const DiscPotential w = specialize(w0);
  const std::size_t n = w.nvars();
  CriticalPointSearch out;
  std::vector<std::vector<Complex>> roots;
  auto accept = [&](const std::vector<Complex>& x) {
    for (const auto& r : roots)
      if (dist2(x, r) < 1e-16 * (1.0 + norm(r) * norm(r))) return;
    roots.push_back(x);
  };
  std::vector<Complex> ones(n, 1.0);
  if (norm(eval_grad_hess(w, ones).gradient) < opts.tolerance) accept(ones);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> angle(0.0, 1.0);
  std::vector<std::vector<Complex>> starts(opts.starts, std::vector<Complex>(n));
  for (auto& s : starts)
    for (auto& c : s) c = std::polar(1.0, 2.0 * std::numbers::pi * angle(rng));

  const int batch = std::max(1, opts.batch);
  for (int b0 = 0; b0 < opts.starts; b0 += batch) {
    const int bn = std::min(batch, opts.starts - b0);
    const auto known = roots;
    auto results = parallel_map<Attempt>(static_cast<std::size_t>(bn), [&](std::size_t t) {
      return deflated_newton(w, starts[b0 + t], known, opts);
    });
    for (const auto& r : results) {
      ++out.starts;
      if (!r.ok) {
        ++out.failed_starts;
        continue;
      }
      accept(r.x);
    }
  }

  for (const auto& r : roots) {
    CriticalPoint cp;
    cp.coords = r;
    cp.residual = norm(eval_grad_hess(w, r).gradient);
    cp.hessian_det = hessian_det(w, r);
    cp.alpha = alpha_estimate(w, r);
    // a tiny Newton step is not enough near a multiple root; alpha stays O(1) there
    cp.non_degenerate = std::abs(cp.hessian_det) > opts.degeneracy && cp.alpha < 0.1;
    // Newton only reaches a multiple root to about sqrt(eps), so copies cluster there
    bool merged = false;
    if (!cp.non_degenerate)
      for (auto& q : out.points)
        if (!q.non_degenerate && dist2(q.coords, cp.coords) < 1e-12 * (1.0 + norm(cp.coords) * norm(cp.coords))) {
          if (cp.residual < q.residual) q = cp;
          merged = true;
          break;
        }
    if (!merged) out.points.push_back(std::move(cp));
  }
  std::sort(out.points.begin(), out.points.end(), point_less);
  return out;
}

DiscPotential handleslide(const DiscPotential& w, std::size_t i, std::size_t j, int eps) {
  if (i == j) throw ValidationError("handleslide needs two distinct circles");
  if (i >= w.nvars() || j >= w.nvars()) throw ValidationError("handleslide index out of range");
  if (eps != 1 && eps != -1) throw ValidationError("handleslide epsilon must be +1 or -1");
  DiscPotential out = w;
  for (auto& m : out.monomials) m.exponent[j] -= eps * m.exponent[i];
  return out;
}

std::vector<Complex> handleslide_point(const std::vector<Complex>& x, std::size_t i, std::size_t j, int eps) {
  std::vector<Complex> y = x;
  y[i] = x[i] * ipow(x[j], eps);
  return y;
}

}  // namespace linkspec
