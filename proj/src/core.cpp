#include "ihd/core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ihd/rng.hpp"

namespace ihd {

GammaSchedule GammaSchedule::constant(double g) {
  if (!(g > 0.0)) throw std::invalid_argument("damping schedule requires lower_c > 0");
  GammaSchedule s;
  s.value = [g](double) { return g; };
  s.derivative = [](double) { return 0.0; };
  s.lower_c = g;
  s.upper_C = g;
  return s;
}

void check_params(const SolverParams& p) {
  if (!(p.h > 0.0) || !std::isfinite(p.h))
    throw std::invalid_argument("step size h must be positive");
  if (!(p.beta >= 0.0) || !std::isfinite(p.beta))
    throw std::invalid_argument("beta must be nonnegative");
  if (p.max_iter < 0) throw std::invalid_argument("max_iter must be nonnegative");
  if (!(p.residual_tol >= 0.0))
    throw std::invalid_argument("residual_tol must be nonnegative");
  if (!p.gamma.value) throw std::invalid_argument("damping schedule has no value function");
  if (!(p.gamma.lower_c > 0.0))
    throw std::invalid_argument("damping schedule requires lower_c > 0");
  if (p.gamma.lower_c > p.gamma.upper_C)
    throw std::invalid_argument("damping schedule requires lower_c <= upper_C");
}

Coefficients coefficients_at(const SolverParams& p, long k) {
  check_params(p);
  if (k < 0) throw std::invalid_argument("iteration index must be nonnegative");
  const double gk = p.gamma.value(static_cast<double>(k) * p.h);
  Coefficients c;
  c.alpha = 1.0 / (1.0 + gk * p.h);
  c.beta_k = p.beta * p.h * c.alpha;
  c.s_k = p.h * p.h * c.alpha;
  return c;
}

ValidationResult validate_convergence_condition(const SolverParams& p, double L) {
  check_params(p);
  if (!(L > 0.0)) throw std::invalid_argument("Lipschitz constant required");
  const double lhs = p.beta + p.h / 2.0;
  const double rhs = p.gamma.lower_c / L;
  if (lhs < rhs) return {true, "beta + h/2 < c/L holds"};
  std::ostringstream os;
  os << "convergence condition violated: beta + h/2 = " << lhs << " >= c/L = " << rhs
     << " (margin " << (lhs - rhs) << ")";
  return {false, os.str()};
}

ValidationResult validate_saddle_condition(const SolverParams& p, double L) {
  check_params(p);
  if (!(L > 0.0)) throw std::invalid_argument("Lipschitz constant required");
  if (!p.gamma.is_constant())
    throw std::invalid_argument("constant viscous damping required for saddle guarantee");
  const double c = p.gamma.lower_c;
  if (p.beta == 0.0) {
    const double bound = 2.0 * c / L;
    if (p.h < bound) return {true, "beta = 0: h < 2c/L holds"};
    std::ostringstream os;
    os << "saddle condition violated: h = " << p.h << " >= 2c/L = " << bound;
    return {false, os.str()};
  }
  if (!(p.beta < c / L)) {
    std::ostringstream os;
    os << "saddle condition violated: beta = " << p.beta << " >= c/L = " << (c / L);
    return {false, os.str()};
  }
  if (std::abs(p.beta * c - 1.0) <= 1e-12) return {false, "beta equals 1/c"};
  const double bound = std::min(2.0 * (c / L - p.beta), 1.0 / (L * p.beta));
  if (p.h < bound) return {true, "saddle conditions hold"};
  std::ostringstream os;
  os << "saddle condition violated: h = " << p.h
     << " >= min(2(c/L - beta), 1/(L beta)) = " << bound;
  return {false, os.str()};
}

double SplitMix64::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

double estimate_lipschitz(const Objective& f, const Box& box, int n_pairs,
                          std::uint64_t seed) {
  if (n_pairs < 1) throw std::invalid_argument("n_pairs must be positive");
  if (box.lo.size() != f.dim || box.hi.size() != f.dim)
    throw std::invalid_argument("box dimension mismatch");
  double best = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    SplitMix64 g = SplitMix64::stream(seed, static_cast<std::uint64_t>(i));
    Point x(f.dim), y(f.dim);
    for (int d = 0; d < f.dim; ++d) x[d] = g.uniform(box.lo[d], box.hi[d]);
    for (int d = 0; d < f.dim; ++d) y[d] = g.uniform(box.lo[d], box.hi[d]);
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    best = std::max(best, (f.grad(x) - f.grad(y)).norm() / dist);
  }
  return best;
}

}  // namespace ihd
