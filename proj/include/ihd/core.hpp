#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace ihd {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A smooth objective f: R^d -> R with its gradient, optional Hessian and
/// optional global Lipschitz constant of the gradient.
struct Objective {
  int dim = 0;
  std::function<double(const Point&)> eval;
  std::function<Point(const Point&)> grad;
  std::function<Matrix(const Point&)> hess;  // empty when unavailable
  std::optional<double> lipschitz_L;

  bool has_hess() const { return static_cast<bool>(hess); }
};

/// Viscous damping schedule gamma(t) with bounds 0 < lower_c <= gamma(t) <= upper_C.
/// The analytic derivative is optional; it is required only by the explicit
/// continuous system's phase-space form.
struct GammaSchedule {
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // empty when unavailable
  double lower_c = 0.0;
  double upper_C = 0.0;

  static GammaSchedule constant(double g);
  bool has_derivative() const { return static_cast<bool>(derivative); }
  bool is_constant() const { return lower_c == upper_C; }
};

struct SolverParams {
  double h = 1e-3;       // step size, > 0
  double beta = 0.0;     // geometric damping, >= 0
  GammaSchedule gamma = GammaSchedule::constant(1.0);
  long max_iter = 1000;  // 0 means record the initial state only
  double residual_tol = 0.0;
};

struct TraceRecord {
  long k = 0;
  Point x;
  double f_value = 0.0;
  double residual = 0.0;   // ||grad f(x_k)||
  double lyapunov = 0.0;   // f(x_k) + (C1/2) ||x_k - x_{k-1}||^2
  double step_norm = 0.0;  // ||x_k - x_{k-1}||, 0 at k = 0
};

/// Per-iteration coefficients alpha_k = 1/(1 + gamma(kh) h), beta_k = beta h alpha_k,
/// s_k = h^2 alpha_k.
struct Coefficients {
  double alpha = 0.0;
  double beta_k = 0.0;
  double s_k = 0.0;
};

struct ValidationResult {
  bool ok = false;
  std::string message;
  explicit operator bool() const { return ok; }
};

/// Axis-aligned box, used for random sampling (Lipschitz estimation, Monte Carlo).
struct Box {
  Point lo;
  Point hi;
};

/// Throws std::invalid_argument when the parameter set is ill-formed
/// (h <= 0, beta < 0, max_iter < 0, or an invalid damping schedule).
void check_params(const SolverParams& p);

Coefficients coefficients_at(const SolverParams& p, long k);

/// True iff beta + h/2 < c/L, the step-size condition guaranteeing the
/// discrete Lyapunov decrease. Requires L > 0 (throws otherwise).
ValidationResult validate_convergence_condition(const SolverParams& p, double L);

/// True iff the parameters satisfy the strict-saddle avoidance conditions:
/// 0 < beta < c/L, beta != 1/c, h < min(2(c/L - beta), 1/(L beta)); for
/// beta = 0 the bound relaxes to h < 2c/L. Requires a constant schedule.
ValidationResult validate_saddle_condition(const SolverParams& p, double L);

/// Sampled (non-certified) estimate of the gradient's Lipschitz constant:
/// max of ||grad(x) - grad(y)|| / ||x - y|| over seeded uniform pairs in box.
double estimate_lipschitz(const Objective& f, const Box& box, int n_pairs,
                          std::uint64_t seed);

}  // namespace ihd
