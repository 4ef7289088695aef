#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ihd/core.hpp"
#include "ihd/solvers.hpp"

namespace ihd {

struct LyapunovReport {
  std::vector<double> values;  // V_k for k = 1 .. K (velocity needs a pair of iterates)
  double c1 = 0.0;             // weight of the velocity term
  double delta = 0.0;          // guaranteed decrease coefficient
  std::vector<std::pair<long, double>> violations;  // (k, gap) where the decrease fails
};

/// Checks V_{k+1} <= V_k - delta ||v_{k+1}||^2 along a recorded trace.
/// Explicit scheme: C1 = 1/h^2 + beta L / h; implicit: C1 = (beta/h) L + 1/h^2.
/// delta = 1/s_bar - L/2 - C1 with s_bar = h^2/(1 + c h). Refuses (throws)
/// when the convergence condition fails, since delta <= 0 then.
LyapunovReport lyapunov_sequence(const Trace& trace, Scheme scheme, const Objective& f,
                                 const SolverParams& p, double L);

enum class RateModel { LINEAR, POWER };

struct RateEstimate {
  RateModel model = RateModel::LINEAR;
  double value = 0.0;  // rho for LINEAR, exponent for POWER
  double r_squared = 0.0;
  long window_begin = 0;
  long window_end = 0;  // exclusive
};

/// LINEAR: least-squares fit of log d_k against k, rho = exp(slope).
/// POWER: fit of log d_k against log k. Window defaults to the last half.
/// Throws on nonpositive distances, fewer than 10 samples, or a degenerate fit.
RateEstimate estimate_rate(const std::vector<double>& distances, RateModel model);
RateEstimate estimate_rate(const std::vector<double>& distances, RateModel model,
                           long window_begin, long window_end);

struct SpectralClassification {
  /// Discrete: multiplier magnitudes |lambda|; continuous: real parts.
  std::vector<double> multipliers;
  bool is_unstable = false;
  bool is_hyperbolic = true;
};

/// Numerically stable roots of lambda^2 + b lambda + c = 0.
std::pair<std::complex<double>, std::complex<double>> solve_quadratic(double b, double c);

/// Multiplier magnitudes of the linearized iteration map at a critical point
/// with Hessian eigenvalues eta_i. Explicit scheme solves
/// lambda^2 + lambda(eta_i (beta_c + s) - (1 + alpha)) + alpha - eta_i beta_c = 0,
/// implicit lambda^2 - lambda((1 + alpha) - s (1 + beta_c) eta_i) + alpha - s beta_c eta_i = 0,
/// where beta_c is beta h alpha (explicit) or beta/h (implicit). Unstable iff
/// some |lambda| > 1; non-hyperbolic when some |lambda| is within 1e-9 of 1.
/// Throws on the degenerate coincidence alpha = beta_c/(beta_c + s)
/// (explicit) or alpha = beta_c/(beta_c + 1) (implicit), i.e. beta = 1/c.
SpectralClassification classify_fixed_point_discrete(Scheme scheme,
                                                     const std::vector<double>& hessian_eigs,
                                                     double alpha, double beta_c, double s);

/// Root real parts of lambda^2 + (c + eta beta) lambda + eta = 0 per Hessian
/// eigenvalue eta. Unstable iff some real part > 0; non-hyperbolic when some
/// real part is within 1e-9 of 0. Requires beta != 1/c.
SpectralClassification classify_equilibrium_continuous(const std::vector<double>& hessian_eigs,
                                                       double c, double beta);

enum class EndpointClass { MINIMUM = 0, STRICT_SADDLE = 1, NONCONVERGED = 2 };

struct MonteCarloSample {
  Point endpoint;
  EndpointClass cls = EndpointClass::NONCONVERGED;
  long iters = 0;
  double residual = 0.0;
};

struct MonteCarloReport {
  long n_to_min = 0;
  long n_to_strict_saddle = 0;
  long n_nonconverged = 0;
  std::vector<MonteCarloSample> samples;
};

/// Runs n_samples independent trajectories with x0 = x1 drawn uniformly from
/// init_box (substream (seed, sample index), so results do not depend on
/// scheduling). An endpoint with residual < classify_tol is classified by the
/// sign of the smallest Hessian eigenvalue there; anything else counts as
/// nonconverged. Requires f.hess.
MonteCarloReport montecarlo_avoidance(Scheme scheme, const Objective& f,
                                      const SolverParams& p, const Box& init_box,
                                      long n_samples, std::uint64_t seed,
                                      double classify_tol, bool parallel = false);

}  // namespace ihd
