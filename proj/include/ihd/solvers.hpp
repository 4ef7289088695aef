#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ihd/core.hpp"

namespace ihd {

enum class Scheme { ISEHD, ISIHD, GD, HBF, ISEHD_GENERAL, ISIHD_GENERAL };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);  // throws on unknown name

/// Rolling state of a discrete scheme: x_{k-1}, x_k, and (for the explicit
/// schemes) the cached gradient at x_{k-1} so each step costs one evaluation.
struct SolverState {
  Point x_prev;
  Point x_curr;
  Point g_prev;
  long k = 1;
  bool g_prev_valid = false;
};

/// Free coefficient sequences (alpha_k, beta_k, s_k) for the general variants.
/// For the explicit scheme beta_k multiplies the gradient difference; for the
/// implicit one it is the extrapolation coefficient.
struct GeneralCoefficients {
  std::function<double(long)> alpha;
  std::function<double(long)> beta_seq;
  std::function<double(long)> s;
};

struct SolverDivergence : std::runtime_error {
  long k;
  explicit SolverDivergence(long k_)
      : std::runtime_error("divergence detected at iteration " + std::to_string(k_)),
        k(k_) {}
};

SolverState isehd_step(SolverState state, const Objective& f, const SolverParams& p);
SolverState isihd_step(SolverState state, const Objective& f, const SolverParams& p);
SolverState gd_step(SolverState state, const Objective& f, const SolverParams& p);
SolverState hbf_step(SolverState state, const Objective& f, const SolverParams& p);
SolverState isehd_general_step(SolverState state, const Objective& f,
                               const GeneralCoefficients& coeffs);
SolverState isihd_general_step(SolverState state, const Objective& f,
                               const GeneralCoefficients& coeffs);

/// Checks 0 < inf s_k <= sup s_k < 2/L and sup((alpha_k + beta_k L)/s_k)
/// < 1/sup(s) - L/2 over k in [0, k_max].
ValidationResult validate_general_isehd(const GeneralCoefficients& coeffs, double L,
                                        long k_max);
/// Same sampling; condition sup(beta_k L + alpha_k/s_k) < 1/sup(s) - L/2.
ValidationResult validate_general_isihd(const GeneralCoefficients& coeffs, double L,
                                        long k_max);

struct Trace {
  std::vector<TraceRecord> records;
  std::vector<double> t_sec;  // cumulative wall time at each record (nondeterministic)
  bool diverged = false;
  bool stopped_by_tol = false;
  long grad_evals_scheme = 0;      // evaluations the scheme itself consumes
  long grad_evals_diagnostic = 0;  // extra evaluations for residual reporting
};

/// Iterates from (x0, x1) until k = max_iter or residual <= residual_tol.
/// Records k = 0 .. K; max_iter = 0 records the initial state only. On a
/// non-finite gradient or iterate the trace is truncated and flagged.
/// The general schemes take their coefficients through `coeffs`; `p` then
/// supplies only max_iter / residual_tol (and h for the trace's Lyapunov
/// column).
Trace run(Scheme scheme, const Objective& f, const SolverParams& p, const Point& x0,
          const Point& x1, const GeneralCoefficients* coeffs = nullptr);

/// Convenience overload with x1 = x0.
Trace run(Scheme scheme, const Objective& f, const SolverParams& p, const Point& x0);

}  // namespace ihd
