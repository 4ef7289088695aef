#pragma once

#include <vector>

#include "ihd/core.hpp"

namespace ihd {

enum class ContinuousSystem { ISEHD, ISIHD };

/// Phase-space point of the first-order reformulations.
struct PhaseState {
  double t = 0.0;
  Point x;
  Point y;
};

struct PhaseDeriv {
  Point dx;
  Point dy;
};

/// Explicit system, Hessian-free form:
///   x' = -beta grad f(x) + (1/beta - gamma(t)) x - y/beta
///   y' = (1/beta - gamma(t) - beta gamma'(t)) x - y/beta
/// Requires beta > 0 and an analytic gamma derivative.
PhaseDeriv isehd_vector_field(const PhaseState& s, const Objective& f, double beta,
                              const GammaSchedule& gamma);

/// Implicit system:
///   x' = (y - x)/beta
///   y' = -beta grad f(y) - (1/beta - gamma(t))(x - y)
/// Requires beta > 0.
PhaseDeriv isihd_vector_field(const PhaseState& s, const Objective& f, double beta,
                              const GammaSchedule& gamma);

/// Initial auxiliary variable for position x0 and velocity v0:
/// explicit: y0 = -beta (v0 + beta grad f(x0)) + (1 - beta gamma(0)) x0;
/// implicit: y0 = x0 + beta v0.
PhaseState initial_phase(ContinuousSystem system, const Point& x0, const Point& v0,
                         const Objective& f, double beta, const GammaSchedule& gamma);

/// Velocity x'(t) recovered algebraically from the phase variables.
Point recover_velocity(ContinuousSystem system, const PhaseState& s, const Objective& f,
                       double beta, const GammaSchedule& gamma);

struct ContinuousSample {
  PhaseState state;
  Point xdot;
};

struct ContinuousTrace {
  std::vector<ContinuousSample> samples;
  bool diverged = false;
};

/// Fixed-step classical RK4 over round(T/dt) steps, sampling every step.
/// A non-finite state truncates the trace and sets the flag.
ContinuousTrace integrate(ContinuousSystem system, const PhaseState& phase0,
                          const Objective& f, double beta, const GammaSchedule& gamma,
                          double dt, double T);

/// Lyapunov energy: explicit V = f(x) + 1/2 ||x' + beta grad f(x)||^2;
/// implicit V = f(x + beta x') + 1/2 ||x'||^2. The schedule is needed to
/// recover x' for the explicit system.
double energy(ContinuousSystem system, const PhaseState& s, const Objective& f,
              double beta, const GammaSchedule& gamma);

}  // namespace ihd
