#include "ihd/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace ihd {

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("phase-space form requires beta > 0");
}

bool finite(const PhaseState& s) { return s.x.allFinite() && s.y.allFinite(); }

}  // namespace

PhaseDeriv isehd_vector_field(const PhaseState& s, const Objective& f, double beta,
                              const GammaSchedule& gamma) {
  require_beta(beta);
  if (!gamma.has_derivative())
    throw std::invalid_argument("explicit vector field requires gamma derivative");
  const double g = gamma.value(s.t);
  const double gd = gamma.derivative(s.t);
  PhaseDeriv d;
  d.dx = -beta * f.grad(s.x) + (1.0 / beta - g) * s.x - s.y / beta;
  d.dy = (1.0 / beta - g - beta * gd) * s.x - s.y / beta;
  return d;
}

PhaseDeriv isihd_vector_field(const PhaseState& s, const Objective& f, double beta,
                              const GammaSchedule& gamma) {
  require_beta(beta);
  const double g = gamma.value(s.t);
  PhaseDeriv d;
  d.dx = (s.y - s.x) / beta;
  d.dy = -beta * f.grad(s.y) - (1.0 / beta - g) * (s.x - s.y);
  return d;
}

PhaseState initial_phase(ContinuousSystem system, const Point& x0, const Point& v0,
                         const Objective& f, double beta, const GammaSchedule& gamma) {
  require_beta(beta);
  if (x0.size() != v0.size()) throw std::invalid_argument("x0/v0 dimension mismatch");
  PhaseState s;
  s.t = 0.0;
  s.x = x0;
  if (system == ContinuousSystem::ISEHD) {
    const double g0 = gamma.value(0.0);
    s.y = -beta * (v0 + beta * f.grad(x0)) + (1.0 - beta * g0) * x0;
  } else {
    s.y = x0 + beta * v0;
  }
  return s;
}

Point recover_velocity(ContinuousSystem system, const PhaseState& s, const Objective& f,
                       double beta, const GammaSchedule& gamma) {
  if (system == ContinuousSystem::ISEHD)
    return isehd_vector_field(s, f, beta, gamma).dx;
  require_beta(beta);
  return (s.y - s.x) / beta;
}

ContinuousTrace integrate(ContinuousSystem system, const PhaseState& phase0,
                          const Objective& f, double beta, const GammaSchedule& gamma,
                          double dt, double T) {
  require_beta(beta);
  if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("dt and T must be positive");
  const long n_steps = std::lround(T / dt);

  const auto field = [&](const PhaseState& s) {
    return system == ContinuousSystem::ISEHD ? isehd_vector_field(s, f, beta, gamma)
                                             : isihd_vector_field(s, f, beta, gamma);
  };
  const auto sample = [&](const PhaseState& s) {
    return ContinuousSample{s, recover_velocity(system, s, f, beta, gamma)};
  };

  ContinuousTrace tr;
  tr.samples.reserve(static_cast<std::size_t>(n_steps) + 1);
  PhaseState s = phase0;
  if (!finite(s)) {
    tr.diverged = true;
    return tr;
  }
  tr.samples.push_back(sample(s));

  for (long i = 1; i <= n_steps; ++i) {
    const PhaseDeriv k1 = field(s);
    PhaseState s2{s.t + 0.5 * dt, s.x + 0.5 * dt * k1.dx, s.y + 0.5 * dt * k1.dy};
    const PhaseDeriv k2 = field(s2);
    PhaseState s3{s.t + 0.5 * dt, s.x + 0.5 * dt * k2.dx, s.y + 0.5 * dt * k2.dy};
    const PhaseDeriv k3 = field(s3);
    PhaseState s4{s.t + dt, s.x + dt * k3.dx, s.y + dt * k3.dy};
    const PhaseDeriv k4 = field(s4);
    s.x += (dt / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    s.y += (dt / 6.0) * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    s.t = phase0.t + static_cast<double>(i) * dt;
    if (!finite(s)) {
      tr.diverged = true;
      return tr;
    }
    tr.samples.push_back(sample(s));
  }
  return tr;
}

double energy(ContinuousSystem system, const PhaseState& s, const Objective& f,
              double beta, const GammaSchedule& gamma) {
  const Point xdot = recover_velocity(system, s, f, beta, gamma);
  if (system == ContinuousSystem::ISEHD) {
    const Point w = xdot + beta * f.grad(s.x);
    return f.eval(s.x) + 0.5 * w.squaredNorm();
  }
  const Point z = s.x + beta * xdot;
  return f.eval(z) + 0.5 * xdot.squaredNorm();
}

}  // namespace ihd
