// Acceptance harness: runs every shipped acceptance criterion at its pinned
// tolerance and prints one PASS/FAIL line per criterion. Exits nonzero when
// any criterion fails.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "ihd/analysis.hpp"
#include "ihd/dynamics.hpp"
#include "ihd/problems.hpp"
#include "ihd/rng.hpp"
#include "ihd/solvers.hpp"

#include "../support/oracles.hpp"

using namespace ihd;

namespace {

using Clock = std::chrono::steady_clock;

struct Result {
  bool pass = false;
  std::string detail;
};

std::string strf(const char* fmt, ...) {
  char buf[768];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

template <typename Fn>
void check(int id, const char* what, double time_limit_sec, Fn&& fn, int& failures) {
  const auto t0 = Clock::now();
  Result r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = strf("exception: %s", e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (r.pass && time_limit_sec > 0.0 && secs >= time_limit_sec) {
    r.pass = false;
    r.detail += strf("%sruntime bound %.0fs exceeded", r.detail.empty() ? "" : "; ",
                     time_limit_sec);
  }
  std::printf("criterion %d: %s - %s%s%s [%.2fs]\n", id, r.pass ? "PASS" : "FAIL", what,
              r.detail.empty() ? "" : ": ", r.detail.c_str(), secs);
  std::fflush(stdout);
  if (!r.pass) ++failures;
}

bool traces_identical(const Trace& a, const Trace& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const TraceRecord& ra = a.records[i];
    const TraceRecord& rb = b.records[i];
    if (ra.k != rb.k || !oracles::bitwise_equal(ra.x, rb.x)) return false;
    if (ra.f_value != rb.f_value || ra.residual != rb.residual ||
        ra.step_norm != rb.step_norm || ra.lyapunov != rb.lyapunov)
      return false;
  }
  return true;
}

SolverParams quad_params(long max_iter) {
  SolverParams p;
  p.h = 0.2;
  p.beta = 0.1;
  p.gamma = GammaSchedule::constant(3.0);
  p.max_iter = max_iter;
  return p;
}

double fd_worst(const Objective& f, double lo, double hi, int n_points, std::uint64_t seed) {
  SplitMix64 g(seed);
  double worst = 0.0;
  for (int t = 0; t < n_points; ++t) {
    Point x(f.dim);
    for (int d = 0; d < f.dim; ++d) x[d] = g.uniform(lo, hi);
    const Eigen::VectorXd gfd = oracles::fd_gradient(f, x, 1e-5);
    worst = std::max(worst, oracles::max_rel_err(f.grad(x), gfd));
  }
  return worst;
}

// Closed-form endpoint of the implicit linear phase flow z' = Bz via the
// eigendecomposition of B.
Eigen::VectorXd expm_endpoint(const Eigen::MatrixXd& B, const Eigen::VectorXd& z0, double T) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(B);
  const Eigen::MatrixXcd V = es.eigenvectors();
  const Eigen::VectorXcd w = V.partialPivLu().solve(z0.cast<std::complex<double>>().eval());
  const Eigen::VectorXcd grown =
      (es.eigenvalues().array() * T).exp().matrix().asDiagonal() * w;
  return (V * grown).real();
}

}  // namespace

int main() {
  Eigen::MatrixXd Aq;
  Eigen::VectorXd bq, x0q;
  oracles::random_spd_quadratic(10, 12345, Aq, bq, x0q);
  const Objective fq = quadratic(Aq, bq);
  const double Lq = 10.0;  // extreme eigenvalues pinned by construction

  int failures = 0;

  check(1, "discrete energy decrease has zero violations on the SPD quadratic "
           "(isehd and isihd, 1e4 iterations)", 1.0, [&] {
    Result r;
    const SolverParams p = quad_params(10000);
    std::size_t ve = 0, vi = 0;
    {
      const Trace tr = run(Scheme::ISEHD, fq, p, x0q);
      if (tr.diverged) {
        r.detail = "isehd diverged";
        return r;
      }
      ve = lyapunov_sequence(tr, Scheme::ISEHD, fq, p, Lq).violations.size();
    }
    {
      const Trace tr = run(Scheme::ISIHD, fq, p, x0q);
      if (tr.diverged) {
        r.detail = "isihd diverged";
        return r;
      }
      vi = lyapunov_sequence(tr, Scheme::ISIHD, fq, p, Lq).violations.size();
    }
    r.pass = ve == 0 && vi == 0;
    r.detail = strf("violations isehd=%zu isihd=%zu", ve, vi);
    return r;
  }, failures);

  check(2, "beta=0 collapses isehd and isihd onto hbf bit-for-bit "
           "(Rosenbrock and quadratic, 1e3 iterations)", 0.0, [&] {
    Result r;
    bool ok = true;
    {
      SolverParams p;
      p.h = 1e-3;
      p.beta = 0.0;
      p.gamma = GammaSchedule::constant(3.0);
      p.max_iter = 1000;
      const Objective ros = rosenbrock();
      Point x0(2);
      x0 << -1.5, 0.0;
      const Trace te = run(Scheme::ISEHD, ros, p, x0);
      const Trace ti = run(Scheme::ISIHD, ros, p, x0);
      const Trace th = run(Scheme::HBF, ros, p, x0);
      ok = ok && traces_identical(te, th) && traces_identical(ti, th);
    }
    {
      SolverParams p = quad_params(1000);
      p.beta = 0.0;
      const Trace te = run(Scheme::ISEHD, fq, p, x0q);
      const Trace ti = run(Scheme::ISIHD, fq, p, x0q);
      const Trace th = run(Scheme::HBF, fq, p, x0q);
      ok = ok && traces_identical(te, th) && traces_identical(ti, th);
    }
    r.pass = ok;
    return r;
  }, failures);

  check(3, "analytic gradients match central differences below 1e-4 "
           "(rosenbrock, double_well, quadratic, 8x8 deblur; 20 points each)", 0.0, [&] {
    Result r;
    const double w_ros = fd_worst(rosenbrock(), -2.0, 2.0, 20, 301);
    const double w_dw = fd_worst(double_well(), -2.0, 2.0, 20, 302);
    const double w_quad = fd_worst(fq, -3.0, 3.0, 20, 303);
    DeblurProblem dp;
    dp.kernel = gaussian_kernel(5, 1.5);
    dp.b = synthesize_observation(phantom(8, 8), dp.kernel, 0.01, 42);
    const double w_deb = fd_worst(deblur_objective(dp), 0.0, 1.0, 20, 304);
    r.pass = w_ros < 1e-4 && w_dw < 1e-4 && w_quad < 1e-4 && w_deb < 1e-4;
    r.detail = strf("max rel err rosenbrock=%.2e double_well=%.2e quadratic=%.2e deblur=%.2e",
                    w_ros, w_dw, w_quad, w_deb);
    return r;
  }, failures);

  check(4, "iterate distances fit a linear rate rho < 1 with r^2 > 0.99 on the "
           "quadratic (both schemes)", 0.0, [&] {
    Result r;
    const Eigen::VectorXd xstar = Aq.ldlt().solve(bq);
    const SolverParams p = quad_params(200);
    r.pass = true;
    for (const Scheme s : {Scheme::ISEHD, Scheme::ISIHD}) {
      const Trace tr = run(s, fq, p, x0q);
      std::vector<double> dist;
      dist.reserve(tr.records.size());
      for (const TraceRecord& rec : tr.records) dist.push_back((rec.x - xstar).norm());
      const RateEstimate est = estimate_rate(dist, RateModel::LINEAR);
      r.pass = r.pass && est.value < 1.0 && est.r_squared > 0.99;
      r.detail += strf("%s%s rho=%.4f r2=%.5f", r.detail.empty() ? "" : "; ",
                       scheme_name(s), est.value, est.r_squared);
    }
    return r;
  }, failures);

  check(5, "strict saddles are unstable for every valid parameter draw, discrete "
           "and continuous (1000 draws)", 1.0, [&] {
    Result r;
    SplitMix64 g(505);
    long checked = 0;
    while (checked < 1000) {
      const double c = g.uniform(0.5, 5.0);
      const double L = g.uniform(1.0, 20.0);
      const double beta = g.uniform(0.05, 0.95) * (c / L);
      if (std::abs(beta * c - 1.0) <= 1e-6) continue;
      const double hmax = std::min(2.0 * (c / L - beta), 1.0 / (L * beta));
      SolverParams p;
      p.h = g.uniform(0.05, 0.95) * hmax;
      p.beta = beta;
      p.gamma = GammaSchedule::constant(c);
      const double eta = -g.uniform(0.05, 1.0) * L;
      if (!validate_saddle_condition(p, L).ok) {
        r.detail = strf("draw %ld unexpectedly rejected by the validator", checked);
        return r;
      }
      const Coefficients co = coefficients_at(p, 0);
      const auto de =
          classify_fixed_point_discrete(Scheme::ISEHD, {eta}, co.alpha, co.beta_k, co.s_k);
      const auto di =
          classify_fixed_point_discrete(Scheme::ISIHD, {eta}, co.alpha, beta / p.h, co.s_k);
      const auto ct = classify_equilibrium_continuous({eta}, c, beta);
      if (!de.is_unstable || !di.is_unstable || !ct.is_unstable) {
        r.detail = strf("stable classification at c=%.4f L=%.4f beta=%.4f h=%.4f eta=%.4f",
                        c, L, beta, p.h, eta);
        return r;
      }
      ++checked;
    }
    r.pass = true;
    r.detail = "all 1000 draws unstable in all three classifiers";
    return r;
  }, failures);

  check(6, "1000-sample double-well study reaches no strict saddle under valid "
           "parameters (both schemes)", 30.0, [&] {
    Result r;
    const Objective dw = double_well();
    SolverParams p;
    p.h = 0.1;
    p.beta = 0.05;
    p.gamma = GammaSchedule::constant(3.0);
    p.max_iter = 3000;
    p.residual_tol = 1e-6;
    if (!validate_saddle_condition(p, 11.0).ok) {
      r.detail = "pinned parameters rejected by the saddle validator";
      return r;
    }
    Box box;
    box.lo = Point::Constant(2, -2.0);
    box.hi = Point::Constant(2, 2.0);
    r.pass = true;
    for (const Scheme s : {Scheme::ISEHD, Scheme::ISIHD}) {
      const MonteCarloReport rep =
          montecarlo_avoidance(s, dw, p, box, 1000, 2027, 1e-6, true);
      r.pass = r.pass && rep.n_to_strict_saddle == 0;
      r.detail += strf("%s%s min=%ld saddle=%ld nonconv=%ld", r.detail.empty() ? "" : "; ",
                       scheme_name(s), rep.n_to_min, rep.n_to_strict_saddle,
                       rep.n_nonconverged);
    }
    return r;
  }, failures);

  check(7, "Rosenbrock benchmark: inertial schemes end 10x below gd in residual and "
           "oscillate less than hbf near the end", 5.0, [&] {
    Result r;
    SolverParams p;
    p.h = 1e-3;
    p.beta = 0.04;
    p.gamma = GammaSchedule::constant(3.0);
    p.max_iter = 20000;
    const Objective ros = rosenbrock();
    Point x0(2);
    x0 << -1.5, 0.0;
    const Trace te = run(Scheme::ISEHD, ros, p, x0);
    const Trace ti = run(Scheme::ISIHD, ros, p, x0);
    const Trace tg = run(Scheme::GD, ros, p, x0);
    const Trace th = run(Scheme::HBF, ros, p, x0);
    for (const Trace* tr : {&te, &ti, &tg, &th})
      if (tr->records.size() != 20001 || tr->diverged) {
        r.detail = "unexpected trace shape";
        return r;
      }
    const double re = te.records.back().residual;
    const double ri = ti.records.back().residual;
    const double rg = tg.records.back().residual;
    const bool part_a = re <= rg / 10.0 && ri <= rg / 10.0;

    // Sign changes of the y-velocity v_k = x_k - x_{k-1} over k in (15000, 20000].
    const auto flips = [](const Trace& tr) {
      long n = 0;
      for (long k = 15001; k + 1 <= 20000; ++k) {
        const double a = tr.records[k].x[1] - tr.records[k - 1].x[1];
        const double b = tr.records[k + 1].x[1] - tr.records[k].x[1];
        if (a * b < 0.0) ++n;
      }
      return n;
    };
    const long fe = flips(te), fi = flips(ti), fh = flips(th);
    const bool part_b = fe < fh && fi < fh;
    r.pass = part_a && part_b;
    r.detail = strf(
        "final residuals gd=%.3e isehd=%.3e isihd=%.3e (10x bound %s); "
        "y-velocity sign flips over the last 5000 iterations: isehd=%ld isihd=%ld hbf=%ld "
        "(strict inequality vs hbf %s)",
        rg, re, ri, part_a ? "met" : "unmet", fe, fi, fh, part_b ? "met" : "unmet");
    return r;
  }, failures);

  check(8, "64x64 deblurring: inertial residuals below gd from iteration 50 on, "
           "with lower final objective", 60.0, [&] {
    Result r;
    DeblurProblem dp;
    dp.kernel = gaussian_kernel(5, 1.5);
    dp.b = synthesize_observation(phantom(64, 64), dp.kernel, 0.01, 42);
    const Objective f8 = deblur_objective(dp);
    SolverParams p;
    p.h = 0.5;
    p.beta = 1.3;
    p.gamma = GammaSchedule::constant(0.25);
    p.max_iter = 250;
    const Point z0 = Point::Zero(f8.dim);
    const Trace te = run(Scheme::ISEHD, f8, p, z0);
    const Trace ti = run(Scheme::ISIHD, f8, p, z0);
    const Trace tg = run(Scheme::GD, f8, p, z0);
    for (const Trace* tr : {&te, &ti, &tg})
      if (tr->records.size() != 251 || tr->diverged) {
        r.detail = "unexpected trace shape";
        return r;
      }
    bool below = true;
    for (std::size_t k = 50; k < 251; ++k)
      below = below && te.records[k].residual < tg.records[k].residual &&
              ti.records[k].residual < tg.records[k].residual;
    const bool final_obj = te.records.back().f_value < tg.records.back().f_value &&
                           ti.records.back().f_value < tg.records.back().f_value;
    r.pass = below && final_obj;
    r.detail = strf("final f gd=%.8f isehd=%.8f isihd=%.8f; residual ordering from k=50 %s",
                    tg.records.back().f_value, te.records.back().f_value,
                    ti.records.back().f_value, below ? "held" : "broken");
    return r;
  }, failures);

  check(9, "RK4 energy never rises beyond 10*dt^4 per step; halving dt cuts the "
           "endpoint error by 12x to 20x", 0.0, [&] {
    Result r;
    const double beta = 0.1;
    const GammaSchedule gamma = GammaSchedule::constant(1.0);
    const double dt = 1e-3, T = 20.0;
    const double bound = 10.0 * dt * dt * dt * dt;
    double worst_inc = -1.0;
    for (const ContinuousSystem sys : {ContinuousSystem::ISEHD, ContinuousSystem::ISIHD}) {
      const PhaseState phase0 =
          initial_phase(sys, x0q, Point::Zero(10), fq, beta, gamma);
      const ContinuousTrace tr = integrate(sys, phase0, fq, beta, gamma, dt, T);
      if (tr.diverged) {
        r.detail = "integration diverged";
        return r;
      }
      double prev = energy(sys, tr.samples.front().state, fq, beta, gamma);
      for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        const double e = energy(sys, tr.samples[i].state, fq, beta, gamma);
        worst_inc = std::max(worst_inc, e - prev);
        prev = e;
      }
    }
    const bool decay_ok = worst_inc <= bound;

    // Fourth-order consistency on a 2x2 linear problem with a closed-form flow.
    Eigen::MatrixXd A2(2, 2);
    A2 << 2.0, 0.5, 0.5, 1.0;
    const Objective f2 = quadratic(A2, Eigen::VectorXd::Zero(2));
    Point x0(2);
    x0 << 1.0, -2.0;
    const PhaseState phase0 =
        initial_phase(ContinuousSystem::ISIHD, x0, Point::Zero(2), f2, beta, gamma);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 4);
    const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
    B.topLeftCorner(2, 2) = -I2 / beta;
    B.topRightCorner(2, 2) = I2 / beta;
    B.bottomLeftCorner(2, 2) = -(1.0 / beta - 1.0) * I2;
    B.bottomRightCorner(2, 2) = -beta * A2 + (1.0 / beta - 1.0) * I2;
    Eigen::VectorXd z0(4);
    z0 << phase0.x, phase0.y;
    const Eigen::VectorXd x_exact = expm_endpoint(B, z0, 1.0).head(2);
    const auto endpoint_err = [&](double step) {
      const ContinuousTrace tr =
          integrate(ContinuousSystem::ISIHD, phase0, f2, beta, gamma, step, 1.0);
      return (tr.samples.back().state.x - x_exact).norm();
    };
    const double ratio = endpoint_err(0.02) / endpoint_err(0.01);
    const bool order_ok = ratio >= 12.0 && ratio <= 20.0;

    r.pass = decay_ok && order_ok;
    r.detail = strf("max energy increment=%.3e (bound %.1e); error ratio e(0.02)/e(0.01)=%.2f",
                    worst_inc, bound, ratio);
    return r;
  }, failures);

  check(10, "blur and difference operators satisfy their adjoint identities at "
            "relative 1e-10 (100 trials, 16x16)", 0.0, [&] {
    Result r;
    const Kernel ker = gaussian_kernel(5, 1.5);
    SplitMix64 g(1010);
    const auto rnd16 = [&] {
      Image u(16, 16);
      for (Eigen::Index i = 0; i < u.pix.size(); ++i) u.pix[i] = g.uniform(-1.0, 1.0);
      return u;
    };
    struct OpPair {
      const char* name;
      std::function<Image(const Image&)> fwd, adj;
    };
    const OpPair ops[3] = {
        {"blur", [&](const Image& u) { return blur_apply(ker, u); },
         [&](const Image& v) { return blur_adjoint(ker, v); }},
        {"kx", kx_apply, kx_adjoint},
        {"ky", ky_apply, ky_adjoint},
    };
    double worst = 0.0;
    for (int t = 0; t < 100; ++t)
      for (const OpPair& op : ops) {
        const Image u = rnd16(), v = rnd16();
        const double lhs = op.fwd(u).pix.dot(v.pix);
        const double rhs = u.pix.dot(op.adj(v).pix);
        const double rel =
            std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
        worst = std::max(worst, rel);
      }
    r.pass = worst <= 1e-10;
    r.detail = strf("worst relative defect=%.2e", worst);
    return r;
  }, failures);

  if (failures == 0)
    std::printf("all 10 criteria passed\n");
  else
    std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
