#include "ihd/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <utility>

namespace ihd {

namespace {

bool finite(const Point& x) { return x.allFinite(); }

bool bitwise_equal(const Point& a, const Point& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

void require_cached_gradient(const SolverState& st) {
  if (!st.g_prev_valid && !bitwise_equal(st.x_prev, st.x_curr))
    throw std::logic_error("explicit step requires g_prev = grad(x_prev)");
}

// y = x + alpha (x - x_prev) - beta_k (g - g_prev); x_next = y - s g.
// Zero coefficients skip their terms so the beta = 0 paths of the explicit
// scheme, the implicit scheme, and the heavy-ball baseline execute identical
// float expressions (their traces must collapse bit-for-bit).
SolverState explicit_kernel(SolverState st, const Objective& f, double alpha,
                            double beta_k, double s) {
  Point g = f.grad(st.x_curr);
  if (!finite(g)) throw SolverDivergence(st.k);
  Point y = st.x_curr;
  if (alpha != 0.0) y += alpha * (st.x_curr - st.x_prev);
  if (beta_k != 0.0 && st.g_prev_valid) y -= beta_k * (g - st.g_prev);
  Point x_next = y - s * g;
  if (!finite(x_next)) throw SolverDivergence(st.k);
  SolverState out;
  out.x_prev = std::move(st.x_curr);
  out.x_curr = std::move(x_next);
  out.g_prev = std::move(g);
  out.g_prev_valid = true;
  out.k = st.k + 1;
  return out;
}

// y = x + alpha (x - x_prev); x_next = y - s grad(x + beta_e (x - x_prev)).
SolverState implicit_kernel(SolverState st, const Objective& f, double alpha,
                            double beta_e, double s) {
  Point xe = st.x_curr;
  if (beta_e != 0.0) xe += beta_e * (st.x_curr - st.x_prev);
  Point g = f.grad(xe);
  if (!finite(g)) throw SolverDivergence(st.k);
  Point y = st.x_curr;
  if (alpha != 0.0) y += alpha * (st.x_curr - st.x_prev);
  Point x_next = y - s * g;
  if (!finite(x_next)) throw SolverDivergence(st.k);
  SolverState out;
  out.x_prev = std::move(st.x_curr);
  out.x_curr = std::move(x_next);
  out.k = st.k + 1;
  return out;
}

void require_constant_gamma(const SolverParams& p, const char* what) {
  if (!p.gamma.is_constant())
    throw std::invalid_argument(std::string(what) + " requires a constant damping schedule");
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ISEHD: return "isehd";
    case Scheme::ISIHD: return "isihd";
    case Scheme::GD: return "gd";
    case Scheme::HBF: return "hbf";
    case Scheme::ISEHD_GENERAL: return "isehd_general";
    case Scheme::ISIHD_GENERAL: return "isihd_general";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "isehd") return Scheme::ISEHD;
  if (name == "isihd") return Scheme::ISIHD;
  if (name == "gd") return Scheme::GD;
  if (name == "hbf") return Scheme::HBF;
  if (name == "isehd_general") return Scheme::ISEHD_GENERAL;
  if (name == "isihd_general") return Scheme::ISIHD_GENERAL;
  throw std::invalid_argument("unknown scheme: " + name);
}

SolverState isehd_step(SolverState state, const Objective& f, const SolverParams& p) {
  require_cached_gradient(state);
  const Coefficients c = coefficients_at(p, state.k);
  return explicit_kernel(std::move(state), f, c.alpha, c.beta_k, c.s_k);
}

SolverState isihd_step(SolverState state, const Objective& f, const SolverParams& p) {
  const Coefficients c = coefficients_at(p, state.k);
  return implicit_kernel(std::move(state), f, c.alpha, p.beta / p.h, c.s_k);
}

SolverState gd_step(SolverState state, const Objective& f, const SolverParams& p) {
  require_constant_gamma(p, "gd_step");
  const Coefficients c = coefficients_at(p, state.k);
  return explicit_kernel(std::move(state), f, 0.0, 0.0, c.s_k);
}

SolverState hbf_step(SolverState state, const Objective& f, const SolverParams& p) {
  require_constant_gamma(p, "hbf_step");
  const Coefficients c = coefficients_at(p, state.k);
  return explicit_kernel(std::move(state), f, c.alpha, 0.0, c.s_k);
}

SolverState isehd_general_step(SolverState state, const Objective& f,
                               const GeneralCoefficients& coeffs) {
  require_cached_gradient(state);
  const long k = state.k;
  return explicit_kernel(std::move(state), f, coeffs.alpha(k), coeffs.beta_seq(k),
                         coeffs.s(k));
}

SolverState isihd_general_step(SolverState state, const Objective& f,
                               const GeneralCoefficients& coeffs) {
  const long k = state.k;
  return implicit_kernel(std::move(state), f, coeffs.alpha(k), coeffs.beta_seq(k),
                         coeffs.s(k));
}

namespace {

struct SeqStats {
  double s_min = std::numeric_limits<double>::infinity();
  double s_max = 0.0;
  double m = 0.0;  // sup of the scheme-specific combination
  std::string error;
};

template <typename Combine>
SeqStats scan_sequences(const GeneralCoefficients& coeffs, long k_max, Combine combine) {
  SeqStats st;
  for (long k = 0; k <= k_max; ++k) {
    const double a = coeffs.alpha(k);
    const double b = coeffs.beta_seq(k);
    const double sk = coeffs.s(k);
    if (!(a > 0.0)) { st.error = "alpha_k must be positive"; return st; }
    if (!(b >= 0.0)) { st.error = "beta_k must be nonnegative"; return st; }
    if (!(sk > 0.0)) { st.error = "s_k must be positive"; return st; }
    st.s_min = std::min(st.s_min, sk);
    st.s_max = std::max(st.s_max, sk);
    st.m = std::max(st.m, combine(a, b, sk));
  }
  return st;
}

ValidationResult check_general(const SeqStats& st, double L, const char* label) {
  if (!st.error.empty()) return {false, st.error};
  if (!(st.s_max < 2.0 / L)) {
    std::ostringstream os;
    os << "sup s_k = " << st.s_max << " must be < 2/L = " << (2.0 / L);
    return {false, os.str()};
  }
  const double bound = 1.0 / st.s_max - L / 2.0;
  if (!(st.m < bound)) {
    std::ostringstream os;
    os << label << " = " << st.m << " must be < 1/s_bar - L/2 = " << bound;
    return {false, os.str()};
  }
  return {true, "general coefficient conditions hold"};
}

}  // namespace

ValidationResult validate_general_isehd(const GeneralCoefficients& coeffs, double L,
                                        long k_max) {
  if (!(L > 0.0)) throw std::invalid_argument("Lipschitz constant required");
  const auto st = scan_sequences(coeffs, k_max,
                                 [L](double a, double b, double sk) { return (a + b * L) / sk; });
  return check_general(st, L, "sup((alpha_k + beta_k L)/s_k)");
}

ValidationResult validate_general_isihd(const GeneralCoefficients& coeffs, double L,
                                        long k_max) {
  if (!(L > 0.0)) throw std::invalid_argument("Lipschitz constant required");
  const auto st = scan_sequences(coeffs, k_max,
                                 [L](double a, double b, double sk) { return b * L + a / sk; });
  return check_general(st, L, "sup(beta_k L + alpha_k/s_k)");
}

Trace run(Scheme scheme, const Objective& f, const SolverParams& p, const Point& x0,
          const Point& x1, const GeneralCoefficients* coeffs) {
  check_params(p);
  if (x0.size() != f.dim || x1.size() != f.dim)
    throw std::invalid_argument("initial point dimension mismatch");
  const bool general =
      scheme == Scheme::ISEHD_GENERAL || scheme == Scheme::ISIHD_GENERAL;
  if (general && coeffs == nullptr)
    throw std::invalid_argument("general scheme requires coefficient sequences");
  const bool implicit = scheme == Scheme::ISIHD || scheme == Scheme::ISIHD_GENERAL;
  const bool caches_gradient =
      scheme == Scheme::ISEHD || scheme == Scheme::ISEHD_GENERAL;

  Trace tr;
  const auto t_start = std::chrono::steady_clock::now();
  const auto elapsed = [&t_start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
        .count();
  };

  Objective fs = f;  // scheme-facing gradient, counted separately from diagnostics
  fs.grad = [&tr, &f](const Point& x) {
    ++tr.grad_evals_scheme;
    return f.grad(x);
  };
  const auto grad_diag = [&tr, &f](const Point& x) {
    ++tr.grad_evals_diagnostic;
    return f.grad(x);
  };

  const double l_hat = f.lipschitz_L.value_or(0.0);
  const double c1 = 1.0 / (p.h * p.h) + p.beta * l_hat / p.h;

  // Returns true when the run should end (tolerance reached or non-finite value).
  const auto push = [&](long k, const Point& x, double res, double step_norm) {
    const double fv = f.eval(x);
    if (!std::isfinite(fv) || !std::isfinite(res)) {
      tr.diverged = true;
      return true;
    }
    TraceRecord r;
    r.k = k;
    r.x = x;
    r.f_value = fv;
    r.residual = res;
    r.step_norm = step_norm;
    r.lyapunov = fv + 0.5 * c1 * step_norm * step_norm;
    tr.records.push_back(std::move(r));
    tr.t_sec.push_back(elapsed());
    if (p.residual_tol > 0.0 && res <= p.residual_tol) {
      tr.stopped_by_tol = true;
      return true;
    }
    return false;
  };

  const long K = p.max_iter;
  if (K == 0) {
    push(0, x0, grad_diag(x0).norm(), 0.0);
    return tr;
  }

  SolverState st;
  st.x_prev = x0;
  st.x_curr = x1;
  st.k = 1;
  const bool same_init = bitwise_equal(x0, x1);

  const auto do_step = [&](SolverState s) {
    switch (scheme) {
      case Scheme::ISEHD: return isehd_step(std::move(s), fs, p);
      case Scheme::ISIHD: return isihd_step(std::move(s), fs, p);
      case Scheme::GD: return gd_step(std::move(s), fs, p);
      case Scheme::HBF: return hbf_step(std::move(s), fs, p);
      case Scheme::ISEHD_GENERAL: return isehd_general_step(std::move(s), fs, *coeffs);
      case Scheme::ISIHD_GENERAL: return isihd_general_step(std::move(s), fs, *coeffs);
    }
    throw std::logic_error("unreachable scheme");
  };

  try {
    if (!same_init) {
      Point g0;
      if (caches_gradient) {
        g0 = fs.grad(x0);  // the explicit scheme consumes grad(x_prev)
        if (!finite(g0)) throw SolverDivergence(0);
        st.g_prev = g0;
        st.g_prev_valid = true;
      } else {
        g0 = grad_diag(x0);
      }
      if (push(0, x0, g0.norm(), 0.0)) return tr;
    }

    for (long k = 1; k <= K; ++k) {
      Point xk;
      double res = 0.0;
      double snorm = 0.0;
      if (k < K) {
        const Point x_km1 = st.x_prev;
        st = do_step(std::move(st));
        xk = st.x_prev;
        snorm = (xk - x_km1).norm();
        res = implicit || !st.g_prev_valid ? grad_diag(xk).norm() : st.g_prev.norm();
      } else {
        xk = st.x_curr;
        snorm = (st.x_curr - st.x_prev).norm();
        res = implicit ? grad_diag(xk).norm() : fs.grad(xk).norm();
      }
      if (k == 1 && same_init) {
        if (push(0, x0, res, 0.0)) return tr;  // same point, same residual
      }
      if (push(k, xk, res, snorm)) return tr;
    }
  } catch (const SolverDivergence&) {
    tr.diverged = true;
  }
  return tr;
}

Trace run(Scheme scheme, const Objective& f, const SolverParams& p, const Point& x0) {
  return run(scheme, f, p, x0, x0);
}

}  // namespace ihd
