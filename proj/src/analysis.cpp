#include "ihd/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

#include "ihd/rng.hpp"

namespace ihd {

LyapunovReport lyapunov_sequence(const Trace& trace, Scheme scheme, const Objective& f,
                                 const SolverParams& p, double L) {
  (void)f;  // values come from the recorded trace; the signature mirrors the solver API
  if (scheme != Scheme::ISEHD && scheme != Scheme::ISIHD)
    throw std::invalid_argument("Lyapunov monitor covers the explicit and implicit schemes");
  const ValidationResult cond = validate_convergence_condition(p, L);
  if (!cond.ok) throw std::invalid_argument(cond.message);

  LyapunovReport rep;
  const double h = p.h;
  rep.c1 = scheme == Scheme::ISEHD ? 1.0 / (h * h) + p.beta * L / h
                                   : (p.beta / h) * L + 1.0 / (h * h);
  const double c = p.gamma.lower_c;
  const double s_bar = h * h / (1.0 + c * h);
  rep.delta = 1.0 / s_bar - L / 2.0 - rep.c1;

  std::vector<double> step_norms;
  std::vector<long> ks;
  for (const TraceRecord& r : trace.records) {
    if (r.k < 1) continue;
    rep.values.push_back(r.f_value + 0.5 * rep.c1 * r.step_norm * r.step_norm);
    step_norms.push_back(r.step_norm);
    ks.push_back(r.k);
  }
  if (rep.values.empty()) return rep;

  const double tol = 1e-10 * std::max(1.0, std::abs(rep.values.front()));
  for (std::size_t i = 1; i < rep.values.size(); ++i) {
    const double bound = rep.values[i - 1] - rep.delta * step_norms[i] * step_norms[i];
    const double gap = rep.values[i] - bound;
    if (gap > tol) rep.violations.emplace_back(ks[i], gap);
  }
  return rep;
}

RateEstimate estimate_rate(const std::vector<double>& distances, RateModel model) {
  const long n = static_cast<long>(distances.size());
  return estimate_rate(distances, model, n / 2, n);
}

RateEstimate estimate_rate(const std::vector<double>& distances, RateModel model,
                           long window_begin, long window_end) {
  const long n = static_cast<long>(distances.size());
  if (window_begin < 0 || window_end > n || window_begin >= window_end)
    throw std::invalid_argument("invalid fit window");
  if (window_end - window_begin < 10)
    throw std::invalid_argument("rate fit needs at least 10 samples in the window");
  for (double d : distances)
    if (!(d > 0.0)) throw std::invalid_argument("distances must be positive");
  if (model == RateModel::POWER && window_begin < 1)
    throw std::invalid_argument("power-law fit requires indices k >= 1");

  std::vector<double> xs, ys;
  xs.reserve(window_end - window_begin);
  ys.reserve(window_end - window_begin);
  for (long k = window_begin; k < window_end; ++k) {
    xs.push_back(model == RateModel::LINEAR ? static_cast<double>(k)
                                            : std::log(static_cast<double>(k)));
    ys.push_back(std::log(distances[k]));
  }
  // A constant response has zero variance by definition; detect it before the
  // accumulated mean can round it into a spurious nonzero spread.
  if (*std::min_element(ys.begin(), ys.end()) == *std::max_element(ys.begin(), ys.end()))
    throw std::invalid_argument("degenerate fit: zero variance");
  const double m = static_cast<double>(xs.size());
  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x_mean += xs[i];
    y_mean += ys[i];
  }
  x_mean /= m;
  y_mean /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - x_mean;
    const double dy = ys[i] - y_mean;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("degenerate fit: zero variance");
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - y_mean - slope * (xs[i] - x_mean);
    ss_res += r * r;
  }
  RateEstimate est;
  est.model = model;
  est.value = model == RateModel::LINEAR ? std::exp(slope) : slope;
  est.r_squared = 1.0 - ss_res / syy;
  est.window_begin = window_begin;
  est.window_end = window_end;
  return est;
}

std::pair<std::complex<double>, std::complex<double>> solve_quadratic(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(root, b));
    if (q == 0.0) return {std::complex<double>(0.0), std::complex<double>(-b)};
    return {std::complex<double>(q), std::complex<double>(c / q)};
  }
  const double re = -0.5 * b;
  const double im = 0.5 * std::sqrt(-disc);
  return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

namespace {

constexpr double kHyperbolicTol = 1e-9;

SpectralClassification classify_magnitudes(const std::vector<double>& mags) {
  SpectralClassification out;
  out.multipliers = mags;
  for (double m : mags) {
    if (m > 1.0) out.is_unstable = true;
    if (std::abs(m - 1.0) <= kHyperbolicTol) out.is_hyperbolic = false;
  }
  return out;
}

}  // namespace

SpectralClassification classify_fixed_point_discrete(Scheme scheme,
                                                     const std::vector<double>& hessian_eigs,
                                                     double alpha, double beta_c, double s) {
  bool is_explicit;
  switch (scheme) {
    case Scheme::ISEHD:
    case Scheme::ISEHD_GENERAL: is_explicit = true; break;
    case Scheme::ISIHD:
    case Scheme::ISIHD_GENERAL: is_explicit = false; break;
    default:
      throw std::invalid_argument("classifier covers the explicit and implicit schemes");
  }
  const double ratio = is_explicit ? beta_c / (beta_c + s) : beta_c / (beta_c + 1.0);
  if (std::abs(alpha - ratio) <= 1e-12 * (1.0 + std::abs(alpha)))
    throw std::invalid_argument("excluded by hypothesis beta != 1/c");

  std::vector<double> mags;
  mags.reserve(2 * hessian_eigs.size());
  for (double eta : hessian_eigs) {
    double b, c0;
    if (is_explicit) {
      b = eta * (beta_c + s) - (1.0 + alpha);
      c0 = alpha - eta * beta_c;
    } else {
      b = s * (1.0 + beta_c) * eta - (1.0 + alpha);
      c0 = alpha - s * beta_c * eta;
    }
    if (b * b - 4.0 * c0 < 0.0) {
      const double mag = std::sqrt(c0);
      mags.push_back(mag);
      mags.push_back(mag);
    } else {
      const auto roots = solve_quadratic(b, c0);
      mags.push_back(std::abs(roots.first.real()));
      mags.push_back(std::abs(roots.second.real()));
    }
  }
  return classify_magnitudes(mags);
}

SpectralClassification classify_equilibrium_continuous(const std::vector<double>& hessian_eigs,
                                                       double c, double beta) {
  if (!(c > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("c and beta must be positive");
  if (std::abs(beta * c - 1.0) <= 1e-12)
    throw std::invalid_argument("excluded by hypothesis beta != 1/c");
  SpectralClassification out;
  out.multipliers.reserve(2 * hessian_eigs.size());
  for (double eta : hessian_eigs) {
    const double b = c + eta * beta;
    double re1, re2;
    if (b * b - 4.0 * eta < 0.0) {
      re1 = re2 = -0.5 * b;
    } else {
      const auto roots = solve_quadratic(b, eta);
      re1 = roots.first.real();
      re2 = roots.second.real();
    }
    out.multipliers.push_back(re1);
    out.multipliers.push_back(re2);
    if (re1 > 0.0 || re2 > 0.0) out.is_unstable = true;
    if (std::abs(re1) <= kHyperbolicTol || std::abs(re2) <= kHyperbolicTol)
      out.is_hyperbolic = false;
  }
  return out;
}

namespace {

MonteCarloSample run_one_sample(Scheme scheme, const Objective& f, const SolverParams& p,
                                const Box& box, std::uint64_t seed, long index,
                                double classify_tol) {
  SplitMix64 g = SplitMix64::stream(seed, static_cast<std::uint64_t>(index));
  Point x0(f.dim);
  for (int d = 0; d < f.dim; ++d) x0[d] = g.uniform(box.lo[d], box.hi[d]);

  const Trace tr = run(scheme, f, p, x0);
  MonteCarloSample s;
  if (tr.records.empty()) {
    s.endpoint = x0;
    s.residual = std::numeric_limits<double>::infinity();
    return s;
  }
  const TraceRecord& last = tr.records.back();
  s.endpoint = last.x;
  s.iters = last.k;
  s.residual = last.residual;
  if (!tr.diverged && s.residual < classify_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(f.hess(s.endpoint));
    const double lam_min = es.eigenvalues().minCoeff();
    if (lam_min > 0.0)
      s.cls = EndpointClass::MINIMUM;
    else if (lam_min < 0.0)
      s.cls = EndpointClass::STRICT_SADDLE;
    else
      s.cls = EndpointClass::NONCONVERGED;
  } else {
    s.cls = EndpointClass::NONCONVERGED;
  }
  return s;
}

}  // namespace

MonteCarloReport montecarlo_avoidance(Scheme scheme, const Objective& f,
                                      const SolverParams& p, const Box& init_box,
                                      long n_samples, std::uint64_t seed,
                                      double classify_tol, bool parallel) {
  if (!f.has_hess()) throw std::invalid_argument("endpoint classification requires a Hessian");
  if (!(classify_tol > 0.0)) throw std::invalid_argument("classify_tol must be positive");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be positive");
  if (init_box.lo.size() != f.dim || init_box.hi.size() != f.dim)
    throw std::invalid_argument("box dimension mismatch");

  MonteCarloReport rep;
  rep.samples.resize(n_samples);

  if (parallel && n_samples > 1) {
    const long n_workers =
        std::min<long>(n_samples, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> futs;
    futs.reserve(n_workers);
    for (long w = 0; w < n_workers; ++w) {
      futs.push_back(std::async(std::launch::async, [&, w] {
        for (long i = w; i < n_samples; i += n_workers)
          rep.samples[i] = run_one_sample(scheme, f, p, init_box, seed, i, classify_tol);
      }));
    }
    for (auto& fut : futs) fut.get();
  } else {
    for (long i = 0; i < n_samples; ++i)
      rep.samples[i] = run_one_sample(scheme, f, p, init_box, seed, i, classify_tol);
  }

  for (const MonteCarloSample& s : rep.samples) {
    switch (s.cls) {
      case EndpointClass::MINIMUM: ++rep.n_to_min; break;
      case EndpointClass::STRICT_SADDLE: ++rep.n_to_strict_saddle; break;
      case EndpointClass::NONCONVERGED: ++rep.n_nonconverged; break;
    }
  }
  return rep;
}

}  // namespace ihd
