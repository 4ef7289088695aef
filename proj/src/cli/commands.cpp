#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "ihd/analysis.hpp"
#include "ihd/cli.hpp"
#include "ihd/dynamics.hpp"
#include "ihd/problems.hpp"
#include "ihd/rng.hpp"

namespace fs = std::filesystem;

namespace ihd::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

/// List value broadcast to `dim` entries when given as a single scalar.
Point cfg_point(const Config& cfg, const std::string& key, int dim, const Point& def) {
  const std::vector<double> vals = cfg_list(cfg, key);
  if (vals.empty()) return def;
  Point p(dim);
  if (vals.size() == 1) {
    p.setConstant(vals[0]);
    return p;
  }
  if (static_cast<int>(vals.size()) != dim)
    throw ConfigError(key + ": expected 1 or " + std::to_string(dim) + " values, got " +
                      std::to_string(vals.size()));
  for (int i = 0; i < dim; ++i) p[i] = vals[i];
  return p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw ConfigError("write failed for " + path.string());
}

double resolve_lipschitz(const Config& cfg, const Objective& f, const Point& x0,
                         std::string& source) {
  const double override_l = cfg_double(cfg, "problem.lipschitz", 0.0);
  if (override_l > 0.0) {
    source = "config";
    return override_l;
  }
  if (f.lipschitz_L) {
    source = "provided";
    return *f.lipschitz_L;
  }
  Box box;
  box.lo = x0.array() - 2.0;
  box.hi = x0.array() + 2.0;
  source = "estimated";
  return estimate_lipschitz(f, box, 64, 0x4c69707363ULL);
}

}  // namespace

Config resolve_config(const CommonOpts& opts) {
  Config cfg;
  if (!opts.preset.empty()) {
    const auto& table = presets();
    const auto it = table.find(opts.preset);
    if (it == table.end()) {
      std::string names;
      for (const auto& [k, v] : table) names += (names.empty() ? "" : ", ") + k;
      throw ConfigError("unknown preset: " + opts.preset + " (available: " + names + ")");
    }
    cfg = parse_config_text(it->second);
  }
  if (!opts.config_path.empty()) {
    Config file_cfg = parse_config_file(opts.config_path);
    overlay(cfg, file_cfg);
  }
  if (opts.seed_set) cfg["seed"] = std::to_string(opts.seed);
  return cfg;
}

BuiltProblem build_problem(const Config& cfg) {
  const std::string name = cfg_string(cfg, "problem", "");
  if (name.empty())
    throw ConfigError("problem is required (rosenbrock, quadratic, double_well, deblur)");

  BuiltProblem bp;
  bp.name = name;
  Point default_x0;
  if (name == "rosenbrock") {
    bp.f = rosenbrock();
    default_x0 = Point(2);
    default_x0 << -1.5, 0.0;
  } else if (name == "quadratic") {
    std::vector<double> diag = cfg_list(cfg, "quadratic.diag");
    if (diag.empty()) diag = {1.0, 10.0};
    const int d = static_cast<int>(diag.size());
    Matrix a = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) a(i, i) = diag[i];
    const Point b = cfg_point(cfg, "quadratic.b", d, Point::Zero(d));
    bp.f = quadratic(a, b);
    default_x0 = Point::Ones(d);
  } else if (name == "double_well") {
    bp.f = double_well();
    default_x0 = Point(2);
    default_x0 << -1.5, 1.0;
  } else if (name == "deblur") {
    const Kernel ker = gaussian_kernel(static_cast<int>(cfg_long(cfg, "deblur.kernel_size", 5)),
                                       cfg_double(cfg, "deblur.kernel_sigma", 1.5));
    Image u_true;
    const std::string img_path = cfg_string(cfg, "deblur.image", "");
    if (!img_path.empty()) {
      u_true = pgm_read(img_path);
    } else {
      u_true = phantom(static_cast<int>(cfg_long(cfg, "deblur.nx", 256)),
                       static_cast<int>(cfg_long(cfg, "deblur.ny", 256)));
    }
    DeblurProblem prob;
    prob.kernel = ker;
    prob.mu = cfg_double(cfg, "deblur.mu", 5e-5);
    prob.rho = cfg_double(cfg, "deblur.rho", 1e-3);
    prob.b = synthesize_observation(
        u_true, ker, cfg_double(cfg, "deblur.noise_sigma", 0.01),
        static_cast<std::uint64_t>(cfg_long(cfg, "deblur.noise_seed", 42)));
    bp.f = deblur_objective(prob);
    default_x0 = Point::Zero(bp.f.dim);
  } else {
    throw ConfigError("unknown problem: " + name +
                      " (expected rosenbrock, quadratic, double_well, deblur)");
  }

  const double override_l = cfg_double(cfg, "problem.lipschitz", 0.0);
  if (override_l > 0.0) bp.f.lipschitz_L = override_l;

  bp.x0 = cfg_point(cfg, "init.x0", bp.f.dim, default_x0);
  bp.x1 = cfg_point(cfg, "init.x1", bp.f.dim, bp.x0);
  return bp;
}

SolverParams build_params(const Config& cfg) {
  SolverParams p;
  p.h = cfg_double(cfg, "solver.h", 1e-3);
  p.beta = cfg_double(cfg, "solver.beta", 0.0);
  const double g0 = cfg_double(cfg, "solver.gamma_const", 1.0);
  if (!(g0 > 0.0)) throw ConfigError("solver.gamma_const must be positive");
  p.gamma = GammaSchedule::constant(g0);
  p.max_iter = cfg_long(cfg, "solver.max_iter", 1000);
  p.residual_tol = cfg_double(cfg, "solver.tol", 0.0);
  return p;
}

std::vector<Scheme> build_schemes(const Config& cfg) {
  const std::string spec = cfg_string(cfg, "schemes", "isehd, isihd, gd, hbf");
  std::vector<Scheme> out;
  for (const std::string& n : split_names(spec)) {
    try {
      out.push_back(scheme_from_name(n));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(e.what()) +
                        " (expected isehd, isihd, gd, hbf)");
    }
  }
  if (out.empty()) throw ConfigError("schemes: empty list");
  return out;
}

int cmd_run(const CommonOpts& opts) {
  try {
    const Config cfg = resolve_config(opts);
    const BuiltProblem bp = build_problem(cfg);
    const SolverParams params = build_params(cfg);
    const std::vector<Scheme> schemes = build_schemes(cfg);
    fs::create_directories(opts.out_dir);

    std::string l_source;
    const double L = resolve_lipschitz(cfg, bp.f, bp.x0, l_source);
    ValidationResult conv{false, "Lipschitz estimate is zero"};
    if (L > 0.0) conv = validate_convergence_condition(params, L);
    if (!conv.ok) {
      std::cerr << "warning: " << conv.message << "\n";
      if (opts.strict) return kExitNumerical;
    }

    std::vector<Trace> traces(schemes.size());
    const auto run_one = [&](std::size_t i) {
      traces[i] = run(schemes[i], bp.f, params, bp.x0, bp.x1);
    };
    if (opts.parallel && schemes.size() > 1) {
      std::vector<std::future<void>> futs;
      for (std::size_t i = 0; i < schemes.size(); ++i)
        futs.push_back(std::async(std::launch::async, run_one, i));
      for (auto& f : futs) f.get();
    } else {
      for (std::size_t i = 0; i < schemes.size(); ++i) run_one(i);
    }

    std::string summary;
    summary += "problem=" + bp.name + "\n";
    summary += "dim=" + std::to_string(bp.f.dim) + "\n";
    summary += "lipschitz_L=" + fmt(L) + "\n";
    summary += "lipschitz_source=" + l_source + "\n";
    summary += std::string("validation.convergence=") + (conv.ok ? "ok" : "violated") + "\n";
    summary += "validation.convergence_detail=" + conv.message + "\n";

    bool any_diverged = false;
    for (std::size_t i = 0; i < schemes.size(); ++i) {
      const std::string name = scheme_name(schemes[i]);
      const Trace& tr = traces[i];
      write_file(fs::path(opts.out_dir) / ("trace_" + name + ".csv"),
                 trace_to_csv(tr, bp.f.dim));
      write_file(fs::path(opts.out_dir) / ("time_" + name + ".csv"), time_to_csv(tr));
      const bool has_rec = !tr.records.empty();
      summary += name + ".iterations=" +
                 std::to_string(has_rec ? tr.records.back().k : 0) + "\n";
      summary += name + ".final_residual=" +
                 fmt(has_rec ? tr.records.back().residual : std::nan("")) + "\n";
      summary += name + ".final_f=" +
                 fmt(has_rec ? tr.records.back().f_value : std::nan("")) + "\n";
      summary += name + ".wall_time_sec=" +
                 fmt(tr.t_sec.empty() ? 0.0 : tr.t_sec.back()) + "\n";
      summary += name + ".diverged=" + std::to_string(tr.diverged ? 1 : 0) + "\n";
      summary += name + ".stopped_by_tol=" + std::to_string(tr.stopped_by_tol ? 1 : 0) + "\n";
      summary += name + ".grad_evals_scheme=" + std::to_string(tr.grad_evals_scheme) + "\n";
      summary +=
          name + ".grad_evals_diagnostic=" + std::to_string(tr.grad_evals_diagnostic) + "\n";
      any_diverged = any_diverged || tr.diverged;
    }
    write_file(fs::path(opts.out_dir) / "summary.txt", summary);
    std::cout << "wrote " << schemes.size() << " trace(s) to " << opts.out_dir << "\n";
    if (any_diverged) {
      std::cerr << "warning: at least one run diverged (see summary.txt)\n";
      if (opts.strict) return kExitNumerical;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_plot(const CommonOpts& opts, const std::vector<std::string>& trace_files,
             const std::string& kind) {
  try {
    if (kind != "residual_vs_iter" && kind != "residual_vs_time" &&
        kind != "trajectory_2d")
      throw ConfigError("unknown plot kind: " + kind +
                        " (expected residual_vs_iter, residual_vs_time, trajectory_2d)");
    if (trace_files.empty()) throw ConfigError("no trace files given");

    std::vector<Series> series;
    for (const std::string& file : trace_files) {
      const CsvTable t = read_csv(file);
      if (t.rows.empty()) throw ConfigError(file + ": no data rows");
      Series s;
      std::string stem = fs::path(file).stem().string();
      if (stem.rfind("trace_", 0) == 0) stem = stem.substr(6);
      s.label = stem;

      if (kind == "trajectory_2d") {
        const long cx = t.column("x0"), cy = t.column("x1");
        if (cx < 0 || cy < 0 || t.column("x2") >= 0)
          throw ConfigError(file + ": trajectory plots require 2-D traces");
        for (const auto& row : t.rows) {
          s.x.push_back(row[cx]);
          s.y.push_back(row[cy]);
        }
      } else {
        const long cr = t.column("residual");
        if (cr < 0) throw ConfigError(file + ": missing residual column");
        if (kind == "residual_vs_iter") {
          const long ck = t.column("k");
          if (ck < 0) throw ConfigError(file + ": missing k column");
          for (const auto& row : t.rows) {
            s.x.push_back(row[ck]);
            s.y.push_back(row[cr]);
          }
        } else {
          fs::path p(file);
          std::string fname = p.filename().string();
          const auto pos = fname.find("trace_");
          if (pos == std::string::npos)
            throw ConfigError(file + ": cannot infer time file (expected trace_*.csv)");
          fname.replace(pos, 6, "time_");
          const CsvTable tt = read_csv((p.parent_path() / fname).string());
          const long ct = tt.column("t_sec");
          if (ct < 0 || tt.rows.size() != t.rows.size())
            throw ConfigError(file + ": time file does not match trace");
          for (std::size_t i = 0; i < t.rows.size(); ++i) {
            s.x.push_back(tt.rows[i][ct]);
            s.y.push_back(t.rows[i][cr]);
          }
        }
      }
      series.push_back(std::move(s));
    }

    std::string title, xlabel, ylabel;
    bool logy = true;
    if (kind == "residual_vs_iter") {
      title = "Residual vs iteration";
      xlabel = "k";
      ylabel = "||grad f(x_k)||";
    } else if (kind == "residual_vs_time") {
      title = "Residual vs wall time";
      xlabel = "t (s)";
      ylabel = "||grad f(x_k)||";
    } else {
      title = "Trajectory";
      xlabel = "x0";
      ylabel = "x1";
      logy = false;
    }
    const std::string svg = render_svg(series, title, xlabel, ylabel, false, logy);
    fs::create_directories(opts.out_dir);
    const fs::path out = fs::path(opts.out_dir) / ("plot_" + kind + ".svg");
    write_file(out, svg);
    std::cout << "wrote " << out.string() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_montecarlo(const CommonOpts& opts) {
  try {
    const Config cfg = resolve_config(opts);
    const BuiltProblem bp = build_problem(cfg);
    const SolverParams params = build_params(cfg);
    const std::vector<Scheme> schemes = build_schemes(cfg);
    if (!bp.f.has_hess())
      throw ConfigError("problem must provide a Hessian for endpoint classification");

    const long n_samples = cfg_long(cfg, "mc.n_samples", 1000);
    const auto seed = static_cast<std::uint64_t>(cfg_long(cfg, "seed", 0));
    const double classify_tol = cfg_double(cfg, "mc.classify_tol", 1e-6);
    Box box;
    box.lo = cfg_point(cfg, "mc.box_lo", bp.f.dim, Point::Constant(bp.f.dim, -2.0));
    box.hi = cfg_point(cfg, "mc.box_hi", bp.f.dim, Point::Constant(bp.f.dim, 2.0));

    std::string l_source;
    const double L = resolve_lipschitz(cfg, bp.f, bp.x0, l_source);
    ValidationResult saddle{false, "Lipschitz estimate is zero"};
    if (L > 0.0) saddle = validate_saddle_condition(params, L);
    if (!saddle.ok) {
      std::cerr << (opts.strict ? "error: " : "warning: ") << saddle.message << "\n";
      if (opts.strict) return kExitNumerical;
    }

    fs::create_directories(opts.out_dir);
    for (Scheme scheme : schemes) {
      const MonteCarloReport rep = montecarlo_avoidance(
          scheme, bp.f, params, box, n_samples, seed, classify_tol, opts.parallel);
      const std::string name = scheme_name(scheme);

      std::string report;
      report += "scheme=" + name + "\n";
      report += "problem=" + bp.name + "\n";
      report += "n_samples=" + std::to_string(n_samples) + "\n";
      report += "seed=" + std::to_string(seed) + "\n";
      report += "classify_tol=" + fmt(classify_tol) + "\n";
      report += "lipschitz_L=" + fmt(L) + "\n";
      report += std::string("validation.saddle=") + (saddle.ok ? "ok" : "violated") + "\n";
      report += "validation.saddle_detail=" + saddle.message + "\n";
      report += "n_to_min=" + std::to_string(rep.n_to_min) + "\n";
      report += "n_to_strict_saddle=" + std::to_string(rep.n_to_strict_saddle) + "\n";
      report += "n_nonconverged=" + std::to_string(rep.n_nonconverged) + "\n";
      write_file(fs::path(opts.out_dir) / ("mc_" + name + "_report.txt"), report);

      const bool coords = bp.f.dim <= 4;
      std::string csv = "sample,cls,iters,residual";
      if (coords)
        for (int d = 0; d < bp.f.dim; ++d) csv += ",x" + std::to_string(d);
      csv += "\n";
      for (std::size_t i = 0; i < rep.samples.size(); ++i) {
        const MonteCarloSample& s = rep.samples[i];
        csv += std::to_string(i);
        csv += ',' + std::to_string(static_cast<int>(s.cls));
        csv += ',' + std::to_string(s.iters);
        csv += ',' + fmt(s.residual);
        if (coords)
          for (int d = 0; d < bp.f.dim; ++d) csv += ',' + fmt(s.endpoint[d]);
        csv += '\n';
      }
      write_file(fs::path(opts.out_dir) / ("mc_" + name + "_samples.csv"), csv);
      std::cout << name << ": min=" << rep.n_to_min
                << " strict_saddle=" << rep.n_to_strict_saddle
                << " nonconverged=" << rep.n_nonconverged << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_gradcheck(const CommonOpts& opts, bool corrupt) {
  try {
    const Config cfg = resolve_config(opts);
    const BuiltProblem bp = build_problem(cfg);
    const long n_points = cfg_long(cfg, "gradcheck.n_points", 20);
    if (n_points < 1) throw ConfigError("gradcheck.n_points must be positive");
    const double step = cfg_double(cfg, "gradcheck.step", 1e-5);
    if (!(step > 0.0)) throw ConfigError("gradcheck.step must be positive");
    const auto seed = static_cast<std::uint64_t>(cfg_long(cfg, "seed", 0));

    const double lo_def = bp.name == "deblur" ? 0.0 : -2.0;
    const double hi_def = bp.name == "deblur" ? 1.0 : 2.0;
    Box box;
    box.lo = cfg_point(cfg, "gradcheck.box_lo", bp.f.dim, Point::Constant(bp.f.dim, lo_def));
    box.hi = cfg_point(cfg, "gradcheck.box_hi", bp.f.dim, Point::Constant(bp.f.dim, hi_def));

    auto grad = bp.f.grad;
    if (corrupt) {
      const auto base = bp.f.grad;
      grad = [base](const Point& x) {
        Point g = base(x);
        g[0] += 1e-2 * (1.0 + std::abs(g[0]));
        return g;
      };
    }

    double max_rel = 0.0;
    for (long t = 0; t < n_points; ++t) {
      SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(t));
      Point x(bp.f.dim);
      for (int d = 0; d < bp.f.dim; ++d) x[d] = rng.uniform(box.lo[d], box.hi[d]);
      const Point g = grad(x);
      Point gfd(bp.f.dim);
      for (int d = 0; d < bp.f.dim; ++d) {
        Point xp = x, xm = x;
        xp[d] += step;
        xm[d] -= step;
        gfd[d] = (bp.f.eval(xp) - bp.f.eval(xm)) / (2.0 * step);
      }
      const double rel = (g - gfd).cwiseAbs().maxCoeff() /
                         std::max(1.0, gfd.cwiseAbs().maxCoeff());
      max_rel = std::max(max_rel, rel);
    }
    std::printf("max relative gradient error = %.6e over %ld points\n", max_rel, n_points);
    return max_rel < 1e-4 ? kExitOk : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_ode(const CommonOpts& opts) {
  try {
    const Config cfg = resolve_config(opts);
    const BuiltProblem bp = build_problem(cfg);
    const std::string sys_name = cfg_string(cfg, "ode.system", "isihd");
    ContinuousSystem sys;
    if (sys_name == "isehd")
      sys = ContinuousSystem::ISEHD;
    else if (sys_name == "isihd")
      sys = ContinuousSystem::ISIHD;
    else
      throw ConfigError("ode.system must be isehd or isihd");

    const double beta = cfg_double(cfg, "solver.beta", 0.0);
    if (!(beta > 0.0)) throw ConfigError("solver.beta must be positive for the ODE systems");
    const double g0 = cfg_double(cfg, "solver.gamma_const", 1.0);
    if (!(g0 > 0.0)) throw ConfigError("solver.gamma_const must be positive");
    const GammaSchedule gamma = GammaSchedule::constant(g0);
    const double dt = cfg_double(cfg, "ode.dt", 1e-3);
    const double T = cfg_double(cfg, "ode.T", 10.0);
    if (!(dt > 0.0) || !(T > 0.0)) throw ConfigError("ode.dt and ode.T must be positive");
    if (dt > T) throw ConfigError("ode.dt must not exceed ode.T");

    const Point v0 = cfg_point(cfg, "init.v0", bp.f.dim, Point::Zero(bp.f.dim));
    const PhaseState phase0 = initial_phase(sys, bp.x0, v0, bp.f, beta, gamma);
    const ContinuousTrace tr = integrate(sys, phase0, bp.f, beta, gamma, dt, T);

    const bool coords = bp.f.dim <= 4;
    std::string csv = "t";
    if (coords)
      for (int d = 0; d < bp.f.dim; ++d) csv += ",x" + std::to_string(d);
    csv += ",energy\n";
    double prev_e = 0.0, max_inc = 0.0;
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      const ContinuousSample& s = tr.samples[i];
      const double e = energy(sys, s.state, bp.f, beta, gamma);
      csv += fmt(s.state.t);
      if (coords)
        for (int d = 0; d < bp.f.dim; ++d) csv += ',' + fmt(s.state.x[d]);
      csv += ',' + fmt(e);
      csv += '\n';
      if (i > 0) max_inc = std::max(max_inc, e - prev_e);
      prev_e = e;
    }
    fs::create_directories(opts.out_dir);
    write_file(fs::path(opts.out_dir) / "ode_trace.csv", csv);

    std::string summary;
    summary += "system=" + sys_name + "\n";
    summary += "dt=" + fmt(dt) + "\n";
    summary += "T=" + fmt(T) + "\n";
    summary += "samples=" + std::to_string(tr.samples.size()) + "\n";
    summary += "diverged=" + std::to_string(tr.diverged ? 1 : 0) + "\n";
    summary += "max_positive_energy_increment=" + fmt(std::max(0.0, max_inc)) + "\n";
    write_file(fs::path(opts.out_dir) / "ode_summary.txt", summary);
    std::cout << "max_positive_energy_increment=" << fmt(std::max(0.0, max_inc)) << "\n";
    if (tr.diverged) {
      std::cerr << "warning: integration diverged (trace truncated)\n";
      if (opts.strict) return kExitNumerical;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ihd::cli
