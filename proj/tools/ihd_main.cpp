#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ihd/cli.hpp"

namespace {

void add_common(CLI::App* cmd, ihd::cli::CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Path to a key = value config file");
  cmd->add_option("--preset", opts.preset,
                  "Built-in experiment manifest (rosenbrock-paper, deblur-paper)");
  cmd->add_option("--out", opts.out_dir, "Output directory (default: current)");
  cmd->add_option("--seed", opts.seed, "RNG seed override");
  cmd->add_flag("--strict", opts.strict,
                "Exit nonzero on validation failure or divergence");
  cmd->add_flag("--parallel", opts.parallel,
                "Run Monte-Carlo samples / multi-scheme runs concurrently");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inertial gradient methods with Hessian-driven damping: benchmark harness"};
  app.require_subcommand(1);

  ihd::cli::CommonOpts run_opts, plot_opts, mc_opts, gc_opts, ode_opts;
  std::vector<std::string> trace_files;
  std::string plot_kind = "residual_vs_iter";
  bool corrupt = false;

  CLI::App* c_run = app.add_subcommand("run", "Run the configured schemes, write CSV traces");
  add_common(c_run, run_opts);

  CLI::App* c_plot = app.add_subcommand("plot", "Render trace CSVs as an SVG plot");
  add_common(c_plot, plot_opts);
  c_plot->add_option("traces", trace_files, "Trace CSV files")->expected(-1);
  c_plot->add_option("--kind", plot_kind,
                     "residual_vs_iter | residual_vs_time | trajectory_2d");

  CLI::App* c_mc = app.add_subcommand("montecarlo", "Saddle-avoidance Monte-Carlo study");
  add_common(c_mc, mc_opts);

  CLI::App* c_gc = app.add_subcommand("gradcheck",
                                      "Check analytic gradients against finite differences");
  add_common(c_gc, gc_opts);
  c_gc->add_flag("--corrupt-grad", corrupt, "Deliberately corrupt the gradient (test hook)")
      ->group("");  // hidden

  CLI::App* c_ode = app.add_subcommand("ode", "Integrate a continuous system, write energy trace");
  add_common(c_ode, ode_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ihd::cli::kExitUsage;
  }

  if (c_run->parsed()) {
    run_opts.seed_set = c_run->count("--seed") > 0;
    return ihd::cli::cmd_run(run_opts);
  }
  if (c_plot->parsed()) {
    plot_opts.seed_set = c_plot->count("--seed") > 0;
    return ihd::cli::cmd_plot(plot_opts, trace_files, plot_kind);
  }
  if (c_mc->parsed()) {
    mc_opts.seed_set = c_mc->count("--seed") > 0;
    return ihd::cli::cmd_montecarlo(mc_opts);
  }
  if (c_gc->parsed()) {
    gc_opts.seed_set = c_gc->count("--seed") > 0;
    return ihd::cli::cmd_gradcheck(gc_opts, corrupt);
  }
  if (c_ode->parsed()) {
    ode_opts.seed_set = c_ode->count("--seed") > 0;
    return ihd::cli::cmd_ode(ode_opts);
  }
  return ihd::cli::kExitUsage;
}
