#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ihd/core.hpp"
#include "ihd/solvers.hpp"

namespace ihd::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat dotted-key configuration: `key = value` lines, `#` comments.
using Config = std::map<std::string, std::string>;

Config parse_config_text(const std::string& text);  // throws ConfigError
Config parse_config_file(const std::string& path);  // throws ConfigError
void overlay(Config& base, const Config& over);

double cfg_double(const Config& c, const std::string& key, double def);
long cfg_long(const Config& c, const std::string& key, long def);
bool cfg_bool(const Config& c, const std::string& key, bool def);
std::string cfg_string(const Config& c, const std::string& key, const std::string& def);
std::vector<double> cfg_list(const Config& c, const std::string& key);

/// Built-in experiment manifests by name; identical copies live in presets/.
const std::map<std::string, std::string>& presets();

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool strict = false;
  bool parallel = false;
};

/// Preset (if any), then config file (if any), then flag overrides.
Config resolve_config(const CommonOpts& opts);

struct BuiltProblem {
  Objective f;
  Point x0;
  Point x1;
  std::string name;
};

BuiltProblem build_problem(const Config& cfg);
SolverParams build_params(const Config& cfg);
std::vector<Scheme> build_schemes(const Config& cfg);

/// Header k,f,residual,step_norm,lyapunov with coordinate columns x0.. only
/// when the dimension is at most 4.
std::string trace_to_csv(const Trace& trace, int dim);
std::string time_to_csv(const Trace& trace);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  long column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);  // throws ConfigError

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Deterministic 800x600 SVG with optional log axes and a legend.
std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel, bool logx,
                       bool logy);

int cmd_run(const CommonOpts& opts);
int cmd_plot(const CommonOpts& opts, const std::vector<std::string>& trace_files,
             const std::string& kind);
int cmd_montecarlo(const CommonOpts& opts);
int cmd_gradcheck(const CommonOpts& opts, bool corrupt);
int cmd_ode(const CommonOpts& opts);

}  // namespace ihd::cli
