#include "ihd/cli.hpp"

namespace ihd::cli {

namespace {

const char* kRosenbrockPaper = R"(# Rosenbrock benchmark, four schemes
problem = rosenbrock
schemes = isehd, isihd, gd, hbf
solver.h = 1e-3
solver.beta = 0.04
solver.gamma_const = 3
solver.max_iter = 20000
init.x0 = -1.5, 0
)";

const char* kDeblurPaper = R"(# Image deblurring benchmark on the built-in phantom
problem = deblur
deblur.nx = 256
deblur.ny = 256
deblur.mu = 5e-5
deblur.rho = 1e-3
deblur.noise_sigma = 0.01
deblur.noise_seed = 42
deblur.kernel_size = 5
deblur.kernel_sigma = 1.5
schemes = isehd, isihd, gd, hbf
solver.h = 0.5
solver.beta = 1.3
solver.gamma_const = 0.25
solver.max_iter = 250
)";

}  // namespace

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"rosenbrock-paper", kRosenbrockPaper},
      {"deblur-paper", kDeblurPaper},
  };
  return table;
}

}  // namespace ihd::cli
