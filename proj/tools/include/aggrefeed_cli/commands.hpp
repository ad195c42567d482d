#ifndef AGGREFEED_CLI_COMMANDS_HPP
#define AGGREFEED_CLI_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aggrefeed/analysis.hpp"
#include "aggrefeed/scenarios.hpp"
#include "aggrefeed/sim.hpp"
#include "aggrefeed_cli/config.hpp"

namespace aggrefeed::cli {

// Exit-code contract: 0 success, 1 validation error, 2 integration failure,
// 3 non-convergence under --require-convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIntegration = 2;
inline constexpr int kExitNonConvergence = 3;

struct GlobalOptions {
  std::vector<std::string> overrides;  // "section.key=value"
  std::optional<std::uint64_t> seed;
  std::string out_dir;  // empty -> $AGGREFEED_OUT or ./runs
  std::optional<std::string> integrator;
  bool require_convergence = false;
};

/// Everything needed to run one simulation, resolved from a config.
struct RunSetup {
  std::string scenario_name;
  NetworkModel model;
  NetworkState initial;
  SimConfig sim;
  std::optional<SurveillanceInstance> surveillance;
  std::optional<QuadraticBenchmark> quadratic;
  bool want_certificate = false;
  double q1 = 1.0;
  double q2 = 1.0;
};

FlatConfig resolve_config(const std::string& config_path, const GlobalOptions& options);
RunSetup build_setup(const FlatConfig& config);

std::string default_out_root();

int cmd_run(const std::string& config_path, const GlobalOptions& options);
int cmd_check(const std::string& config_path, const GlobalOptions& options);
int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, const GlobalOptions& options);
int cmd_plot(const std::string& csv_path, const std::string& out_dir);

}  // namespace aggrefeed::cli

#endif
