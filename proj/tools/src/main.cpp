#include <CLI11.hpp>

#include "aggrefeed_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"aggrefeed: distributed aggregative feedback-optimization simulator"};
  app.require_subcommand(1);

  aggrefeed::cli::GlobalOptions options;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string integrator;

  std::vector<CLI::App*> common_cmds;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "Config file (sectioned key-value or JSON)")
        ->required();
    cmd->add_option("--set", options.overrides, "Override a config entry, path=value")
        ->take_all();
    cmd->add_option("--seed", seed, "Override scenario seed");
    cmd->add_option("--out", options.out_dir, "Output directory (default $AGGREFEED_OUT)");
    cmd->add_option("--integrator", integrator, "rk45 or rk4")
        ->check(CLI::IsMember({"rk45", "rk4"}));
    common_cmds.push_back(cmd);
  };

  auto* run = app.add_subcommand("run", "Simulate a scenario and write CSV/SVG/manifest");
  add_common(run);
  run->add_flag("--require-convergence", options.require_convergence,
                "Exit 3 if the run does not converge");

  auto* check = app.add_subcommand("check", "Validate graph, gradients, and certificates");
  add_common(check);

  auto* sweep = app.add_subcommand("sweep", "Run one simulation per parameter value");
  add_common(sweep);
  std::string param;
  std::vector<std::string> values;
  sweep->add_option("param", param, "Config path to sweep, e.g. gains.alpha2")->required();
  sweep->add_option("values", values, "Values to sweep over")->required()->take_all();

  auto* plot = app.add_subcommand("plot", "Re-render SVG plots from a trajectory CSV");
  std::string csv_path;
  std::string plot_out;
  plot->add_option("csv", csv_path, "Trajectory CSV")->required();
  plot->add_option("--out", plot_out, "Output directory (default: next to the CSV)");

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* cmd : common_cmds) {
    if (!cmd->parsed()) continue;
    if (cmd->count("--seed") > 0) options.seed = seed;
    if (cmd->count("--integrator") > 0) options.integrator = integrator;
  }

  if (run->parsed()) return aggrefeed::cli::cmd_run(config_path, options);
  if (check->parsed()) return aggrefeed::cli::cmd_check(config_path, options);
  if (sweep->parsed()) return aggrefeed::cli::cmd_sweep(config_path, param, values, options);
  if (plot->parsed()) return aggrefeed::cli::cmd_plot(csv_path, plot_out);
  return aggrefeed::cli::kExitValidation;
}
