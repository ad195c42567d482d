#include "aggrefeed_cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aggrefeed_cli/svg.hpp"

namespace fs = std::filesystem;

namespace aggrefeed::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

// Atomic manifest write: temp file in the same directory, then rename.
void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  write_file(tmp, content);
  fs::rename(tmp, path);
}

std::vector<Eigen::Vector2d> robot_positions(const RunSetup& setup, const NetworkState& state) {
  std::vector<Eigen::Vector2d> out;
  for (int i = 0; i < setup.model.n_agents(); ++i) {
    const int off = setup.model.state_offset(i);
    out.emplace_back(state.x(off), state.x(off + 1));
  }
  return out;
}

bool classify_converged(const TrajectoryLog& log) {
  if (log.metrics.size() < 2) return false;
  const double initial = log.metrics.front().e_opt;
  return log.metrics.back().e_opt < 1e-3 * initial;
}

}  // namespace

std::string default_out_root() {
  if (const char* env = std::getenv("AGGREFEED_OUT")) return env;
  return "runs";
}

FlatConfig resolve_config(const std::string& config_path, const GlobalOptions& options) {
  FlatConfig config = FlatConfig::load(config_path);
  for (const auto& override_str : options.overrides) {
    const auto eq = override_str.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--set expects path=value, got: " + override_str);
    }
    config.set(override_str.substr(0, eq), override_str.substr(eq + 1));
  }
  if (options.seed) config.set("scenario.seed", std::to_string(*options.seed));
  if (options.integrator) config.set("sim.integrator", *options.integrator);
  return config;
}

RunSetup build_setup(const FlatConfig& config) {
  RunSetup setup;
  setup.scenario_name = config.get_string("scenario.name", "surveillance");
  const auto seed = static_cast<std::uint64_t>(config.get_int64("scenario.seed", 0));

  if (setup.scenario_name == "surveillance") {
    SurveillanceConfig sc;
    sc.n_agents = config.get_int("scenario.n_agents", sc.n_agents);
    sc.er_prob = config.get_double("scenario.er_prob", sc.er_prob);
    sc.gamma1 = config.get_double("scenario.gamma1", sc.gamma1);
    sc.gamma2 = config.get_double("scenario.gamma2", sc.gamma2);
    sc.gamma_alt = config.get_double("scenario.gamma_alt", sc.gamma_alt);
    sc.n_crevasses = config.get_int("scenario.n_crevasses", sc.n_crevasses);
    sc.a1 = config.get_double("scenario.a1", sc.a1);
    sc.rho = config.get_double("scenario.rho", sc.rho);
    sc.unicycle_gain = config.get_double("scenario.unicycle_gain", sc.unicycle_gain);
    sc.seed = seed;
    const std::string plant = config.get_string("scenario.plant", "single_integrator");
    if (plant == "single_integrator") {
      sc.plant = PlantKind::single_integrator;
    } else if (plant == "unicycle") {
      sc.plant = PlantKind::unicycle;
    } else {
      throw ValidationError("unknown plant kind: " + plant);
    }
    setup.surveillance = surveillance_model(sc);
    setup.model = setup.surveillance->model;
    setup.initial = setup.surveillance->initial;
  } else if (setup.scenario_name == "quadratic") {
    const int n = config.get_int("scenario.n_agents", 6);
    const int d = config.get_int("scenario.agg_dim", 2);
    setup.quadratic = quadratic_benchmark(n, d, seed);
    setup.model = setup.quadratic->model;
    setup.initial = NetworkState::zero(setup.model);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    for (int k = 0; k < setup.initial.x.size(); ++k) setup.initial.x(k) = unif(rng);
    for (int k = 0; k < setup.initial.u.size(); ++k) setup.initial.u(k) = unif(rng);
  } else {
    throw ValidationError("unknown scenario: " + setup.scenario_name);
  }

  setup.sim.gains.alpha1 = config.get_double("gains.alpha1", 0.75);
  setup.sim.gains.alpha2 = config.get_double("gains.alpha2", 0.01);
  setup.sim.horizon = config.get_double("sim.horizon", 200.0);
  setup.sim.rel_tol = config.get_double("sim.rel_tol", 1e-6);
  setup.sim.abs_tol = config.get_double("sim.abs_tol", 1e-8);
  setup.sim.step_size = config.get_double("sim.step_size", 1e-3);
  setup.sim.sample_period = config.get_double("sim.sample_period", 0.5);
  setup.sim.seed = seed;
  const std::string integrator = config.get_string("sim.integrator", "rk45");
  if (integrator == "rk45") {
    setup.sim.integrator = IntegratorKind::rk45;
  } else if (integrator == "rk4") {
    setup.sim.integrator = IntegratorKind::rk4;
  } else {
    throw ValidationError("unknown integrator: " + integrator);
  }
  if (config.has("disturbance.amplitude")) {
    DisturbanceSpec spec;
    spec.amplitude = config.get_double("disturbance.amplitude", 0.0);
    spec.hold_period = config.get_double("disturbance.hold_period", 0.1);
    if (spec.amplitude > 0.0) setup.sim.disturbance = spec;
  }
  setup.want_certificate = config.get_bool("analysis.certificate", false);
  setup.q1 = config.get_double("analysis.q1", 1.0);
  setup.q2 = config.get_double("analysis.q2", 1.0);
  setup.sim.validate();
  return setup;
}

int cmd_run(const std::string& config_path, const GlobalOptions& options) {
  FlatConfig config;
  RunSetup setup;
  try {
    config = resolve_config(config_path, options);
    setup = build_setup(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  const fs::path out_dir = options.out_dir.empty()
                               ? fs::path(default_out_root()) / fs::path(config_path).stem()
                               : fs::path(options.out_dir);
  fs::create_directories(out_dir);

  nlohmann::json manifest;
  manifest["schema_version"] = 1;
  manifest["scenario"] = setup.scenario_name;
  manifest["code_version"] = kVersion;
  manifest["seed"] = setup.sim.seed;
  for (const auto& [key, value] : config.entries()) manifest["config"][key] = value;

  const auto t_start = std::chrono::steady_clock::now();
  TrajectoryLog log;
  try {
    log = integrate(setup.model, setup.initial, setup.sim);
  } catch (const SimError& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    manifest["status"] = "integration_failure";
    manifest["failure_time"] = e.time;
    manifest["failure_message"] = e.what();
    write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return kExitIntegration;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  TrajectoryLog::ExtraColumns extra;
  if (setup.want_certificate) {
    const auto cert = lyapunov_certificate(setup.model.graph, setup.model.agg_dim,
                                           setup.q1, setup.q2);
    const auto series = monitor(setup.model, log, cert);
    extra = series.columns();
    std::vector<Series> mon_series{
        {"S(u)", "#1f77b4", log.times, series.s_u},
        {"U(xi)", "#d62728", log.times, series.u_xi},
        {"||x - h(u)||", "#2ca02c", log.times, series.norm_x_minus_hu}};
    write_file(out_dir / "monitor.svg",
               svg_line_chart("Lyapunov monitors", "t [s]", "value", mon_series, false));
  }

  {
    std::ofstream csv(out_dir / "trajectory.csv");
    log.write_csv(csv, extra);
  }

  std::vector<double> e_opt, e_wz;
  for (const auto& m : log.metrics) {
    e_opt.push_back(m.e_opt);
    e_wz.push_back(m.e_wz);
  }
  write_file(out_dir / "errors.svg",
             svg_line_chart("Tracking errors", "t [s]", "error (log)",
                            {{"e_opt", "#1f77b4", log.times, e_opt},
                             {"e_wz", "#d62728", log.times, e_wz}},
                            true));
  if (setup.surveillance) {
    write_file(out_dir / "configuration.svg",
               svg_configuration(setup.surveillance->terrain, setup.surveillance->intruders,
                                 robot_positions(setup, log.states.front()),
                                 robot_positions(setup, log.states.back())));
  }

  const bool converged = classify_converged(log);
  const auto& final_metrics = log.metrics.back();
  manifest["status"] = "ok";
  manifest["converged"] = converged;
  manifest["wall_clock_seconds"] = wall;
  manifest["outputs"] = {(out_dir / "trajectory.csv").string(), (out_dir / "errors.svg").string()};
  manifest["final_metrics"] = {{"e_opt", final_metrics.e_opt},
                               {"e_wz", final_metrics.e_wz},
                               {"cost", final_metrics.cost},
                               {"stationarity", final_metrics.stationarity},
                               {"e_opt_ratio", final_metrics.e_opt / log.metrics.front().e_opt},
                               {"e_wz_ratio", final_metrics.e_wz / log.metrics.front().e_wz}};
  if (setup.quadratic) {
    const double dist = (log.states.back().u - setup.quadratic->minimizer).norm() /
                        (1.0 + setup.quadratic->minimizer.norm());
    manifest["final_metrics"]["distance_to_minimizer"] = dist;
    std::printf("distance to analytic minimizer (relative): %.3e\n", dist);
  }
  write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");

  std::printf("run complete: T=%g, e_opt %.3e -> %.3e, e_wz %.3e -> %.3e (%s)\n",
              setup.sim.horizon, log.metrics.front().e_opt, final_metrics.e_opt,
              log.metrics.front().e_wz, final_metrics.e_wz,
              converged ? "converged" : "not converged");
  std::printf("outputs in %s\n", out_dir.string().c_str());

  if (options.require_convergence && !converged) return kExitNonConvergence;
  return kExitOk;
}

int cmd_check(const std::string& config_path, const GlobalOptions& options) {
  RunSetup setup;
  try {
    setup = build_setup(resolve_config(config_path, options));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  struct Check {
    std::string name;
    bool ok;
    std::string detail;
  };
  std::vector<Check> checks;

  {
    const auto balance = check_weight_balanced(setup.model.graph);
    std::ostringstream detail;
    detail << "max imbalance " << balance.max_imbalance;
    checks.push_back({"graph weight-balanced", balance.balanced, detail.str()});
    checks.push_back({"graph strongly connected", check_strongly_connected(setup.model.graph), ""});
  }
  {
    const auto report = finite_diff_check(setup.model, 20, setup.sim.seed);
    for (const auto& oracle : report.oracles) {
      std::ostringstream detail;
      detail << "max error " << oracle.max_rel_error;
      checks.push_back({"finite-diff " + oracle.name, oracle.ok, detail.str()});
    }
  }
  {
    // Compensator equilibrium: at x = h(u), w = pi_w, z = pi_z the rhs must
    // reduce to the pure reduced-gradient flow on u.
    std::mt19937_64 rng(setup.sim.seed + 17);
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    NetworkState state = NetworkState::zero(setup.model);
    for (int k = 0; k < state.u.size(); ++k) state.u(k) = unif(rng);
    state.x = stacked_steady_state(setup.model, state.u);
    state.w = pi_w(setup.model, state.x);
    state.z = pi_z(setup.model, state.x);
    const NetworkState rhs = network_rhs(setup.model, state, setup.sim.gains);
    const VectorXd expected_u_dot =
        -setup.sim.gains.alpha1 * grad_reduced(setup.model, state.u);
    const double residual =
        std::max({rhs.x.norm(), rhs.w.norm(), rhs.z.norm(),
                  (rhs.u - expected_u_dot).norm()});
    std::ostringstream detail;
    detail << "residual " << residual;
    checks.push_back({"equilibrium residual", residual <= 1e-9 * (1.0 + state.u.norm()),
                      detail.str()});
  }
  try {
    const auto cert = lyapunov_certificate(setup.model.graph, setup.model.agg_dim,
                                           setup.q1, setup.q2);
    const LaplacianPair lap = build_laplacian(setup.model.graph, setup.model.agg_dim);
    const MatrixXd m = cert.basis.r_matrix.transpose() * lap.laplacian_big * cert.basis.r_matrix;
    const int dim = static_cast<int>(m.rows());
    const double res1 = (cert.p1 * m + m.transpose() * cert.p1 -
                         cert.q1 * MatrixXd::Identity(dim, dim)).norm();
    const double res2 = (cert.p2 * m + m.transpose() * cert.p2 -
                         cert.q2 * MatrixXd::Identity(dim, dim)).norm();
    std::ostringstream detail;
    detail << "residuals " << res1 << ", " << res2;
    checks.push_back({"lyapunov certificate", res1 <= 1e-9 && res2 <= 1e-9, detail.str()});
  } catch (const std::exception& e) {
    checks.push_back({"lyapunov certificate", false, e.what()});
  }

  bool all_ok = true;
  for (const auto& check : checks) {
    std::printf("%-34s %s  %s\n", check.name.c_str(), check.ok ? "PASS" : "FAIL",
                check.detail.c_str());
    all_ok = all_ok && check.ok;
  }
  return all_ok ? kExitOk : kExitValidation;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, const GlobalOptions& options) {
  FlatConfig base;
  try {
    base = resolve_config(config_path, options);
    // Fail early on an unusable base config.
    (void)build_setup(base);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  struct SweepRow {
    std::string value;
    std::string status;
    double e_opt = 0.0, e_wz = 0.0, cost = 0.0;
    bool converged = false;
  };

  std::vector<std::future<SweepRow>> futures;
  for (const auto& value : values) {
    futures.push_back(std::async(std::launch::async, [&, value]() {
      SweepRow row;
      row.value = value;
      try {
        FlatConfig config = base;
        config.set(param, value);
        RunSetup setup = build_setup(config);
        const TrajectoryLog log = integrate(setup.model, setup.initial, setup.sim);
        row.status = "ok";
        row.e_opt = log.metrics.back().e_opt;
        row.e_wz = log.metrics.back().e_wz;
        row.cost = log.metrics.back().cost;
        row.converged = classify_converged(log);
      } catch (const SimError& e) {
        row.status = std::string("integration_failure@t=") + std::to_string(e.time);
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
      return row;
    }));
  }

  const fs::path out_dir = options.out_dir.empty()
                               ? fs::path(default_out_root()) /
                                     (fs::path(config_path).stem().string() + "-sweep")
                               : fs::path(options.out_dir);
  fs::create_directories(out_dir);
  std::ofstream csv(out_dir / "sweep.csv");
  csv << param << ",e_opt_final,e_wz_final,cost_final,converged,status\n";
  for (auto& future : futures) {
    const SweepRow row = future.get();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%d,%s", row.value.c_str(), row.e_opt,
                  row.e_wz, row.cost, row.converged ? 1 : 0, row.status.c_str());
    csv << buf << "\n";
    std::printf("%s = %-10s %-12s e_opt=%.3e %s\n", param.c_str(), row.value.c_str(),
                row.status.c_str(), row.e_opt, row.converged ? "converged" : "diverged/slow");
  }
  std::printf("sweep summary in %s\n", (out_dir / "sweep.csv").string().c_str());
  return kExitOk;
}

int cmd_plot(const std::string& csv_path, const std::string& out_dir_arg) {
  std::ifstream in(csv_path);
  if (!in) {
    std::cerr << "error: cannot open " << csv_path << "\n";
    return kExitValidation;
  }
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  try {
    read_csv_columns(in, names, columns);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  auto column = [&](const std::string& name) -> const std::vector<double>* {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return &columns[i];
    }
    return nullptr;
  };
  const auto* t = column("t");
  const auto* e_opt = column("e_opt");
  const auto* e_wz = column("e_wz");
  if (!t || !e_opt || !e_wz) {
    std::cerr << "error: CSV lacks t/e_opt/e_wz columns\n";
    return kExitValidation;
  }
  const fs::path out_dir = out_dir_arg.empty() ? fs::path(csv_path).parent_path()
                                               : fs::path(out_dir_arg);
  fs::create_directories(out_dir);
  write_file(out_dir / "errors.svg",
             svg_line_chart("Tracking errors", "t [s]", "error (log)",
                            {{"e_opt", "#1f77b4", *t, *e_opt}, {"e_wz", "#d62728", *t, *e_wz}},
                            true));
  if (const auto* s_u = column("S_u")) {
    const auto* u_xi = column("U_xi");
    const auto* hx = column("norm_x_minus_hu");
    std::vector<Series> series{{"S(u)", "#1f77b4", *t, *s_u}};
    if (u_xi) series.push_back({"U(xi)", "#d62728", *t, *u_xi});
    if (hx) series.push_back({"||x - h(u)||", "#2ca02c", *t, *hx});
    write_file(out_dir / "monitor.svg",
               svg_line_chart("Lyapunov monitors", "t [s]", "value", series, false));
  }
  std::printf("plots written to %s\n", out_dir.string().c_str());
  return kExitOk;
}

}  // namespace aggrefeed::cli
