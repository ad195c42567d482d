#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "aggrefeed/sim.hpp"
#include "aggrefeed/scenarios.hpp"
#include "helpers.hpp"

using namespace aggrefeed;

namespace {

SimConfig quick_config(double horizon, IntegratorKind kind = IntegratorKind::rk45) {
  SimConfig cfg;
  cfg.gains = Gains{0.5, 0.01};
  cfg.horizon = horizon;
  cfg.integrator = kind;
  cfg.sample_period = 0.5;
  return cfg;
}

bool logs_identical(const TrajectoryLog& a, const TrajectoryLog& b) {
  if (a.times != b.times) return false;
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    const auto& sa = a.states[k];
    const auto& sb = b.states[k];
    if (std::memcmp(sa.x.data(), sb.x.data(), sizeof(double) * sa.x.size()) != 0) return false;
    if (std::memcmp(sa.u.data(), sb.u.data(), sizeof(double) * sa.u.size()) != 0) return false;
    if (std::memcmp(sa.w.data(), sb.w.data(), sizeof(double) * sa.w.size()) != 0) return false;
    if (std::memcmp(sa.z.data(), sb.z.data(), sizeof(double) * sa.z.size()) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("zero problem decays like exp(-t)") {
  const NetworkModel m = test::zero_cost_model(2);
  NetworkState init = NetworkState::zero(m);
  init.x << 3.0, -1.5;
  SimConfig cfg = quick_config(5.0);
  const TrajectoryLog log = integrate(m, init, cfg);
  const double t = log.times.back();
  CHECK(t == doctest::Approx(5.0));
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(log.states.back().x(k) - init.x(k) * std::exp(-t)) <= 1e-6);
  }
}

TEST_CASE("quadratic benchmark converges to tiny errors") {
  const QuadraticBenchmark bench = quadratic_benchmark(6, 2, 1);
  SimConfig cfg = quick_config(80.0);
  cfg.rel_tol = 1e-9;
  cfg.abs_tol = 1e-11;
  NetworkState init = NetworkState::zero(bench.model);
  std::mt19937_64 rng(1);
  init.x = test::random_vector(rng, bench.model.state_size());
  init.u = test::random_vector(rng, bench.model.input_size());
  const TrajectoryLog log = integrate(bench.model, init, cfg);
  CHECK(log.metrics.back().e_opt < 1e-6);
  CHECK(log.metrics.back().e_wz < 1e-6);
}

TEST_CASE("zero-amplitude disturbance is bitwise identical to none (fixed step)") {
  const QuadraticBenchmark bench = quadratic_benchmark(4, 2, 6);
  NetworkState init = NetworkState::zero(bench.model);
  std::mt19937_64 rng(2);
  init.x = test::random_vector(rng, bench.model.state_size());
  init.u = test::random_vector(rng, bench.model.input_size());

  SimConfig cfg = quick_config(2.0, IntegratorKind::rk4);
  cfg.step_size = 1e-2;
  const TrajectoryLog plain = integrate(bench.model, init, cfg);
  cfg.disturbance = DisturbanceSpec{0.0, 0.1};
  const TrajectoryLog disturbed = integrate(bench.model, init, cfg);
  CHECK(logs_identical(plain, disturbed));
}

TEST_CASE("seeded determinism: identical config gives identical logs") {
  SurveillanceConfig scfg;
  scfg.seed = 3;
  const SurveillanceInstance inst = surveillance_model(scfg);
  SimConfig cfg = quick_config(5.0);
  cfg.gains = Gains{0.75, 0.01};
  cfg.disturbance = DisturbanceSpec{0.5, 0.1};
  cfg.seed = 99;
  const TrajectoryLog a = integrate(inst.model, inst.initial, cfg);
  const TrajectoryLog b = integrate(inst.model, inst.initial, cfg);
  CHECK(logs_identical(a, b));
}

TEST_CASE("RK4 exhibits fourth-order convergence on the scalar linear test") {
  // y' = -y, y(0) = 1 over [0, 2].
  const OdeRhs rhs = [](double, const VectorXd& y) { return VectorXd(-y); };
  const VectorXd y0 = VectorXd::Ones(1);
  auto max_error = [&](double step) {
    OdeOptions opts;
    opts.kind = IntegratorKind::rk4;
    opts.step_size = step;
    double err = 0.0;
    integrate_ode(rhs, y0, 0.0, 2.0, opts, 0.1, [&](double t, const VectorXd& y) {
      err = std::max(err, std::abs(y(0) - std::exp(-t)));
    });
    return err;
  };
  const double coarse = max_error(0.1);
  const double fine = max_error(0.05);
  const double ratio = coarse / fine;
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("adaptive and fixed-step integrations agree on the quadratic benchmark") {
  const QuadraticBenchmark bench = quadratic_benchmark(4, 2, 10);
  NetworkState init = NetworkState::zero(bench.model);
  std::mt19937_64 rng(3);
  init.x = test::random_vector(rng, bench.model.state_size());
  init.u = test::random_vector(rng, bench.model.input_size());

  SimConfig adaptive = quick_config(20.0);
  SimConfig fixed = quick_config(20.0, IntegratorKind::rk4);
  fixed.step_size = 1e-3;
  const TrajectoryLog a = integrate(bench.model, init, adaptive);
  const TrajectoryLog b = integrate(bench.model, init, fixed);
  const double tol = 10.0 * std::max(adaptive.rel_tol, adaptive.abs_tol);
  CHECK((a.states.back().u - b.states.back().u).norm() <=
        tol * (1.0 + a.states.back().u.norm()));
}

TEST_CASE("conservation columns stay within 100x abs_tol x (1+t)") {
  SurveillanceConfig scfg;
  scfg.seed = 5;
  const SurveillanceInstance inst = surveillance_model(scfg);
  SimConfig cfg = quick_config(20.0);
  cfg.gains = Gains{0.75, 0.01};
  const TrajectoryLog log = integrate(inst.model, inst.initial, cfg);
  for (std::size_t k = 0; k < log.times.size(); ++k) {
    const double bound = 100.0 * cfg.abs_tol * (1.0 + log.times[k]);
    CHECK(log.conservation[k][0] <= bound);
    CHECK(log.conservation[k][1] <= bound);
  }
}

TEST_CASE("sample grid is uniform and strictly increasing") {
  const NetworkModel m = test::zero_cost_model(2);
  SimConfig cfg = quick_config(3.0);
  cfg.sample_period = 0.25;
  const TrajectoryLog log = integrate(m, NetworkState::zero(m), cfg);
  REQUIRE(log.times.size() == 13);
  for (std::size_t k = 0; k < log.times.size(); ++k) {
    CHECK(log.times[k] == doctest::Approx(0.25 * double(k)).epsilon(1e-12));
  }
}

TEST_CASE("finite-time blowup raises SimError with the failure time") {
  const OdeRhs rhs = [](double, const VectorXd& y) {
    return VectorXd(y.array().square().matrix());
  };
  OdeOptions opts;
  double observed = -1.0;
  try {
    integrate_ode(rhs, VectorXd::Ones(1), 0.0, 2.0, opts, 0.1,
                  [](double, const VectorXd&) {});
  } catch (const SimError& e) {
    observed = e.time;
  }
  CHECK(observed >= 0.9);  // pole of y' = y^2 from y(0)=1 is at t = 1
  CHECK(observed <= 1.1);
}

TEST_CASE("config validation") {
  SimConfig cfg = quick_config(0.0);
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = quick_config(10.0);
  cfg.rel_tol = 2.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = quick_config(10.0);
  cfg.sample_period = 20.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("trajectory CSV round trip") {
  const QuadraticBenchmark bench = quadratic_benchmark(3, 2, 8);
  NetworkState init = NetworkState::zero(bench.model);
  std::mt19937_64 rng(4);
  init.x = test::random_vector(rng, bench.model.state_size());
  init.u = test::random_vector(rng, bench.model.input_size());
  SimConfig cfg = quick_config(2.0);
  const TrajectoryLog log = integrate(bench.model, init, cfg);

  std::stringstream buf;
  log.write_csv(buf);
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  read_csv_columns(buf, names, columns);

  const int n = bench.model.state_size();
  REQUIRE(names.size() == std::size_t(1 + n + n + 6 + 6 + 6));
  CHECK(names.front() == "t");
  REQUIRE(columns.front().size() == log.times.size());
  for (std::size_t k = 0; k < log.times.size(); ++k) {
    CHECK(columns[0][k] == log.times[k]);        // %.17g survives the round trip
    CHECK(columns[1][k] == log.states[k].x(0));
  }
}

TEST_CASE("centralized oracle: gradient flow reaches the quadratic minimizer") {
  const QuadraticBenchmark bench = quadratic_benchmark(5, 2, 12);
  std::mt19937_64 rng(5);
  const VectorXd u0 = test::random_vector(rng, bench.model.input_size());
  SimConfig cfg = quick_config(80.0);
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  const CentralizedLog log = run_centralized_oracle(bench.model, u0, cfg);
  CHECK((log.inputs.back() - bench.minimizer).norm() <= 1e-8);
  for (std::size_t k = 1; k < log.costs.size(); ++k) {
    CHECK(log.costs[k] <= log.costs[k - 1] + 1e-9);
  }
}

TEST_CASE("centralized oracle stays put at a stationary point") {
  const QuadraticBenchmark bench = quadratic_benchmark(4, 2, 20);
  SimConfig cfg = quick_config(10.0);
  cfg.rel_tol = 1e-10;  // per-step error scales with rel_tol * ||u||, so keep
  cfg.abs_tol = 1e-12;  // it well under the drift bound checked below
  const CentralizedLog log = run_centralized_oracle(bench.model, bench.minimizer, cfg);
  for (const auto& u : log.inputs) {
    CHECK((u - bench.minimizer).norm() <= 1e-8);
  }
}
