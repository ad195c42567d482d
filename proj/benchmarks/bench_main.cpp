#include <benchmark/benchmark.h>

#include <random>

#include "aggrefeed/analysis.hpp"
#include "aggrefeed/controller.hpp"
#include "aggrefeed/scenarios.hpp"
#include "aggrefeed/sim.hpp"

using namespace aggrefeed;

namespace {

SurveillanceInstance make_instance(int n_agents) {
  SurveillanceConfig cfg;
  cfg.n_agents = n_agents;
  cfg.seed = 1;
  return surveillance_model(cfg);
}

NetworkState random_state(const NetworkModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 100.0);
  NetworkState s;
  s.x = VectorXd::NullaryExpr(model.state_size(), [&]() { return unif(rng); });
  s.u = VectorXd::NullaryExpr(model.input_size(), [&]() { return unif(rng); });
  s.w = VectorXd::NullaryExpr(model.n_agents() * model.agg_dim,
                              [&]() { return unif(rng); });
  s.z = VectorXd::NullaryExpr(model.n_agents() * model.agg_dim,
                              [&]() { return unif(rng); });
  return s;
}

void bm_network_rhs(benchmark::State& state) {
  const SurveillanceInstance inst = make_instance(int(state.range(0)));
  const NetworkState s = random_state(inst.model, 7);
  const Gains gains{0.75, 0.01};
  for (auto _ : state) {
    benchmark::DoNotOptimize(network_rhs(inst.model, s, gains));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_network_rhs)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void bm_grad_total(benchmark::State& state) {
  const SurveillanceInstance inst = make_instance(int(state.range(0)));
  const NetworkState s = random_state(inst.model, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grad_total(inst.model, s.x));
  }
}
BENCHMARK(bm_grad_total)->Arg(8)->Arg(32);

void bm_metrics(benchmark::State& state) {
  const SurveillanceInstance inst = make_instance(8);
  const NetworkState s = random_state(inst.model, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics(inst.model, s));
  }
}
BENCHMARK(bm_metrics);

void bm_integrate_adaptive(benchmark::State& state) {
  const SurveillanceInstance inst = make_instance(8);
  SimConfig cfg;
  cfg.gains = Gains{0.75, 0.01};
  cfg.horizon = 5.0;
  cfg.sample_period = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(inst.model, inst.initial, cfg));
  }
}
BENCHMARK(bm_integrate_adaptive)->Unit(benchmark::kMillisecond);

void bm_integrate_rk4(benchmark::State& state) {
  const SurveillanceInstance inst = make_instance(8);
  SimConfig cfg;
  cfg.gains = Gains{0.75, 0.01};
  cfg.horizon = 5.0;
  cfg.integrator = IntegratorKind::rk4;
  cfg.step_size = 1e-2;
  cfg.sample_period = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(inst.model, inst.initial, cfg));
  }
}
BENCHMARK(bm_integrate_rk4)->Unit(benchmark::kMillisecond);

void bm_lyapunov_certificate(benchmark::State& state) {
  const NetworkGraph g = generate_er_balanced(int(state.range(0)), 0.5, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lyapunov_certificate(g, 2));
  }
}
BENCHMARK(bm_lyapunov_certificate)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
