#include "aggrefeed/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace aggrefeed {

double altitude(const Terrain& terrain, const Eigen::Vector2d& loc) {
  double z = -terrain.a1 * std::cos(terrain.rho * loc.x()) * std::sin(terrain.rho * loc.y());
  for (const auto& c : terrain.crevasses) {
    z -= c.amplitude * std::exp(-(loc - c.center).squaredNorm() / c.spread);
  }
  return z;
}

Eigen::Vector2d altitude_grad(const Terrain& terrain, const Eigen::Vector2d& loc) {
  Eigen::Vector2d g;
  g.x() = terrain.a1 * terrain.rho * std::sin(terrain.rho * loc.x()) *
          std::sin(terrain.rho * loc.y());
  g.y() = -terrain.a1 * terrain.rho * std::cos(terrain.rho * loc.x()) *
          std::cos(terrain.rho * loc.y());
  for (const auto& c : terrain.crevasses) {
    const Eigen::Vector2d delta = loc - c.center;
    g += c.amplitude * (2.0 / c.spread) * std::exp(-delta.squaredNorm() / c.spread) * delta;
  }
  return g;
}

void SurveillanceConfig::validate() const {
  if (n_agents < 2) throw ValidationError("surveillance needs at least 2 agents");
  if (!(er_prob > 0.0 && er_prob <= 1.0)) throw ValidationError("er_prob must lie in (0, 1]");
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) throw ValidationError("gamma1, gamma2 must be positive");
  if (gamma_alt < 0.0) throw ValidationError("gamma_alt must be >= 0");
  if (n_crevasses < 0) throw ValidationError("n_crevasses must be >= 0");
  if (!(a1 > 0.0) || !(rho > 0.0)) throw ValidationError("a1, rho must be positive");
  if (!(unicycle_gain > 0.0)) throw ValidationError("unicycle_gain must be positive");
}

UnicycleDerivative unicycle_closed_loop(double gain, const UnicycleState& state,
                                        const Eigen::Vector2d& target) {
  constexpr double kEps = 1e-6;
  UnicycleDerivative d;
  const Eigen::Vector2d delta = target - state.position;
  const double dist = delta.norm();
  if (dist < kEps) {
    d.position_dot.setZero();
    d.heading_dot = 0.0;
    return d;
  }
  const double bearing = std::atan2(delta.y(), delta.x()) - state.heading;
  const double v = gain * dist * std::cos(bearing);
  d.position_dot << std::cos(state.heading) * v, std::sin(state.heading) * v;
  d.heading_dot = (gain / dist) * std::cos(bearing) * std::sin(bearing) +
                  (gain / dist) * std::sin(bearing);
  return d;
}

PlantFunctions plant_variant(PlantKind kind, double gain) {
  PlantFunctions f;
  if (kind == PlantKind::single_integrator) {
    f.state_dim = 2;
    f.plant = [](const VectorXd& x, const VectorXd& u) { return VectorXd(u - x); };
    f.steady_state = [](const VectorXd& u) { return u; };
    f.steady_state_jac = [](const VectorXd& u) {
      return MatrixXd::Identity(u.size(), u.size());
    };
  } else {
    f.state_dim = 3;
    f.stable_dim = 2;
    f.plant = [gain](const VectorXd& x, const VectorXd& u) {
      UnicycleState s{Eigen::Vector2d(x(0), x(1)), x(2)};
      const UnicycleDerivative d = unicycle_closed_loop(gain, s, Eigen::Vector2d(u(0), u(1)));
      VectorXd out(3);
      out << d.position_dot, d.heading_dot;
      return out;
    };
    f.steady_state = [](const VectorXd& u) {
      VectorXd h(3);
      h << u(0), u(1), 0.0;
      return h;
    };
    f.steady_state_jac = [](const VectorXd&) {
      MatrixXd j = MatrixXd::Zero(2, 3);
      j(0, 0) = j(1, 1) = 1.0;
      return j;
    };
  }
  return f;
}

SurveillanceInstance surveillance_model(const SurveillanceConfig& config) {
  config.validate();
  SurveillanceInstance inst;
  inst.config = config;
  inst.terrain.a1 = config.a1;
  inst.terrain.rho = config.rho;

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> area(0.0, 100.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

  const std::uint64_t graph_seed = rng();
  for (int i = 0; i < config.n_agents; ++i) {
    // Open-interval draw: rejects exact endpoints.
    double b;
    do {
      b = unit(rng);
    } while (b <= 0.0);
    inst.beta.push_back(b);
  }
  for (int g = 0; g < config.n_crevasses; ++g) {
    Crevasse c;
    c.amplitude = 5.0 * unit(rng);
    c.spread = 5.0 + 5.0 * unit(rng);
    c.center << area(rng), area(rng);
    inst.terrain.crevasses.push_back(c);
  }
  for (int i = 0; i < config.n_agents; ++i) {
    inst.intruders.emplace_back(area(rng), area(rng));
  }

  inst.model.graph = generate_er_balanced(config.n_agents, config.er_prob, graph_seed);
  inst.model.agg_dim = 2;

  const PlantFunctions plant = plant_variant(config.plant, config.unicycle_gain);
  const Terrain& terrain = inst.terrain;
  for (int i = 0; i < config.n_agents; ++i) {
    AgentModel agent;
    agent.state_dim = plant.state_dim;
    agent.stable_dim = plant.stable_dim;
    agent.input_dim = 2;
    agent.agg_dim = 2;
    agent.plant = plant.plant;
    agent.steady_state = plant.steady_state;
    agent.steady_state_jac = plant.steady_state_jac;
    const double g1 = config.gamma1, g2 = config.gamma2, ga = config.gamma_alt;
    const Eigen::Vector2d target = inst.intruders[i];
    const double beta = inst.beta[i];
    const int nx = plant.state_dim;
    agent.cost = [g1, g2, ga, target, terrain](const VectorXd& x, const VectorXd& s) {
      const Eigen::Vector2d pos = x.head<2>();
      return g1 * (pos - target).squaredNorm() - ga * altitude(terrain, pos) +
             g2 * (pos - Eigen::Vector2d(s)).squaredNorm();
    };
    agent.grad1_cost = [g1, g2, ga, target, terrain, nx](const VectorXd& x,
                                                         const VectorXd& s) {
      const Eigen::Vector2d pos = x.head<2>();
      VectorXd g = VectorXd::Zero(nx);
      g.head<2>() = 2.0 * g1 * (pos - target) - ga * altitude_grad(terrain, pos) +
                    2.0 * g2 * (pos - Eigen::Vector2d(s));
      return g;
    };
    agent.grad2_cost = [g2](const VectorXd& x, const VectorXd& s) {
      return VectorXd(-2.0 * g2 * (x.head<2>() - Eigen::Vector2d(s)));
    };
    agent.aggregation = [beta](const VectorXd& x) { return VectorXd(beta * x.head<2>()); };
    agent.aggregation_jac = [beta, nx](const VectorXd&) {
      MatrixXd j = MatrixXd::Zero(nx, 2);
      j(0, 0) = j(1, 1) = beta;
      return j;
    };
    inst.model.agents.push_back(std::move(agent));
  }

  inst.initial = NetworkState::zero(inst.model);
  for (int i = 0; i < config.n_agents; ++i) {
    const int off = inst.model.state_offset(i);
    inst.initial.x(off) = area(rng);
    inst.initial.x(off + 1) = area(rng);
    if (config.plant == PlantKind::unicycle) inst.initial.x(off + 2) = angle(rng);
  }
  for (int i = 0; i < config.n_agents; ++i) {
    inst.initial.u(2 * i) = area(rng);
    inst.initial.u(2 * i + 1) = area(rng);
  }
  return inst;
}

QuadraticBenchmark quadratic_benchmark(int n_agents, int agg_dim, std::uint64_t seed) {
  if (n_agents < 1 || agg_dim < 1) {
    throw ValidationError("quadratic_benchmark: positive dimensions required");
  }
  QuadraticBenchmark bench;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::uint64_t graph_seed = rng();

  bench.model.agg_dim = agg_dim;
  for (int i = 0; i < n_agents; ++i) {
    MatrixXd a(agg_dim, agg_dim);
    for (int r = 0; r < agg_dim; ++r) {
      for (int c = 0; c < agg_dim; ++c) a(r, c) = gauss(rng);
    }
    const MatrixXd q =
        a.transpose() * a / double(agg_dim) + MatrixXd::Identity(agg_dim, agg_dim);
    VectorXd lin(agg_dim);
    for (int r = 0; r < agg_dim; ++r) lin(r) = 10.0 * gauss(rng);
    double beta;
    do {
      beta = unit(rng);
    } while (beta <= 0.0);
    const double gamma = bench.gamma;

    AgentModel agent;
    agent.state_dim = agg_dim;
    agent.input_dim = agg_dim;
    agent.agg_dim = agg_dim;
    agent.plant = [](const VectorXd& x, const VectorXd& u) { return VectorXd(u - x); };
    agent.steady_state = [](const VectorXd& u) { return u; };
    agent.steady_state_jac = [](const VectorXd& u) {
      return MatrixXd::Identity(u.size(), u.size());
    };
    agent.cost = [q, lin, gamma](const VectorXd& x, const VectorXd& s) {
      return 0.5 * x.dot(q * x) + lin.dot(x) + gamma * (x - s).squaredNorm();
    };
    agent.grad1_cost = [q, lin, gamma](const VectorXd& x, const VectorXd& s) {
      return VectorXd(q * x + lin + 2.0 * gamma * (x - s));
    };
    agent.grad2_cost = [gamma](const VectorXd& x, const VectorXd& s) {
      return VectorXd(-2.0 * gamma * (x - s));
    };
    agent.aggregation = [beta](const VectorXd& x) { return VectorXd(beta * x); };
    agent.aggregation_jac = [beta, agg_dim](const VectorXd&) {
      return MatrixXd(beta * MatrixXd::Identity(agg_dim, agg_dim));
    };
    bench.model.agents.push_back(std::move(agent));
  }

  if (n_agents >= 2) {
    bench.model.graph = generate_er_balanced(n_agents, 0.6, graph_seed);
  } else {
    bench.model.graph.n_agents = 1;
    bench.model.graph.adjacency = MatrixXd::Zero(1, 1);
  }

  // G(x) is affine; assemble it column by column and solve G(x*) = 0.
  const int n = bench.model.state_size();
  const VectorXd offset = grad_total(bench.model, VectorXd::Zero(n));
  MatrixXd system(n, n);
  for (int k = 0; k < n; ++k) {
    system.col(k) = grad_total(bench.model, VectorXd::Unit(n, k)) - offset;
  }
  bench.minimizer = system.colPivHouseholderQr().solve(-offset);
  const double residual = grad_total(bench.model, bench.minimizer).norm();
  if (!std::isfinite(residual) || residual > 1e-8 * (1.0 + offset.norm())) {
    throw ValidationError("quadratic_benchmark: stationarity system is singular; retry seed");
  }
  return bench;
}

}  // namespace aggrefeed
