#ifndef AGGREFEED_SCENARIOS_HPP
#define AGGREFEED_SCENARIOS_HPP

#include <cstdint>
#include <vector>

#include "aggrefeed/controller.hpp"
#include "aggrefeed/model.hpp"

namespace aggrefeed {

enum class PlantKind { single_integrator, unicycle };

struct Crevasse {
  double amplitude = 0.0;       // a_{c,g} in [0, 5]
  double spread = 1.0;          // s_g in (5, 10)
  Eigen::Vector2d center;       // mu_g in [0, 100]^2
};

/// Altitude field: sinusoid plus Gaussian crevasse wells.
struct Terrain {
  double a1 = 10.0;
  double rho = 0.02;
  std::vector<Crevasse> crevasses;
};

double altitude(const Terrain& terrain, const Eigen::Vector2d& loc);
Eigen::Vector2d altitude_grad(const Terrain& terrain, const Eigen::Vector2d& loc);

struct SurveillanceConfig {
  int n_agents = 6;
  double er_prob = 0.4;
  double gamma1 = 1.0;
  double gamma2 = 0.3;
  double gamma_alt = 1.0;  // 0 disables the altitude term (convexified variant)
  int n_crevasses = 5;
  double a1 = 10.0;
  double rho = 0.02;
  double unicycle_gain = 1.0;  // k_i, unicycle plants only
  PlantKind plant = PlantKind::single_integrator;
  std::uint64_t seed = 0;

  void validate() const;
};

/// A fully drawn scenario: model plus every seeded quantity, so runs are
/// reproducible and plottable.
struct SurveillanceInstance {
  SurveillanceConfig config;
  NetworkModel model;
  Terrain terrain;
  std::vector<Eigen::Vector2d> intruders;  // s_i
  std::vector<double> beta;                // beta_i in (0, 1)
  NetworkState initial;                    // random x(0), u(0); w = z = 0
};

SurveillanceInstance surveillance_model(const SurveillanceConfig& config);

struct UnicycleState {
  Eigen::Vector2d position;
  double heading = 0.0;  // unwrapped
};

struct UnicycleDerivative {
  Eigen::Vector2d position_dot;
  double heading_dot = 0.0;
};

/// Go-to-goal low-level loop driving the unicycle to the reference u.
/// Commands are zeroed inside a 1e-6 ball around the target.
UnicycleDerivative unicycle_closed_loop(double gain, const UnicycleState& state,
                                        const Eigen::Vector2d& target);

/// Plant, steady-state map, and its Jacobian for one agent.
struct PlantFunctions {
  int state_dim = 0;
  int stable_dim = 0;  // 0 => full state; see AgentModel::stable_dim
  std::function<VectorXd(const VectorXd&, const VectorXd&)> plant;
  std::function<VectorXd(const VectorXd&)> steady_state;
  std::function<MatrixXd(const VectorXd&)> steady_state_jac;
};

PlantFunctions plant_variant(PlantKind kind, double gain = 1.0);

/// Strongly convex quadratic network with an analytically solved minimizer
/// (linear stationarity system), single-integrator plants.
struct QuadraticBenchmark {
  NetworkModel model;
  VectorXd minimizer;  // stacked x* = u*
  double gamma = 0.5;
};

QuadraticBenchmark quadratic_benchmark(int n_agents, int agg_dim, std::uint64_t seed);

}  // namespace aggrefeed

#endif
