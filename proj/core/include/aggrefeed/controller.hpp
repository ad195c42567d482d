#ifndef AGGREFEED_CONTROLLER_HPP
#define AGGREFEED_CONTROLLER_HPP

#include <vector>

#include "aggrefeed/model.hpp"

namespace aggrefeed {

/// Stacked closed-loop state. w and z are the consensus compensators, one
/// d-block per agent.
struct NetworkState {
  VectorXd x;  // R^n
  VectorXd u;  // R^m
  VectorXd w;  // R^{Nd}
  VectorXd z;  // R^{Nd}

  NetworkState() = default;
  static NetworkState zero(const NetworkModel& model);
};

struct Gains {
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  void validate() const {
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0)) {
      throw ValidationError("gains must be positive");
    }
  }
};

/// One neighbor's broadcast: weight a_ij plus the two d-vectors
/// w_j + phi_j(x_j) and z_j + grad2 f_j(x_j, w_j + phi_j(x_j)).
struct NeighborMsg {
  double weight = 0.0;
  VectorXd w_phi;
  VectorXd z_grad2;
};

struct AgentDerivative {
  VectorXd x_dot;
  VectorXd u_dot;
  VectorXd w_dot;
  VectorXd z_dot;
};

/// Local state of a single agent as seen by its controller.
struct AgentState {
  VectorXd x;
  VectorXd u;
  VectorXd w;
  VectorXd z;
};

/// Closed-loop right-hand side of one agent. Reads only the agent's own
/// state, its own oracles, and the neighbor messages: this is the locality
/// contract of the distributed law.
AgentDerivative agent_rhs(const AgentModel& agent, const AgentState& state,
                          const std::vector<NeighborMsg>& neighbors, const Gains& gains);

/// Broadcast payload of one agent (what its out-neighbors receive).
NeighborMsg make_msg(const AgentModel& agent, const AgentState& state, double weight);

/// Stacked right-hand side, assembled from agent_rhs over the graph.
NetworkState network_rhs(const NetworkModel& model, const NetworkState& state,
                         const Gains& gains);

/// Compensator steady-state maps: pi_w block i is sigma(x) - phi_i(x_i),
/// pi_z block i is the network mean of grad2 minus the local grad2 at sigma.
VectorXd pi_w(const NetworkModel& model, const VectorXd& x);
VectorXd pi_z(const NetworkModel& model, const VectorXd& x);

struct Metrics {
  double e_opt = 0.0;        // || col(x - h(u), grad_reduced(u)) ||
  double e_wz = 0.0;         // || col(w - pi_w(x), z - pi_z(x)) ||
  double cost = 0.0;         // F(x, sigma(x))
  double stationarity = 0.0; // || grad_reduced(u) ||
};

Metrics metrics(const NetworkModel& model, const NetworkState& state);

/// col(h_1(u_1), ..., h_N(u_N)).
VectorXd stacked_steady_state(const NetworkModel& model, const VectorXd& u);

/// Stacked x_i.head(stable_dim) - h_i(u_i).head(stable_dim): the plant error
/// restricted to each agent's exponentially stable state portion.
VectorXd stable_plant_error(const NetworkModel& model, const VectorXd& x, const VectorXd& u);

}  // namespace aggrefeed

#endif
