#include "aggrefeed/controller.hpp"

namespace aggrefeed {

NetworkState NetworkState::zero(const NetworkModel& model) {
  NetworkState s;
  s.x = VectorXd::Zero(model.state_size());
  s.u = VectorXd::Zero(model.input_size());
  s.w = VectorXd::Zero(model.n_agents() * model.agg_dim);
  s.z = VectorXd::Zero(model.n_agents() * model.agg_dim);
  return s;
}

NeighborMsg make_msg(const AgentModel& agent, const AgentState& state, double weight) {
  NeighborMsg msg;
  msg.weight = weight;
  msg.w_phi = state.w + agent.aggregation(state.x);
  msg.z_grad2 = state.z + agent.grad2_cost(state.x, msg.w_phi);
  return msg;
}

AgentDerivative agent_rhs(const AgentModel& agent, const AgentState& state,
                          const std::vector<NeighborMsg>& neighbors, const Gains& gains) {
  gains.validate();
  if (state.x.size() != agent.state_dim || state.u.size() != agent.input_dim ||
      state.w.size() != agent.agg_dim || state.z.size() != agent.agg_dim) {
    throw ValidationError("agent_rhs: state dimension mismatch");
  }
  if (neighbors.empty()) {
    throw ValidationError("agent_rhs: empty neighbor list (graph not strongly connected?)");
  }

  const VectorXd sigma_est = state.w + agent.aggregation(state.x);
  const VectorXd grad2_local = agent.grad2_cost(state.x, sigma_est);
  const VectorXd grad2_est = state.z + grad2_local;

  AgentDerivative d;
  d.x_dot = agent.plant(state.x, state.u);
  d.u_dot = -gains.alpha1 * agent.steady_state_jac(state.u) *
            (agent.grad1_cost(state.x, sigma_est) +
             agent.aggregation_jac(state.x) * grad2_est);

  const double rate = gains.alpha1 / gains.alpha2;
  d.w_dot = VectorXd::Zero(agent.agg_dim);
  d.z_dot = VectorXd::Zero(agent.agg_dim);
  for (const auto& msg : neighbors) {
    if (msg.w_phi.size() != agent.agg_dim || msg.z_grad2.size() != agent.agg_dim) {
      throw ValidationError("agent_rhs: neighbor message must carry 2d reals");
    }
    d.w_dot -= rate * msg.weight * (sigma_est - msg.w_phi);
    d.z_dot -= rate * msg.weight * (grad2_est - msg.z_grad2);
  }
  return d;
}

NetworkState network_rhs(const NetworkModel& model, const NetworkState& state,
                         const Gains& gains) {
  const int n_agents = model.n_agents();
  const int d = model.agg_dim;
  if (state.x.size() != model.state_size() || state.u.size() != model.input_size() ||
      state.w.size() != n_agents * d || state.z.size() != n_agents * d) {
    throw ValidationError("network_rhs: state dimension mismatch");
  }

  std::vector<AgentState> locals(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    locals[i].x = model.state_block(state.x, i);
    locals[i].u = model.input_block(state.u, i);
    locals[i].w = state.w.segment(i * d, d);
    locals[i].z = state.z.segment(i * d, d);
  }

  NetworkState out = NetworkState::zero(model);
  for (int i = 0; i < n_agents; ++i) {
    std::vector<NeighborMsg> msgs;
    for (int j = 0; j < n_agents; ++j) {
      const double a_ij = model.graph.adjacency(i, j);
      if (a_ij > 0.0) {
        msgs.push_back(make_msg(model.agents[j], locals[j], a_ij));
      }
    }
    const AgentDerivative der = agent_rhs(model.agents[i], locals[i], msgs, gains);
    out.x.segment(model.state_offset(i), model.agents[i].state_dim) = der.x_dot;
    out.u.segment(model.input_offset(i), model.agents[i].input_dim) = der.u_dot;
    out.w.segment(i * d, d) = der.w_dot;
    out.z.segment(i * d, d) = der.z_dot;
  }
  return out;
}

VectorXd pi_w(const NetworkModel& model, const VectorXd& x) {
  const VectorXd s = sigma(model, x);
  const int d = model.agg_dim;
  VectorXd out(model.n_agents() * d);
  for (int i = 0; i < model.n_agents(); ++i) {
    out.segment(i * d, d) = s - model.agents[i].aggregation(model.state_block(x, i));
  }
  return out;
}

VectorXd pi_z(const NetworkModel& model, const VectorXd& x) {
  const VectorXd s = sigma(model, x);
  const int n_agents = model.n_agents();
  const int d = model.agg_dim;
  VectorXd grads(n_agents * d);
  VectorXd mean = VectorXd::Zero(d);
  for (int i = 0; i < n_agents; ++i) {
    grads.segment(i * d, d) = model.agents[i].grad2_cost(model.state_block(x, i), s);
    mean += grads.segment(i * d, d);
  }
  mean /= double(n_agents);
  VectorXd out(n_agents * d);
  for (int i = 0; i < n_agents; ++i) {
    out.segment(i * d, d) = mean - grads.segment(i * d, d);
  }
  return out;
}

VectorXd stacked_steady_state(const NetworkModel& model, const VectorXd& u) {
  VectorXd hx(model.state_size());
  for (int i = 0; i < model.n_agents(); ++i) {
    hx.segment(model.state_offset(i), model.agents[i].state_dim) =
        model.agents[i].steady_state(model.input_block(u, i));
  }
  return hx;
}

VectorXd stable_plant_error(const NetworkModel& model, const VectorXd& x, const VectorXd& u) {
  int total = 0;
  for (const auto& a : model.agents) total += a.stable_size();
  VectorXd err(total);
  int off = 0;
  for (int i = 0; i < model.n_agents(); ++i) {
    const int sd = model.agents[i].stable_size();
    const VectorXd hi = model.agents[i].steady_state(model.input_block(u, i));
    err.segment(off, sd) =
        x.segment(model.state_offset(i), sd) - hi.head(sd);
    off += sd;
  }
  return err;
}

Metrics metrics(const NetworkModel& model, const NetworkState& state) {
  Metrics m;
  // The optimality error uses x - h(u), the form the analysis works with
  // (for the surveillance plants h is the identity on the position block,
  // so this coincides with x - u there). Only the stable state portion
  // enters: an unconstrained heading has no steady-state target.
  const VectorXd plant_err = stable_plant_error(model, state.x, state.u);
  const VectorXd grad = grad_reduced(model, state.u);
  m.stationarity = grad.norm();
  m.e_opt = std::sqrt(plant_err.squaredNorm() + grad.squaredNorm());
  const VectorXd we = state.w - pi_w(model, state.x);
  const VectorXd ze = state.z - pi_z(model, state.x);
  m.e_wz = std::sqrt(we.squaredNorm() + ze.squaredNorm());
  m.cost = total_cost(model, state.x);
  return m;
}

}  // namespace aggrefeed
