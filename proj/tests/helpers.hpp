#ifndef AGGREFEED_TESTS_HELPERS_HPP
#define AGGREFEED_TESTS_HELPERS_HPP

#include <random>
#include <vector>

#include "aggrefeed/controller.hpp"
#include "aggrefeed/model.hpp"

namespace aggrefeed::test {

inline NetworkGraph complete_graph(int n, double weight = 1.0) {
  NetworkGraph g;
  g.n_agents = n;
  g.adjacency = Eigen::MatrixXd::Constant(n, n, weight);
  g.adjacency.diagonal().setZero();
  return g;
}

/// Scalar agents with p = u - x, phi_i = beta_i * x, f_i = (x_i - s)^2.
inline NetworkModel scalar_consensus_model(const std::vector<double>& beta) {
  NetworkModel m;
  m.agg_dim = 1;
  m.graph = complete_graph(static_cast<int>(beta.size()));
  for (double b : beta) {
    AgentModel a;
    a.state_dim = a.input_dim = a.agg_dim = 1;
    a.plant = [](const VectorXd& x, const VectorXd& u) { return VectorXd(u - x); };
    a.steady_state = [](const VectorXd& u) { return u; };
    a.steady_state_jac = [](const VectorXd& u) {
      return MatrixXd::Identity(u.size(), u.size());
    };
    a.cost = [](const VectorXd& x, const VectorXd& s) {
      return (x(0) - s(0)) * (x(0) - s(0));
    };
    a.grad1_cost = [](const VectorXd& x, const VectorXd& s) {
      return VectorXd(2.0 * (x - s));
    };
    a.grad2_cost = [](const VectorXd& x, const VectorXd& s) {
      return VectorXd(-2.0 * (x - s));
    };
    a.aggregation = [b](const VectorXd& x) { return VectorXd(b * x); };
    a.aggregation_jac = [b](const VectorXd&) {
      return MatrixXd::Constant(1, 1, b);
    };
    m.agents.push_back(a);
  }
  return m;
}

/// Zero-cost network: p = u - x, phi = 0, f = 0; the closed loop reduces to
/// the bare plants.
inline NetworkModel zero_cost_model(int n, int d = 1) {
  NetworkModel m;
  m.agg_dim = d;
  m.graph = complete_graph(n);
  for (int i = 0; i < n; ++i) {
    AgentModel a;
    a.state_dim = a.input_dim = d;
    a.agg_dim = d;
    a.plant = [](const VectorXd& x, const VectorXd& u) { return VectorXd(u - x); };
    a.steady_state = [](const VectorXd& u) { return u; };
    a.steady_state_jac = [](const VectorXd& u) {
      return MatrixXd::Identity(u.size(), u.size());
    };
    a.cost = [](const VectorXd&, const VectorXd&) { return 0.0; };
    a.grad1_cost = [d](const VectorXd&, const VectorXd&) { return VectorXd(VectorXd::Zero(d)); };
    a.grad2_cost = [d](const VectorXd&, const VectorXd&) { return VectorXd(VectorXd::Zero(d)); };
    a.aggregation = [d](const VectorXd&) { return VectorXd(VectorXd::Zero(d)); };
    a.aggregation_jac = [d](const VectorXd&) { return MatrixXd(MatrixXd::Zero(d, d)); };
    m.agents.push_back(a);
  }
  return m;
}

inline VectorXd random_vector(std::mt19937_64& rng, int n, double lo = -10.0,
                              double hi = 10.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  VectorXd v(n);
  for (int k = 0; k < n; ++k) v(k) = unif(rng);
  return v;
}

inline NetworkState random_state(std::mt19937_64& rng, const NetworkModel& model) {
  NetworkState s;
  s.x = random_vector(rng, model.state_size());
  s.u = random_vector(rng, model.input_size());
  s.w = random_vector(rng, model.n_agents() * model.agg_dim);
  s.z = random_vector(rng, model.n_agents() * model.agg_dim);
  return s;
}

}  // namespace aggrefeed::test

#endif
