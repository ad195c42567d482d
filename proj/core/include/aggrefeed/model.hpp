#ifndef AGGREFEED_MODEL_HPP
#define AGGREFEED_MODEL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aggrefeed/graph.hpp"

namespace aggrefeed {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// One agent's problem data. All callables must be pure: repeated evaluation
/// at the same point returns the same value, no hidden mutable state. The
/// library may evaluate different agents' oracles concurrently.
///
/// Jacobian conventions: steady_state_jac(u) is the m_i x n_i matrix that
/// premultiplies gradients (so the reduced gradient is a plain matrix-vector
/// product), aggregation_jac(x) is n_i x d.
struct AgentModel {
  int state_dim = 0;  // n_i
  int input_dim = 0;  // m_i
  int agg_dim = 0;    // d, shared across agents

  // Leading portion of the state that is exponentially stable and that the
  // cost depends on; error metrics compare only x_i.head(stable_dim) against
  // h_i(u_i). 0 means the full state (the common case). The unicycle sets 2:
  // its heading equilibrates wherever the approach left it.
  int stable_dim = 0;

  int stable_size() const { return stable_dim > 0 ? stable_dim : state_dim; }

  std::function<VectorXd(const VectorXd&, const VectorXd&)> plant;        // p_i(x_i, u_i)
  std::function<VectorXd(const VectorXd&)> steady_state;                  // h_i(u_i)
  std::function<MatrixXd(const VectorXd&)> steady_state_jac;              // m_i x n_i
  std::function<VectorXd(const VectorXd&, const VectorXd&)> grad1_cost;   // in R^{n_i}
  std::function<VectorXd(const VectorXd&, const VectorXd&)> grad2_cost;   // in R^d
  std::function<double(const VectorXd&, const VectorXd&)> cost;           // monitors only
  std::function<VectorXd(const VectorXd&)> aggregation;                   // phi_i
  std::function<MatrixXd(const VectorXd&)> aggregation_jac;               // n_i x d
};

/// The whole network: agents plus the communication graph.
struct NetworkModel {
  std::vector<AgentModel> agents;
  NetworkGraph graph;
  int agg_dim = 0;

  int n_agents() const { return static_cast<int>(agents.size()); }
  int state_size() const;  // n = sum n_i
  int input_size() const;  // m = sum m_i
  int state_offset(int agent) const;
  int input_offset(int agent) const;

  Eigen::VectorBlock<const VectorXd> state_block(const VectorXd& x, int agent) const;
  Eigen::VectorBlock<const VectorXd> input_block(const VectorXd& u, int agent) const;

  /// Checks shared agg_dim, graph size, and that all callables are set.
  void validate() const;
};

/// sigma(x) = (1/N) sum_i phi_i(x_i).
VectorXd sigma(const NetworkModel& model, const VectorXd& x);

/// F(x, sigma(x)) = sum_i f_i(x_i, sigma(x)).
double total_cost(const NetworkModel& model, const VectorXd& x);

/// G(x): i-th block is grad1 f_i(x_i, s) + (dphi_i(x_i)/N) sum_j grad2 f_j(x_j, s)
/// with s = sigma(x).
VectorXd grad_total(const NetworkModel& model, const VectorXd& x);

/// Reduced gradient of u -> F(h(u), sigma(h(u))): i-th block is
/// steady_state_jac_i(u_i) * [G(h(u))]_i.
VectorXd grad_reduced(const NetworkModel& model, const VectorXd& u);

/// Stacked grad2: i-th block is grad2 f_i(x_i, s_i), with s the stacked
/// per-agent estimates in R^{Nd}.
VectorXd stacked_grad2(const NetworkModel& model, const VectorXd& x, const VectorXd& s);

/// Stacked aggregation contributions col(phi_1(x_1), ..., phi_N(x_N)).
VectorXd stacked_phi(const NetworkModel& model, const VectorXd& x);

struct OracleReport {
  std::string name;
  double max_rel_error = 0.0;
  bool ok = true;
};

struct FiniteDiffReport {
  std::vector<OracleReport> oracles;
  bool all_ok() const;
};

/// Central-difference sweep over every analytic derivative (grad1, grad2,
/// aggregation_jac, steady-state consistency via the plant, grad_total,
/// grad_reduced) at `samples` seeded random points. Flags any oracle whose
/// max relative error exceeds 1e-5.
FiniteDiffReport finite_diff_check(const NetworkModel& model, int samples, std::uint64_t seed);

}  // namespace aggrefeed

#endif
