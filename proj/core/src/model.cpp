#include "aggrefeed/model.hpp"

#include <cmath>
#include <random>

namespace aggrefeed {

int NetworkModel::state_size() const {
  int n = 0;
  for (const auto& a : agents) n += a.state_dim;
  return n;
}

int NetworkModel::input_size() const {
  int m = 0;
  for (const auto& a : agents) m += a.input_dim;
  return m;
}

int NetworkModel::state_offset(int agent) const {
  int off = 0;
  for (int i = 0; i < agent; ++i) off += agents[i].state_dim;
  return off;
}

int NetworkModel::input_offset(int agent) const {
  int off = 0;
  for (int i = 0; i < agent; ++i) off += agents[i].input_dim;
  return off;
}

Eigen::VectorBlock<const VectorXd> NetworkModel::state_block(const VectorXd& x, int agent) const {
  return x.segment(state_offset(agent), agents[agent].state_dim);
}

Eigen::VectorBlock<const VectorXd> NetworkModel::input_block(const VectorXd& u, int agent) const {
  return u.segment(input_offset(agent), agents[agent].input_dim);
}

void NetworkModel::validate() const {
  if (agents.empty()) throw ValidationError("model has no agents");
  if (graph.n_agents != n_agents()) {
    throw ValidationError("graph size does not match agent count");
  }
  for (const auto& a : agents) {
    if (a.agg_dim != agg_dim) throw ValidationError("agents must share agg_dim");
    if (a.state_dim < 1 || a.input_dim < 1 || a.agg_dim < 1) {
      throw ValidationError("agent dimensions must be positive");
    }
    if (!a.plant || !a.steady_state || !a.steady_state_jac || !a.grad1_cost ||
        !a.grad2_cost || !a.cost || !a.aggregation || !a.aggregation_jac) {
      throw ValidationError("agent callables must all be set");
    }
  }
}

namespace {

void require_size(const VectorXd& v, int expected, const char* what) {
  if (v.size() != expected) {
    throw ValidationError(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

VectorXd sigma(const NetworkModel& model, const VectorXd& x) {
  require_size(x, model.state_size(), "sigma");
  VectorXd s = VectorXd::Zero(model.agg_dim);
  for (int i = 0; i < model.n_agents(); ++i) {
    s += model.agents[i].aggregation(model.state_block(x, i));
  }
  return s / double(model.n_agents());
}

double total_cost(const NetworkModel& model, const VectorXd& x) {
  require_size(x, model.state_size(), "total_cost");
  const VectorXd s = sigma(model, x);
  double f = 0.0;
  for (int i = 0; i < model.n_agents(); ++i) {
    f += model.agents[i].cost(model.state_block(x, i), s);
  }
  return f;
}

VectorXd grad_total(const NetworkModel& model, const VectorXd& x) {
  require_size(x, model.state_size(), "grad_total");
  const int n_agents = model.n_agents();
  const VectorXd s = sigma(model, x);
  VectorXd grad2_sum = VectorXd::Zero(model.agg_dim);
  for (int j = 0; j < n_agents; ++j) {
    grad2_sum += model.agents[j].grad2_cost(model.state_block(x, j), s);
  }
  VectorXd g(model.state_size());
  for (int i = 0; i < n_agents; ++i) {
    const auto xi = model.state_block(x, i);
    g.segment(model.state_offset(i), model.agents[i].state_dim) =
        model.agents[i].grad1_cost(xi, s) +
        model.agents[i].aggregation_jac(xi) * grad2_sum / double(n_agents);
  }
  return g;
}

VectorXd grad_reduced(const NetworkModel& model, const VectorXd& u) {
  require_size(u, model.input_size(), "grad_reduced");
  VectorXd x(model.state_size());
  for (int i = 0; i < model.n_agents(); ++i) {
    x.segment(model.state_offset(i), model.agents[i].state_dim) =
        model.agents[i].steady_state(model.input_block(u, i));
  }
  const VectorXd g = grad_total(model, x);
  VectorXd out(model.input_size());
  for (int i = 0; i < model.n_agents(); ++i) {
    out.segment(model.input_offset(i), model.agents[i].input_dim) =
        model.agents[i].steady_state_jac(model.input_block(u, i)) *
        g.segment(model.state_offset(i), model.agents[i].state_dim);
  }
  return out;
}

VectorXd stacked_grad2(const NetworkModel& model, const VectorXd& x, const VectorXd& s) {
  require_size(x, model.state_size(), "stacked_grad2");
  require_size(s, model.n_agents() * model.agg_dim, "stacked_grad2 estimates");
  VectorXd out(model.n_agents() * model.agg_dim);
  for (int i = 0; i < model.n_agents(); ++i) {
    out.segment(i * model.agg_dim, model.agg_dim) = model.agents[i].grad2_cost(
        model.state_block(x, i), s.segment(i * model.agg_dim, model.agg_dim));
  }
  return out;
}

VectorXd stacked_phi(const NetworkModel& model, const VectorXd& x) {
  require_size(x, model.state_size(), "stacked_phi");
  VectorXd out(model.n_agents() * model.agg_dim);
  for (int i = 0; i < model.n_agents(); ++i) {
    out.segment(i * model.agg_dim, model.agg_dim) =
        model.agents[i].aggregation(model.state_block(x, i));
  }
  return out;
}

bool FiniteDiffReport::all_ok() const {
  for (const auto& o : oracles) {
    if (!o.ok) return false;
  }
  return true;
}

namespace {

constexpr double kFlagTol = 1e-5;

double rel_error(const VectorXd& analytic, const VectorXd& numeric) {
  return (analytic - numeric).norm() / (1.0 + analytic.norm());
}

double fd_step(const VectorXd& point) { return 1e-6 * (1.0 + point.norm()); }

// Central-difference gradient of a scalar function.
template <typename F>
VectorXd fd_gradient(const F& f, const VectorXd& p) {
  const double h = fd_step(p);
  VectorXd g(p.size());
  VectorXd q = p;
  for (int k = 0; k < p.size(); ++k) {
    q(k) = p(k) + h;
    const double fp = f(q);
    q(k) = p(k) - h;
    const double fm = f(q);
    q(k) = p(k);
    g(k) = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Central-difference Jacobian of a vector function, row index = input
// component (the premultiplying convention used throughout).
template <typename F>
MatrixXd fd_jacobian_t(const F& f, const VectorXd& p, int out_dim) {
  const double h = fd_step(p);
  MatrixXd j(p.size(), out_dim);
  VectorXd q = p;
  for (int k = 0; k < p.size(); ++k) {
    q(k) = p(k) + h;
    const VectorXd fp = f(q);
    q(k) = p(k) - h;
    const VectorXd fm = f(q);
    q(k) = p(k);
    j.row(k) = ((fp - fm) / (2.0 * h)).transpose();
  }
  return j;
}

}  // namespace

FiniteDiffReport finite_diff_check(const NetworkModel& model, int samples, std::uint64_t seed) {
  model.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-100.0, 100.0);
  auto draw = [&](int dim) {
    VectorXd v(dim);
    for (int k = 0; k < dim; ++k) v(k) = unif(rng);
    return v;
  };

  OracleReport grad1{"grad1_cost"}, grad2{"grad2_cost"}, agg_jac{"aggregation_jac"},
      ss_jac{"steady_state_jac"}, ss_cons{"steady_state_consistency"},
      g_total{"grad_total"}, g_reduced{"grad_reduced"};

  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < model.n_agents(); ++i) {
      const auto& agent = model.agents[i];
      const VectorXd xi = draw(agent.state_dim);
      const VectorXd si = draw(agent.agg_dim);
      const VectorXd ui = draw(agent.input_dim);

      grad1.max_rel_error = std::max(
          grad1.max_rel_error,
          rel_error(agent.grad1_cost(xi, si),
                    fd_gradient([&](const VectorXd& p) { return agent.cost(p, si); }, xi)));
      grad2.max_rel_error = std::max(
          grad2.max_rel_error,
          rel_error(agent.grad2_cost(xi, si),
                    fd_gradient([&](const VectorXd& p) { return agent.cost(xi, p); }, si)));
      {
        const MatrixXd a = agent.aggregation_jac(xi);
        const MatrixXd n = fd_jacobian_t(agent.aggregation, xi, agent.agg_dim);
        agg_jac.max_rel_error = std::max(agg_jac.max_rel_error,
                                         (a - n).norm() / (1.0 + a.norm()));
      }
      {
        const MatrixXd a = agent.steady_state_jac(ui);
        const MatrixXd n = fd_jacobian_t(agent.steady_state, ui, agent.state_dim);
        ss_jac.max_rel_error =
            std::max(ss_jac.max_rel_error, (a - n).norm() / (1.0 + a.norm()));
      }
      ss_cons.max_rel_error = std::max(
          ss_cons.max_rel_error, agent.plant(agent.steady_state(ui), ui).norm());
    }

    const VectorXd x = draw(model.state_size());
    const VectorXd u = draw(model.input_size());
    g_total.max_rel_error = std::max(
        g_total.max_rel_error,
        rel_error(grad_total(model, x),
                  fd_gradient([&](const VectorXd& p) { return total_cost(model, p); }, x)));
    g_reduced.max_rel_error = std::max(
        g_reduced.max_rel_error,
        rel_error(grad_reduced(model, u), fd_gradient(
                                              [&](const VectorXd& p) {
                                                VectorXd hx(model.state_size());
                                                for (int i = 0; i < model.n_agents(); ++i) {
                                                  hx.segment(model.state_offset(i),
                                                             model.agents[i].state_dim) =
                                                      model.agents[i].steady_state(
                                                          model.input_block(p, i));
                                                }
                                                return total_cost(model, hx);
                                              },
                                              u)));
  }

  FiniteDiffReport report;
  for (auto* o : {&grad1, &grad2, &agg_jac, &ss_jac, &g_total, &g_reduced}) {
    o->ok = o->max_rel_error <= kFlagTol;
    report.oracles.push_back(*o);
  }
  ss_cons.ok = ss_cons.max_rel_error <= 1e-9;
  report.oracles.push_back(ss_cons);
  return report;
}

}  // namespace aggrefeed
