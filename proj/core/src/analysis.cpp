#include "aggrefeed/analysis.hpp"

#include <complex>

#include <Eigen/Eigenvalues>

namespace aggrefeed {

TransformedState transform(const NetworkModel& model, const NetworkState& state,
                           const ConsensusBasis& basis) {
  const int n_agents = model.n_agents();
  const int d = model.agg_dim;
  if (basis.n_agents != n_agents || basis.block_dim != d) {
    throw ValidationError("transform: basis does not match model dimensions");
  }
  if (state.w.size() != n_agents * d || state.z.size() != n_agents * d) {
    throw ValidationError("transform: compensator dimension mismatch");
  }
  TransformedState out;
  out.eta = basis.r_matrix.transpose() * state.w;
  out.zeta = basis.r_matrix.transpose() * state.z;
  out.eta_avg = VectorXd::Zero(d);
  out.zeta_avg = VectorXd::Zero(d);
  for (int i = 0; i < n_agents; ++i) {
    out.eta_avg += state.w.segment(i * d, d);
    out.zeta_avg += state.z.segment(i * d, d);
  }
  out.eta_avg /= double(n_agents);
  out.zeta_avg /= double(n_agents);

  VectorXd psi(out.eta.size() + out.zeta.size());
  psi << out.eta, out.zeta;
  out.xi = psi - psi_bar(model, state.x, basis);
  return out;
}

VectorXd psi_bar(const NetworkModel& model, const VectorXd& x, const ConsensusBasis& basis) {
  const int n_agents = model.n_agents();
  const int d = model.agg_dim;
  const VectorXd s = sigma(model, x);
  VectorXd s_stack(n_agents * d);
  for (int i = 0; i < n_agents; ++i) s_stack.segment(i * d, d) = s;
  const VectorXd phi = stacked_phi(model, x);
  const VectorXd g2 = stacked_grad2(model, x, s_stack);
  VectorXd out(2 * (n_agents - 1) * d);
  out.head((n_agents - 1) * d) = -basis.r_matrix.transpose() * phi;
  out.tail((n_agents - 1) * d) = -basis.r_matrix.transpose() * g2;
  return out;
}

MatrixXd solve_lyapunov(const MatrixXd& a, const MatrixXd& q) {
  using Cplx = std::complex<double>;
  using MatrixXc = Eigen::MatrixXcd;
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || q.rows() != n || q.cols() != n) {
    throw ValidationError("solve_lyapunov: square matrices required");
  }
  Eigen::ComplexSchur<MatrixXc> schur(a.cast<Cplx>());
  if (schur.info() != Eigen::Success) {
    throw ValidationError("solve_lyapunov: Schur decomposition failed");
  }
  const MatrixXc t = schur.matrixT();
  const MatrixXc u = schur.matrixU();
  for (int i = 0; i < n; ++i) {
    if (t(i, i).real() >= 0.0) {
      throw ValidationError("solve_lyapunov: matrix is not Hurwitz");
    }
  }
  const MatrixXc c = -u.adjoint() * q * u;
  MatrixXc y = MatrixXc::Zero(n, n);
  // T^* Y + Y T = C with T upper triangular; lexicographic back-substitution.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Cplx rhs = c(i, j);
      for (int k = 0; k < i; ++k) rhs -= std::conj(t(k, i)) * y(k, j);
      for (int k = 0; k < j; ++k) rhs -= y(i, k) * t(k, j);
      y(i, j) = rhs / (std::conj(t(i, i)) + t(j, j));
    }
  }
  MatrixXd p = (u * y * u.adjoint()).real();
  return 0.5 * (p + p.transpose());
}

double LyapunovCertificate::quadratic_form(const VectorXd& xi) const {
  const int half = static_cast<int>(p1.rows());
  if (xi.size() != 2 * half) {
    throw ValidationError("quadratic_form: xi dimension mismatch");
  }
  const VectorXd xi1 = xi.head(half);
  const VectorXd xi2 = xi.tail(half);
  return xi1.dot(p1 * xi1) + xi2.dot(p2 * xi2);
}

LyapunovCertificate lyapunov_certificate(const NetworkGraph& graph, int block_dim,
                                         double q1, double q2) {
  graph.validate();
  if (!(q1 > 0.0) || !(q2 > 0.0)) throw ValidationError("q1, q2 must be positive");
  LyapunovCertificate cert;
  cert.basis = build_consensus_basis(graph.n_agents, block_dim);
  cert.q1 = q1;
  cert.q2 = q2;
  const LaplacianPair lap = build_laplacian(graph, block_dim);
  const MatrixXd m = cert.basis.r_matrix.transpose() * lap.laplacian_big * cert.basis.r_matrix;
  const int dim = static_cast<int>(m.rows());
  cert.p1 = solve_lyapunov(-m, q1 * MatrixXd::Identity(dim, dim));
  cert.p2 = solve_lyapunov(-m, q2 * MatrixXd::Identity(dim, dim));
  return cert;
}

TrajectoryLog::ExtraColumns MonitorSeries::columns() const {
  return {{"S_u", s_u},
          {"U_xi", u_xi},
          {"norm_xi", norm_xi},
          {"norm_x_minus_hu", norm_x_minus_hu},
          {"grad_norm", grad_norm}};
}

MonitorSeries monitor(const NetworkModel& model, const TrajectoryLog& log,
                      const LyapunovCertificate& cert) {
  MonitorSeries series;
  for (const auto& state : log.states) {
    const VectorXd hx = stacked_steady_state(model, state.u);
    series.s_u.push_back(total_cost(model, hx));
    const TransformedState ts = transform(model, state, cert.basis);
    series.u_xi.push_back(cert.quadratic_form(ts.xi));
    series.norm_xi.push_back(ts.xi.norm());
    series.norm_x_minus_hu.push_back(stable_plant_error(model, state.x, state.u).norm());
    series.grad_norm.push_back(grad_reduced(model, state.u).norm());
  }
  return series;
}

double stationarity_residual(const NetworkModel& model, const VectorXd& u) {
  return grad_reduced(model, u).norm();
}

}  // namespace aggrefeed
