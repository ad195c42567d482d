#ifndef AGGREFEED_ANALYSIS_HPP
#define AGGREFEED_ANALYSIS_HPP

#include "aggrefeed/graph.hpp"
#include "aggrefeed/sim.hpp"

namespace aggrefeed {

/// Consensus/disagreement coordinates of the compensators:
/// col(eta, eta_avg) = T w and col(zeta, zeta_avg) = T z with
/// T = [R  1/N]^T, psi = col(eta, zeta), xi = psi - psi_bar(x).
struct TransformedState {
  VectorXd eta;
  VectorXd zeta;
  VectorXd eta_avg;
  VectorXd zeta_avg;
  VectorXd xi;
};

TransformedState transform(const NetworkModel& model, const NetworkState& state,
                           const ConsensusBasis& basis);

/// psi_bar(x) = -blkdiag(R^T, R^T) col(phi(x), G2(x, 1 sigma(x))), the
/// equilibrium of the disagreement dynamics for frozen x.
VectorXd psi_bar(const NetworkModel& model, const VectorXd& x, const ConsensusBasis& basis);

/// Solves A^T P + P A = -Q for Hurwitz A (Bartels-Stewart via complex Schur).
MatrixXd solve_lyapunov(const MatrixXd& a, const MatrixXd& q);

/// P1, P2 solving -P_k M - M^T P_k = -q_k I with M = R^T L R. Construction
/// fails if -M is not numerically Hurwitz.
struct LyapunovCertificate {
  ConsensusBasis basis;
  double q1 = 1.0;
  double q2 = 1.0;
  MatrixXd p1;
  MatrixXd p2;

  /// U(xi) = xi^T blkdiag(P1, P2) xi.
  double quadratic_form(const VectorXd& xi) const;
};

LyapunovCertificate lyapunov_certificate(const NetworkGraph& graph, int block_dim,
                                         double q1 = 1.0, double q2 = 1.0);

/// Per-sample monitor series over a finished trajectory.
struct MonitorSeries {
  std::vector<double> s_u;              // F_{sigma,h}(u)
  std::vector<double> u_xi;             // xi^T P xi
  std::vector<double> norm_xi;
  std::vector<double> norm_x_minus_hu;
  std::vector<double> grad_norm;        // || grad_reduced(u) ||

  TrajectoryLog::ExtraColumns columns() const;
};

MonitorSeries monitor(const NetworkModel& model, const TrajectoryLog& log,
                      const LyapunovCertificate& cert);

/// || grad_reduced(u) ||; below tolerance certifies numerical stationarity.
double stationarity_residual(const NetworkModel& model, const VectorXd& u);

}  // namespace aggrefeed

#endif
