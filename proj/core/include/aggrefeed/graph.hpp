#ifndef AGGREFEED_GRAPH_HPP
#define AGGREFEED_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace aggrefeed {

/// Thrown when a graph, model, or config fails structural validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weighted directed communication graph. Entry adjacency(i, j) = a_ij > 0
/// means agent i receives from agent j (edge j -> i). Diagonal is zero.
struct NetworkGraph {
  int n_agents = 0;
  Eigen::MatrixXd adjacency;

  Eigen::VectorXd in_degrees() const { return adjacency.rowwise().sum(); }
  Eigen::VectorXd out_degrees() const { return adjacency.colwise().sum(); }

  /// Rejects negative weights, nonzero diagonal, imbalance, or a graph that
  /// is not strongly connected.
  void validate() const;
};

struct BalanceReport {
  bool balanced = false;
  double max_imbalance = 0.0;
};

/// Small Laplacian L_small = D_in - A and its Kronecker lift
/// L_big = L_small (x) I_d.
struct LaplacianPair {
  Eigen::MatrixXd laplacian_small;
  Eigen::MatrixXd laplacian_big;
  int block_dim = 1;
};

/// Orthonormal basis R of the subspace orthogonal to span(1_N (x) I_d):
/// R^T R = I, R^T 1 = 0, I - R R^T = 1 1^T / N.
struct ConsensusBasis {
  int n_agents = 0;
  int block_dim = 0;
  Eigen::MatrixXd r_matrix;  // Nd x (N-1)d
};

BalanceReport check_weight_balanced(const NetworkGraph& graph);
bool check_strongly_connected(const NetworkGraph& graph);

LaplacianPair build_laplacian(const NetworkGraph& graph, int block_dim);

/// Symmetric Erdos-Renyi draw with Metropolis-Hastings weights
/// a_ij = 1 / (1 + max(deg_i, deg_j)); redraws until strongly connected.
NetworkGraph generate_er_balanced(int n_agents, double edge_prob, std::uint64_t seed,
                                  int max_retries = 100);

/// Deterministic Householder construction, Kronecker-lifted by I_d.
ConsensusBasis build_consensus_basis(int n_agents, int block_dim);

// Adjacency I/O: CSV of N rows with N comma-separated weights, or a JSON
// object {"n": N, "edges": [[j, i, w], ...]}.
NetworkGraph read_graph_csv(std::istream& in);
void write_graph_csv(const NetworkGraph& graph, std::ostream& out);
NetworkGraph read_graph_json(std::istream& in);
void write_graph_json(const NetworkGraph& graph, std::ostream& out);

}  // namespace aggrefeed

#endif
