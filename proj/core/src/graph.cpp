#include "aggrefeed/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace aggrefeed {

namespace {

constexpr double kBalanceTol = 1e-12;

void check_structure(const NetworkGraph& graph) {
  if (graph.n_agents < 1 || graph.adjacency.rows() != graph.n_agents ||
      graph.adjacency.cols() != graph.n_agents) {
    throw ValidationError("adjacency must be n_agents x n_agents");
  }
  for (int i = 0; i < graph.n_agents; ++i) {
    if (graph.adjacency(i, i) != 0.0) {
      throw ValidationError("adjacency diagonal must be zero");
    }
    for (int j = 0; j < graph.n_agents; ++j) {
      if (!(graph.adjacency(i, j) >= 0.0)) {
        throw ValidationError("adjacency weights must be nonnegative");
      }
    }
  }
}

// Directed reachability from `root` following edges (j -> i), i.e. moving
// along column j of the adjacency when transpose == false.
std::vector<bool> reachable(const Eigen::MatrixXd& a, int root, bool transpose) {
  const int n = static_cast<int>(a.rows());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int i = 0; i < n; ++i) {
      const double w = transpose ? a(v, i) : a(i, v);
      if (w > 0.0 && !seen[i]) {
        seen[i] = true;
        stack.push_back(i);
      }
    }
  }
  return seen;
}

}  // namespace

void NetworkGraph::validate() const {
  check_structure(*this);
  const auto balance = check_weight_balanced(*this);
  if (!balance.balanced) {
    std::ostringstream msg;
    msg << "graph is not weight-balanced (max imbalance " << balance.max_imbalance << ")";
    throw ValidationError(msg.str());
  }
  if (!check_strongly_connected(*this)) {
    throw ValidationError("graph is not strongly connected");
  }
}

BalanceReport check_weight_balanced(const NetworkGraph& graph) {
  check_structure(graph);
  const Eigen::VectorXd din = graph.in_degrees();
  const Eigen::VectorXd dout = graph.out_degrees();
  BalanceReport report;
  report.max_imbalance = (din - dout).cwiseAbs().maxCoeff();
  const double scale = 1.0 + std::max(din.maxCoeff(), dout.maxCoeff());
  report.balanced = report.max_imbalance <= kBalanceTol * scale;
  return report;
}

bool check_strongly_connected(const NetworkGraph& graph) {
  check_structure(graph);
  if (graph.n_agents == 1) return true;
  const auto fwd = reachable(graph.adjacency, 0, false);
  const auto bwd = reachable(graph.adjacency, 0, true);
  for (int i = 0; i < graph.n_agents; ++i) {
    if (!fwd[i] || !bwd[i]) return false;
  }
  return true;
}

LaplacianPair build_laplacian(const NetworkGraph& graph, int block_dim) {
  check_structure(graph);
  if (block_dim < 1) throw ValidationError("block_dim must be positive");
  const int n = graph.n_agents;
  LaplacianPair pair;
  pair.block_dim = block_dim;
  pair.laplacian_small = Eigen::MatrixXd(graph.in_degrees().asDiagonal()) - graph.adjacency;
  pair.laplacian_big = Eigen::MatrixXd::Zero(n * block_dim, n * block_dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pair.laplacian_big.block(i * block_dim, j * block_dim, block_dim, block_dim) =
          pair.laplacian_small(i, j) * Eigen::MatrixXd::Identity(block_dim, block_dim);
    }
  }
  return pair;
}

NetworkGraph generate_er_balanced(int n_agents, double edge_prob, std::uint64_t seed,
                                  int max_retries) {
  if (n_agents < 2) throw ValidationError("generate_er_balanced requires N >= 2");
  if (!(edge_prob > 0.0 && edge_prob <= 1.0)) {
    throw ValidationError("edge_prob must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Eigen::MatrixXd keep = Eigen::MatrixXd::Zero(n_agents, n_agents);
    for (int i = 0; i < n_agents; ++i) {
      for (int j = i + 1; j < n_agents; ++j) {
        if (coin(rng) < edge_prob) {
          keep(i, j) = keep(j, i) = 1.0;
        }
      }
    }
    Eigen::VectorXd deg = keep.rowwise().sum();
    NetworkGraph graph;
    graph.n_agents = n_agents;
    graph.adjacency = Eigen::MatrixXd::Zero(n_agents, n_agents);
    for (int i = 0; i < n_agents; ++i) {
      for (int j = 0; j < n_agents; ++j) {
        if (keep(i, j) > 0.0) {
          graph.adjacency(i, j) = 1.0 / (1.0 + std::max(deg(i), deg(j)));
        }
      }
    }
    if (check_strongly_connected(graph)) return graph;
  }
  std::ostringstream msg;
  msg << "no strongly connected Erdos-Renyi draw in " << max_retries
      << " attempts (edge_prob too small?)";
  throw ValidationError(msg.str());
}

ConsensusBasis build_consensus_basis(int n_agents, int block_dim) {
  if (n_agents < 2) throw ValidationError("consensus basis requires N >= 2");
  if (block_dim < 1) throw ValidationError("block_dim must be positive");
  const int n = n_agents;
  // Householder reflector H = I - 2 v v^T mapping 1/sqrt(N) onto e_1.
  // Columns 2..N of H form an orthonormal basis of span(1)^perp.
  Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  Eigen::VectorXd v = ones - Eigen::VectorXd::Unit(n, 0);
  v.normalize();
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose();
  Eigen::MatrixXd r_small = h.rightCols(n - 1);

  ConsensusBasis basis;
  basis.n_agents = n_agents;
  basis.block_dim = block_dim;
  basis.r_matrix = Eigen::MatrixXd::Zero(n * block_dim, (n - 1) * block_dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n - 1; ++j) {
      basis.r_matrix.block(i * block_dim, j * block_dim, block_dim, block_dim) =
          r_small(i, j) * Eigen::MatrixXd::Identity(block_dim, block_dim);
    }
  }
  return basis;
}

NetworkGraph read_graph_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  NetworkGraph graph;
  graph.n_agents = n;
  graph.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw ValidationError("adjacency CSV must be square");
    }
    for (int j = 0; j < n; ++j) graph.adjacency(i, j) = rows[i][j];
  }
  check_structure(graph);
  return graph;
}

void write_graph_csv(const NetworkGraph& graph, std::ostream& out) {
  char buf[32];
  for (int i = 0; i < graph.n_agents; ++i) {
    for (int j = 0; j < graph.n_agents; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", graph.adjacency(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

NetworkGraph read_graph_json(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  const int n = doc.at("n").get<int>();
  NetworkGraph graph;
  graph.n_agents = n;
  graph.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (const auto& edge : doc.at("edges")) {
    const int from = edge.at(0).get<int>();
    const int to = edge.at(1).get<int>();
    if (from < 0 || from >= n || to < 0 || to >= n) {
      throw ValidationError("edge endpoint out of range");
    }
    graph.adjacency(to, from) = edge.at(2).get<double>();
  }
  check_structure(graph);
  return graph;
}

void write_graph_json(const NetworkGraph& graph, std::ostream& out) {
  nlohmann::json edges = nlohmann::json::array();
  for (int i = 0; i < graph.n_agents; ++i) {
    for (int j = 0; j < graph.n_agents; ++j) {
      if (graph.adjacency(i, j) > 0.0) {
        edges.push_back({j, i, graph.adjacency(i, j)});
      }
    }
  }
  nlohmann::json doc{{"n", graph.n_agents}, {"edges", edges}};
  out << doc.dump(2) << "\n";
}

}  // namespace aggrefeed
