#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstring>
#include <sstream>

#include "aggrefeed/graph.hpp"
#include "helpers.hpp"

using namespace aggrefeed;

namespace {

NetworkGraph directed_cycle(int n) {
  NetworkGraph g;
  g.n_agents = n;
  g.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) g.adjacency((i + 1) % n, i) = 1.0;  // edge i -> i+1
  return g;
}

}  // namespace

TEST_CASE("laplacian of 2-node bidirectional unit graph") {
  const NetworkGraph g = test::complete_graph(2);
  const LaplacianPair lap = build_laplacian(g, 1);
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK((lap.laplacian_small - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("laplacian of directed 3-cycle is I - P with zero row/col sums") {
  const NetworkGraph g = directed_cycle(3);
  const LaplacianPair lap = build_laplacian(g, 1);
  const Eigen::MatrixXd expected =
      Eigen::MatrixXd::Identity(3, 3) - g.adjacency;
  CHECK((lap.laplacian_small - expected).norm() == doctest::Approx(0.0));
  CHECK(lap.laplacian_small.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(lap.laplacian_small.colwise().sum().cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("kronecker lift replicates entries on identity blocks, 1^T L = 0") {
  const NetworkGraph g = generate_er_balanced(5, 0.6, 11);
  const LaplacianPair lap = build_laplacian(g, 2);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const Eigen::Matrix2d block = lap.laplacian_big.block<2, 2>(2 * i, 2 * j);
      const Eigen::Matrix2d expected =
          lap.laplacian_small(i, j) * Eigen::Matrix2d::Identity();
      CHECK((block - expected).norm() <= 1e-15);
    }
  }
  const Eigen::MatrixXd ones =
      Eigen::MatrixXd::Identity(2, 2).replicate(5, 1);  // 1_N (x) I_d
  CHECK((ones.transpose() * lap.laplacian_big).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((lap.laplacian_big * ones).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("weight balance checks") {
  CHECK(check_weight_balanced(test::complete_graph(4)).balanced);
  CHECK(check_weight_balanced(test::complete_graph(4)).max_imbalance ==
        doctest::Approx(0.0));
  CHECK(check_weight_balanced(directed_cycle(3)).balanced);

  NetworkGraph one_way;
  one_way.n_agents = 2;
  one_way.adjacency = Eigen::MatrixXd::Zero(2, 2);
  one_way.adjacency(1, 0) = 1.0;  // only 1 -> 2
  CHECK_FALSE(check_weight_balanced(one_way).balanced);
}

TEST_CASE("strong connectivity checks") {
  CHECK(check_strongly_connected(directed_cycle(3)));

  NetworkGraph disconnected;
  disconnected.n_agents = 2;
  disconnected.adjacency = Eigen::MatrixXd::Zero(2, 2);
  CHECK_FALSE(check_strongly_connected(disconnected));

  NetworkGraph path;
  path.n_agents = 3;
  path.adjacency = Eigen::MatrixXd::Zero(3, 3);
  path.adjacency(1, 0) = 1.0;
  path.adjacency(2, 1) = 1.0;
  CHECK_FALSE(check_strongly_connected(path));
}

TEST_CASE("validate rejects malformed graphs") {
  NetworkGraph g = test::complete_graph(3);
  g.adjacency(0, 1) = -0.5;
  CHECK_THROWS_AS(g.validate(), ValidationError);

  NetworkGraph h = test::complete_graph(3);
  h.adjacency(1, 1) = 0.3;
  CHECK_THROWS_AS(h.validate(), ValidationError);
}

TEST_CASE("generate_er_balanced: N=2 p=1 gives the single bidirectional edge") {
  const NetworkGraph g = generate_er_balanced(2, 1.0, 42);
  CHECK(g.adjacency(0, 1) > 0.0);
  CHECK(g.adjacency(1, 0) == doctest::Approx(g.adjacency(0, 1)));
  CHECK(g.adjacency(0, 1) == doctest::Approx(0.5));  // 1/(1+max(1,1))
  CHECK(check_weight_balanced(g).balanced);
  CHECK(check_strongly_connected(g));
}

TEST_CASE("generate_er_balanced: N=6 p=0.4 seed=7 passes both checks") {
  const NetworkGraph g = generate_er_balanced(6, 0.4, 7);
  CHECK(check_weight_balanced(g).balanced);
  CHECK(check_strongly_connected(g));
  CHECK_NOTHROW(g.validate());
}

TEST_CASE("generate_er_balanced: N=3 p=1 complete, laplacian column sums zero") {
  const NetworkGraph g = generate_er_balanced(3, 1.0, 0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) CHECK(g.adjacency(i, j) > 0.0);
    }
  }
  const LaplacianPair lap = build_laplacian(g, 1);
  CHECK(lap.laplacian_small.colwise().sum().cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("generate_er_balanced is reproducible byte-for-byte") {
  const NetworkGraph a = generate_er_balanced(8, 0.4, 123);
  const NetworkGraph b = generate_er_balanced(8, 0.4, 123);
  REQUIRE(a.adjacency.size() == b.adjacency.size());
  CHECK(std::memcmp(a.adjacency.data(), b.adjacency.data(),
                    sizeof(double) * a.adjacency.size()) == 0);
}

TEST_CASE("consensus basis N=2 d=1") {
  const ConsensusBasis basis = build_consensus_basis(2, 1);
  REQUIRE(basis.r_matrix.rows() == 2);
  REQUIRE(basis.r_matrix.cols() == 1);
  CHECK(std::abs(std::abs(basis.r_matrix(0, 0)) - 1.0 / std::sqrt(2.0)) <= 1e-15);
  CHECK(basis.r_matrix(0, 0) == doctest::Approx(-basis.r_matrix(1, 0)));
}

TEST_CASE("consensus basis invariants, N=3 d=1 and N=6 d=2") {
  {
    const ConsensusBasis basis = build_consensus_basis(3, 1);
    const Eigen::MatrixXd& r = basis.r_matrix;
    CHECK((r.transpose() * r - Eigen::MatrixXd::Identity(2, 2)).norm() <= 1e-14);
    CHECK((r.transpose() * Eigen::VectorXd::Ones(3)).norm() <= 1e-14);
  }
  {
    const ConsensusBasis basis = build_consensus_basis(6, 2);
    const Eigen::MatrixXd& r = basis.r_matrix;
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Identity(2, 2).replicate(6, 1);
    const Eigen::MatrixXd projector =
        Eigen::MatrixXd::Identity(12, 12) - r * r.transpose();
    CHECK((projector - ones * ones.transpose() / 6.0).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("-R^T L R is Hurwitz for generated graphs") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const NetworkGraph g = generate_er_balanced(3 + int(seed), 0.5, seed);
    const LaplacianPair lap = build_laplacian(g, 1);
    const ConsensusBasis basis = build_consensus_basis(g.n_agents, 1);
    const Eigen::MatrixXd m =
        basis.r_matrix.transpose() * lap.laplacian_small * basis.r_matrix;
    const Eigen::VectorXcd eig = m.eigenvalues();
    CHECK(eig.real().minCoeff() > 0.0);
  }
}

TEST_CASE("graph CSV round trip") {
  const NetworkGraph g = generate_er_balanced(5, 0.5, 99);
  std::stringstream buf;
  write_graph_csv(g, buf);
  const NetworkGraph back = read_graph_csv(buf);
  CHECK(back.n_agents == g.n_agents);
  CHECK((back.adjacency - g.adjacency).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("graph JSON round trip") {
  const NetworkGraph g = generate_er_balanced(4, 0.6, 5);
  std::stringstream buf;
  write_graph_json(g, buf);
  const NetworkGraph back = read_graph_json(buf);
  CHECK(back.n_agents == g.n_agents);
  CHECK((back.adjacency - g.adjacency).cwiseAbs().maxCoeff() <= 1e-15);
}
