#include "support/oracle.hpp"

#include <locdeploy/fim.hpp>
#include <locdeploy/rigidity.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace locdeploy;

namespace {

const NoiseModel kUnitAdditive(NoiseKind::AdditiveGaussian, 1.0);

struct TwoNodes {
  Configuration config{{{0, 0}, {1, 0}}, 1};
  OrientedGraph oriented{2, {{0, 1}}};
};

// Split-layout F1 built from the interleaved oracle by explicit index loops.
Eigen::MatrixXd oracle_split(const oracle::Instance& inst) {
  const Eigen::MatrixXd f = oracle::extended_fim(inst.config, inst.graph, inst.model);
  const int nodes = inst.config.num_nodes();
  Eigen::MatrixXd out(f.rows(), f.cols());
  for (int a = 0; a < 2 * nodes; ++a) {
    for (int b = 0; b < 2 * nodes; ++b) {
      out((a % 2) * nodes + a / 2, (b % 2) * nodes + b / 2) = f(a, b);
    }
  }
  return out;
}

}  // namespace

TEST(RigidityMatrix, SingleEdgeRow) {
  const TwoNodes t;
  const Eigen::MatrixXd r = rigidity_matrix(t.config, t.oriented, kUnitAdditive);
  EXPECT_EQ(r, (Eigen::MatrixXd(1, 4) << -1, 1, 0, 0).finished());
}

TEST(RigidityMatrix, AnnihilatesRigidMotions) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = oracle::random_instance(rng, 4 + trial % 9);
    const auto oriented = OrientedGraph::canonical(inst.graph);
    const Eigen::MatrixXd r = rigidity_matrix(inst.config, oriented, inst.model);
    const Eigen::MatrixXd basis = rigid_motion_basis(inst.config);
    EXPECT_LE((r * basis).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, r.cwiseAbs().maxCoeff()) * 8.0);
  }
}

TEST(IncidenceMatrix, Examples) {
  const Eigen::MatrixXd single = incidence_matrix(OrientedGraph(2, {{0, 1}}));
  EXPECT_EQ(single, (Eigen::MatrixXd(2, 1) << 1, -1).finished());
  const Eigen::MatrixXd path = incidence_matrix(OrientedGraph(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(path, (Eigen::MatrixXd(3, 2) << 1, 0, -1, 1, 0, -1).finished());
}

TEST(IncidenceMatrix, ColumnSumsVanish) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_instance(rng, 8);
    const Eigen::MatrixXd b = incidence_matrix(OrientedGraph::canonical(inst.graph));
    EXPECT_EQ(b.colwise().sum().cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(WeightMatrixQ, SingleEdge) {
  const TwoNodes t;
  const EdgeWeightMatrix q = weight_matrix_q(t.config, t.oriented, kUnitAdditive);
  EXPECT_EQ(q.xx(0), 1.0);
  EXPECT_EQ(q.xy(0), 0.0);
  EXPECT_EQ(q.yy(0), 0.0);
}

TEST(WeightMatrixQ, SymmetricPsdAndScaleInvariantUnderAdditiveNoise) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = oracle::random_instance(rng, 6);
    const auto oriented = OrientedGraph::canonical(inst.graph);
    const Eigen::MatrixXd q = weight_matrix_q(inst.config, oriented, inst.model).to_dense();
    EXPECT_EQ(q, q.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12 * q.cwiseAbs().maxCoeff());

    const NoiseModel additive(NoiseKind::AdditiveGaussian, inst.model.sigma());
    std::vector<Point> scaled(inst.config.positions().begin(), inst.config.positions().end());
    for (Point& p : scaled) p *= 3.7;
    const Configuration big(scaled, inst.config.num_mobile());
    const Eigen::MatrixXd q1 = weight_matrix_q(inst.config, oriented, additive).to_dense();
    const Eigen::MatrixXd q2 = weight_matrix_q(big, oriented, additive).to_dense();
    EXPECT_LE((q1 - q2).cwiseAbs().maxCoeff(), 1e-12 * q1.cwiseAbs().maxCoeff());
  }
}

TEST(Factorization, SingleEdgeExact) {
  const TwoNodes t;
  EXPECT_EQ(verify_prop1(t.config, t.oriented, kUnitAdditive), 0.0);
  EXPECT_EQ(verify_prop2(t.config, t.oriented, kUnitAdditive), 0.0);
}

TEST(Factorization, RandomEightNodeInstances) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = oracle::random_instance(rng, 8);
    const auto oriented = OrientedGraph::canonical(inst.graph);
    EXPECT_LE(verify_prop1(inst.config, oriented, inst.model), 1e-10);
    EXPECT_LE(verify_prop2(inst.config, oriented, inst.model), 1e-10);
  }
}

TEST(Factorization, SplitLayoutMatchesOracle) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_instance(rng, 7);
    const Eigen::MatrixXd got = split_extended_fim(inst.config, inst.graph, inst.model);
    EXPECT_LE((got - oracle_split(inst)).cwiseAbs().maxCoeff(), 1e-12 * got.cwiseAbs().maxCoeff());
  }
}

TEST(Factorization, OrientationFlipLeavesProductUnchanged) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_instance(rng, 6);
    const auto oriented = OrientedGraph::canonical(inst.graph);
    const auto flipped = oriented.with_flipped(trial % oriented.num_edges());
    const Eigen::MatrixXd a = weighted_laplacian_product(oriented, weight_matrix_q(inst.config, oriented, inst.model));
    const Eigen::MatrixXd b = weighted_laplacian_product(flipped, weight_matrix_q(inst.config, flipped, inst.model));
    EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
    const Eigen::MatrixXd ra = rigidity_matrix(inst.config, oriented, inst.model);
    const Eigen::MatrixXd rb = rigidity_matrix(inst.config, flipped, inst.model);
    EXPECT_LE((ra.transpose() * ra - rb.transpose() * rb).cwiseAbs().maxCoeff(), 1e-12 * ra.squaredNorm());
  }
}

TEST(Layout, IndexMapRoundTrip) {
  const auto map = split_coordinate_map(4);
  EXPECT_EQ(map, (std::vector<int>{0, 4, 1, 5, 2, 6, 3, 7}));
  std::mt19937_64 rng(27);
  std::normal_distribution<double> n;
  Eigen::MatrixXd a(10, 10);
  for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = n(rng);
  EXPECT_EQ(to_interleaved_layout(to_split_layout(a)), a);
}

TEST(NullSpace, RankAtMostTwoNodesMinusThree) {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = oracle::random_instance(rng, 4 + trial % 9);
    const Eigen::MatrixXd f1 = split_extended_fim(inst.config, inst.graph, inst.model);
    EXPECT_LE(numerical_rank(f1), 2 * inst.config.num_nodes() - 3);
    const double scale = std::max(1.0, f1.cwiseAbs().maxCoeff());
    EXPECT_LE(rigid_motion_residual(f1, rigid_motion_basis(inst.config)), 1e-10 * scale * 4.0);
  }
}
