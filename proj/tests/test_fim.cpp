#include "support/oracle.hpp"

#include <locdeploy/errors.hpp>
#include <locdeploy/fim.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace locdeploy;

namespace {

const NoiseModel kUnitAdditive(NoiseKind::AdditiveGaussian, 1.0);

Configuration perpendicular_anchors() { return Configuration({{0, 0}, {1, 0}, {0, 1}}, 1); }

RangingGraph complete(int nodes) {
  RangingGraph g(nodes);
  for (int i = 0; i < nodes; ++i)
    for (int j = i + 1; j < nodes; ++j) g.add_edge(i, j);
  return g;
}

}  // namespace

TEST(FimBlock, AxisAlignedUnitEdge) {
  const Block b = fim_block({0, 0}, {1, 0}, kUnitAdditive, true);
  EXPECT_EQ(b, (Block() << -1, 0, 0, 0).finished());
}

TEST(FimBlock, NotConnectedIsZero) {
  EXPECT_EQ(fim_block({0.3, 2}, {-1, 7}, kUnitAdditive, false), Block::Zero());
}

TEST(FimBlock, MultiplicativeVertical) {
  const Block b = fim_block({0, 0}, {0, 2}, NoiseModel(NoiseKind::MultiplicativeLogNormal, 0.5), true);
  EXPECT_NEAR((b - (Block() << 0, 0, 0, -1).finished()).norm(), 0.0, 1e-15);
}

TEST(FimBlock, CoincidentPointsThrow) {
  EXPECT_THROW(fim_block({1, 1}, {1, 1}, kUnitAdditive, true), CoincidentPointsError);
}

TEST(FimBlock, SymmetricNsdRankOneWithKnownTrace) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const Point pi(u(rng), u(rng));
    const Point pj(u(rng), u(rng));
    const NoiseModel m(trial % 2 ? NoiseKind::AdditiveGaussian : NoiseKind::MultiplicativeLogNormal, 0.1 + trial * 0.01);
    const Block b = fim_block(pi, pj, m, true);
    EXPECT_EQ(b, b.transpose());
    Eigen::SelfAdjointEigenSolver<Block> eig(b);
    EXPECT_LE(eig.eigenvalues().maxCoeff(), 1e-12 * b.norm());
    EXPECT_NEAR(eig.eigenvalues().maxCoeff(), 0.0, 1e-12 * b.norm());
    const double d = (pi - pj).norm();
    const double expected = -d * d / (m.sigma() * m.sigma() * std::pow(d, 2 * m.alpha()));
    EXPECT_NEAR(b.trace(), expected, 1e-12 * std::abs(expected));
  }
}

TEST(FimBlock, RotationCovariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const Point pi(u(rng), u(rng));
    const Point pj(u(rng), u(rng));
    const Eigen::Rotation2Dd rot(u(rng));
    const Eigen::Matrix2d r = rot.toRotationMatrix();
    const NoiseModel m(trial % 2 ? NoiseKind::AdditiveGaussian : NoiseKind::MultiplicativeLogNormal, 0.7);
    const Block lhs = fim_block(r * pi, r * pj, m, true);
    const Block rhs = r * fim_block(pi, pj, m, true) * r.transpose();
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
  }
}

TEST(AssembleFim, PerpendicularAnchorsGiveIdentity) {
  const BlockMatrix f = assemble_fim(perpendicular_anchors(), complete(3), kUnitAdditive);
  EXPECT_EQ(f.to_dense(), Eigen::Matrix2d::Identity());
}

TEST(AssembleFim, CollinearAnchorsSingular) {
  RangingGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  const Configuration c({{0, 0}, {1, 0}, {2, 0}}, 1);
  EXPECT_EQ(assemble_fim(c, g, kUnitAdditive).to_dense(), (Eigen::Matrix2d() << 2, 0, 0, 0).finished());
}

TEST(AssembleFim, MatchesDenseOracleOnRandomInstances) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = oracle::random_instance(rng, 4 + trial % 8);
    const Eigen::MatrixXd got = assemble_fim(inst.config, inst.graph, inst.model).to_dense();
    const Eigen::MatrixXd want = oracle::fim(inst.config, inst.graph, inst.model);
    EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-12 * want.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(got);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(AssembleFim, TranslationInvariant) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_instance(rng, 7);
    const Eigen::MatrixXd a = assemble_fim(inst.config, inst.graph, inst.model).to_dense();
    const Eigen::MatrixXd b = assemble_fim(inst.config.translated({12.5, -7.25}), inst.graph, inst.model).to_dense();
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-9 * a.cwiseAbs().maxCoeff());
  }
}

TEST(AssembleFim, SeedGeometryIsPositiveDefinite) {
  // Anchors at the origin and unit axes; four mobiles on the x-axis with the
  // two farthest cut off from the anchors at (0,0) and (0,1).
  const Configuration c({{3, 0.02}, {4, -0.03}, {5, 0.01}, {6, 0.04}, {0, 0}, {1, 0}, {0, 1}}, 4);
  RangingGraph g = complete(7);
  RangingGraph cut(7);
  for (const Edge& e : g.edges()) {
    const bool far = e.a == 2 || e.a == 3;
    if (far && (e.b == 4 || e.b == 6)) continue;
    cut.add_edge(e.a, e.b);
  }
  const Eigen::MatrixXd f = assemble_fim(c, cut, NoiseModel(NoiseKind::AdditiveGaussian, 0.1)).to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f);
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(ExtendedFim, SingleEdge) {
  const Configuration c({{0, 0}, {1, 0}}, 1);
  RangingGraph g(2);
  g.add_edge(0, 1);
  Eigen::Matrix4d want;
  want << 1, 0, -1, 0, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0, 0, 0;
  EXPECT_EQ(assemble_extended_fim(c, g, kUnitAdditive).to_dense(), want);
}

TEST(ExtendedFim, BlockRowsSumToZeroAndLeadingBlockIsF) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = oracle::random_instance(rng, 6);
    const BlockMatrix ext = assemble_extended_fim(inst.config, inst.graph, inst.model);
    const Eigen::MatrixXd dense = ext.to_dense();
    const double scale = dense.cwiseAbs().maxCoeff();
    for (int i = 0; i < ext.block_dim(); ++i) {
      Block sum = Block::Zero();
      for (int j = 0; j < ext.block_dim(); ++j) sum += ext.block(i, j);
      EXPECT_LE(sum.cwiseAbs().maxCoeff(), 1e-12 * scale);
    }
    Eigen::VectorXd tx = Eigen::VectorXd::Zero(dense.cols());
    for (Eigen::Index k = 0; k < tx.size(); k += 2) tx(k) = 1.0;
    EXPECT_LE((dense * tx).cwiseAbs().maxCoeff(), 1e-12 * scale);
    const int n = inst.config.num_mobile();
    EXPECT_EQ(dense.topLeftCorner(2 * n, 2 * n), assemble_fim(inst.config, inst.graph, inst.model).to_dense());
  }
}

TEST(FimBlockDerivative, Examples) {
  EXPECT_EQ(fim_block_derivative({0, 0}, {1, 0}, kUnitAdditive, Axis::X), Block::Zero());
  const Block dy = fim_block_derivative({0, 0}, {1, 0}, kUnitAdditive, Axis::Y);
  EXPECT_NEAR((dy - (Block() << 0, 1, 1, 0).finished()).norm(), 0.0, 1e-15);
}

TEST(FimBlockDerivative, MatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const Point pi(u(rng), u(rng));
    const Point pj = pi + Point(0.5 + std::abs(u(rng)), u(rng));
    const NoiseModel m(trial % 2 ? NoiseKind::AdditiveGaussian : NoiseKind::MultiplicativeLogNormal, 0.3);
    for (Axis axis : {Axis::X, Axis::Y}) {
      const Point e = axis == Axis::X ? Point(h, 0) : Point(0, h);
      const Block fd = (fim_block(pi + e, pj, m, true) - fim_block(pi - e, pj, m, true)) / (2 * h);
      const Block an = fim_block_derivative(pi, pj, m, axis);
      EXPECT_LE((an - fd).norm(), 1e-6 * std::max(1.0, fd.norm()));
    }
  }
}

TEST(AssembleFimDerivative, SingleAnchorNeighbor) {
  RangingGraph g(2);
  g.add_edge(0, 1);
  const BlockMatrix d = assemble_fim_derivative(Configuration({{0, 0}, {1, 0}}, 1), g, kUnitAdditive, 0, Axis::X);
  EXPECT_EQ(d.to_dense(), Eigen::Matrix2d::Zero());
}

TEST(AssembleFimDerivative, MatchesFiniteDifferenceAndSparsity) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = oracle::random_instance(rng, 5 + trial % 6);
    const auto f = [&](const Configuration& c) { return oracle::fim(c, inst.graph, inst.model); };
    for (int i = 0; i < inst.config.num_mobile(); ++i) {
      for (Axis axis : {Axis::X, Axis::Y}) {
        const BlockMatrix d = assemble_fim_derivative(inst.config, inst.graph, inst.model, i, axis);
        const Eigen::MatrixXd fd = oracle::fd_matrix(f, inst.config, 2 * i + (axis == Axis::X ? 0 : 1));
        EXPECT_LE((d.to_dense() - fd).norm(), 1e-6 * std::max(1.0, fd.norm()));
        for (const auto& [key, block] : d.blocks()) {
          const auto [r, c] = key;
          const bool allowed = r == i || c == i || (r == c && inst.graph.has_edge(i, r));
          EXPECT_TRUE(allowed || block.isZero()) << r << "," << c;
        }
      }
    }
  }
}

TEST(AssembleFimDerivative, RejectsAnchor) {
  EXPECT_THROW(assemble_fim_derivative(perpendicular_anchors(), complete(3), kUnitAdditive, 1, Axis::X),
               std::out_of_range);
}
