#pragma once

#include "locdeploy/types.hpp"

#include <Eigen/Sparse>

#include <utility>
#include <vector>

namespace locdeploy {

/// Ranging graph with one orientation per edge. Edge k of `edges()` fixes
/// row k of the rigidity matrix and column k of the incidence matrix.
class OrientedGraph {
 public:
  /// Tail = smaller node index, edges in the graph's sorted order.
  static OrientedGraph canonical(const RangingGraph& graph);

  OrientedGraph(int num_nodes, std::vector<std::pair<int, int>> edges);

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  OrientedGraph with_flipped(int edge_index) const;

 private:
  int num_nodes_;
  std::vector<std::pair<int, int>> edges_;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// |E| x 2(n+m) weighted rigidity matrix in the split [x...; y...] layout.
SparseMatrix rigidity_matrix(const Configuration& config, const OrientedGraph& oriented, const NoiseModel& model);

/// (n+m) x |E| signed incidence matrix: +1 at the tail, -1 at the head.
SparseMatrix incidence_matrix(const OrientedGraph& oriented);

/// Diagonals of Q_xx, Q_xy (= Q_yx) and Q_yy, one entry per oriented edge.
struct EdgeWeightMatrix {
  Eigen::VectorXd xx;
  Eigen::VectorXd xy;
  Eigen::VectorXd yy;

  /// 2|E| x 2|E| dense [[Q_xx, Q_xy], [Q_yx, Q_yy]].
  Eigen::MatrixXd to_dense() const;
};

EdgeWeightMatrix weight_matrix_q(const Configuration& config, const OrientedGraph& oriented, const NoiseModel& model);

/// Index map from the interleaved layout [x0, y0, x1, ...] to the split
/// layout [x0, x1, ..., y0, y1, ...]: split_index[interleaved] = split.
std::vector<int> split_coordinate_map(int num_nodes);

/// P A P^T for the coordinate permutation P, applied through the index map.
Eigen::MatrixXd to_split_layout(const Eigen::MatrixXd& interleaved);
/// Inverse of to_split_layout.
Eigen::MatrixXd to_interleaved_layout(const Eigen::MatrixXd& split);

/// Reordered extended FIM  F1 = P Fbar P^T.
Eigen::MatrixXd split_extended_fim(const Configuration& config, const RangingGraph& graph, const NoiseModel& model);

/// (I2 kron B) Q (I2 kron B^T).
Eigen::MatrixXd weighted_laplacian_product(const OrientedGraph& oriented, const EdgeWeightMatrix& q);

/// max |F1 - R^T R|.
double verify_prop1(const Configuration& config, const OrientedGraph& oriented, const NoiseModel& model);
/// max |F1 - (I2 kron B) Q (I2 kron B^T)|.
double verify_prop2(const Configuration& config, const OrientedGraph& oriented, const NoiseModel& model);

/// Columns: x-translation, y-translation, infinitesimal rotation about the
/// origin, in the split layout.
Eigen::MatrixXd rigid_motion_basis(const Configuration& config);

/// max over basis vectors v of ||F1 v||_inf.
double rigid_motion_residual(const Eigen::MatrixXd& split_fim, const Eigen::MatrixXd& basis);

/// Eigenvalue-count rank with tolerance rel_tol * lambda_max.
int numerical_rank(const Eigen::MatrixXd& symmetric, double rel_tol = 1e-9);

}  // namespace locdeploy
