#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace locdeploy {

using Point = Eigen::Vector2d;
using Block = Eigen::Matrix2d;

enum class Axis { X, Y };

/// Planar positions of n mobile robots followed by m anchors.
///
/// Node indices 0..n-1 are mobile, n..n+m-1 are anchors. The layout is fixed
/// for the whole library; F uses the interleaved order [x0, y0, x1, y1, ...].
class Configuration {
 public:
  Configuration() = default;
  Configuration(std::vector<Point> positions, int num_mobile);

  int num_mobile() const { return num_mobile_; }
  int num_anchors() const { return static_cast<int>(positions_.size()) - num_mobile_; }
  int num_nodes() const { return static_cast<int>(positions_.size()); }
  bool is_mobile(int node) const { return node >= 0 && node < num_mobile_; }

  const Point& position(int node) const { return positions_.at(static_cast<std::size_t>(node)); }
  std::span<const Point> positions() const { return positions_; }

  /// Replaces a mobile position. Anchors are immutable once constructed.
  void set_mobile_position(int node, const Point& p);

  /// Stacked mobile coordinates [x0, y0, ..., x_{n-1}, y_{n-1}].
  Eigen::VectorXd mobile_vector() const;
  /// Copy with the mobile coordinates replaced by `stacked` (length 2n).
  Configuration with_mobile_vector(const Eigen::VectorXd& stacked) const;

  Configuration translated(const Point& t) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Point> positions_;
  int num_mobile_ = 0;
};

struct Edge {
  int a = 0;  // smaller index
  int b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected ranging graph. Edges are stored once with a < b, sorted.
class RangingGraph {
 public:
  RangingGraph() = default;
  explicit RangingGraph(int num_nodes);

  /// Adds {i, j}; duplicate insertion is a no-op except that `constrained`
  /// is OR-ed in.
  void add_edge(int i, int j, bool constrained = false);

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(int i, int j) const;
  bool is_constrained(int i, int j) const;
  std::vector<Edge> constrained_edges() const;

  /// Sorted neighbor list of `node`.
  const std::vector<int>& neighbors(int node) const { return adjacency_.at(static_cast<std::size_t>(node)); }

  friend bool operator==(const RangingGraph&, const RangingGraph&) = default;

 private:
  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<bool> constrained_;
  std::vector<std::vector<int>> adjacency_;
};

enum class NoiseKind { AdditiveGaussian, MultiplicativeLogNormal };

class NoiseModel {
 public:
  NoiseModel(NoiseKind kind, double sigma);

  NoiseKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  /// Distance exponent in the FIM weights: 1 additive, 2 multiplicative.
  int alpha() const { return kind_ == NoiseKind::AdditiveGaussian ? 1 : 2; }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

 private:
  NoiseKind kind_;
  double sigma_;
};

/// Symmetric matrix held as 2x2 blocks keyed by (block-row, block-col).
/// Absent blocks are zero. Both (i,j) and (j,i) are stored.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  explicit BlockMatrix(int block_dim) : block_dim_(block_dim) {}

  int block_dim() const { return block_dim_; }
  int dim() const { return 2 * block_dim_; }

  Block block(int i, int j) const;
  bool has_block(int i, int j) const { return blocks_.contains({i, j}); }

  /// Sets (i,j) = b and (j,i) = b^T.
  void set_symmetric(int i, int j, const Block& b);
  /// Adds b to (i,i); b must be symmetric.
  void add_diagonal(int i, const Block& b);

  const std::map<std::pair<int, int>, Block>& blocks() const { return blocks_; }
  std::size_t num_stored_blocks() const { return blocks_.size(); }

  Eigen::MatrixXd to_dense() const;
  double trace() const;

 private:
  int block_dim_ = 0;
  std::map<std::pair<int, int>, Block> blocks_;
};

/// One (d/dx_i, d/dy_i) pair per mobile robot.
using MobileGradient = std::vector<Eigen::Vector2d>;

Eigen::VectorXd stack(const MobileGradient& g);
MobileGradient unstack(const Eigen::VectorXd& v);

}  // namespace locdeploy
