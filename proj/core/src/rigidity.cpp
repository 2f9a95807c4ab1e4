#include "locdeploy/rigidity.hpp"

#include "locdeploy/errors.hpp"
#include "locdeploy/fim.hpp"

#include <cmath>
#include <stdexcept>

namespace locdeploy {

namespace {

struct EdgeGeometry {
  double dx;
  double dy;
  double weight;  // 1 / (sigma d^alpha)
};

EdgeGeometry edge_geometry(const Configuration& config, int i, int j, const NoiseModel& model) {
  const Point delta = config.position(i) - config.position(j);
  const double d = delta.norm();
  if (!(d >= kMinSeparation)) throw CoincidentPointsError(i, j, d);
  const double d_alpha = model.alpha() == 1 ? d : d * d;
  return {delta.x(), delta.y(), 1.0 / (model.sigma() * d_alpha)};
}

void check_nodes(const Configuration& config, const OrientedGraph& oriented) {
  if (config.num_nodes() != oriented.num_nodes()) {
    throw std::invalid_argument("oriented graph and configuration disagree on the number of nodes");
  }
}

}  // namespace

OrientedGraph OrientedGraph::canonical(const RangingGraph& graph) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(graph.edges().size());
  for (const Edge& e : graph.edges()) edges.emplace_back(e.a, e.b);
  return OrientedGraph(graph.num_nodes(), std::move(edges));
}

OrientedGraph::OrientedGraph(int num_nodes, std::vector<std::pair<int, int>> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  for (const auto& [t, h] : edges_) {
    if (t == h || t < 0 || h < 0 || t >= num_nodes_ || h >= num_nodes_) {
      throw std::invalid_argument("OrientedGraph: invalid edge");
    }
  }
}

OrientedGraph OrientedGraph::with_flipped(int edge_index) const {
  OrientedGraph out = *this;
  auto& e = out.edges_.at(static_cast<std::size_t>(edge_index));
  std::swap(e.first, e.second);
  return out;
}

SparseMatrix rigidity_matrix(const Configuration& config, const OrientedGraph& oriented, const NoiseModel& model) {
  check_nodes(config, oriented);
  const int nodes = oriented.num_nodes();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * oriented.edges().size());
  int row = 0;
  for (const auto& [i, j] : oriented.edges()) {
    const EdgeGeometry g = edge_geometry(config, i, j, model);
    triplets.emplace_back(row, i, g.dx * g.weight);
    triplets.emplace_back(row, j, -g.dx * g.weight);
    triplets.emplace_back(row, nodes + i, g.dy * g.weight);
    triplets.emplace_back(row, nodes + j, -g.dy * g.weight);
    ++row;
  }
  SparseMatrix r(oriented.num_edges(), 2 * nodes);
  r.setFromTriplets(triplets.begin(), triplets.end());
  return r;
}

SparseMatrix incidence_matrix(const OrientedGraph& oriented) {
  std::vector<Eigen::Triplet<double>> triplets;
  int col = 0;
  for (const auto& [tail, head] : oriented.edges()) {
    triplets.emplace_back(tail, col, 1.0);
    triplets.emplace_back(head, col, -1.0);
    ++col;
  }
  SparseMatrix b(oriented.num_nodes(), oriented.num_edges());
  b.setFromTriplets(triplets.begin(), triplets.end());
  return b;
}

Eigen::MatrixXd EdgeWeightMatrix::to_dense() const {
  const Eigen::Index e = xx.size();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2 * e, 2 * e);
  q.topLeftCorner(e, e).diagonal() = xx;
  q.topRightCorner(e, e).diagonal() = xy;
  q.bottomLeftCorner(e, e).diagonal() = xy;
  q.bottomRightCorner(e, e).diagonal() = yy;
  return q;
}

EdgeWeightMatrix weight_matrix_q(const Configuration& config, const OrientedGraph& oriented, const NoiseModel& model) {
  check_nodes(config, oriented);
  const Eigen::Index e = oriented.num_edges();
  EdgeWeightMatrix q{Eigen::VectorXd(e), Eigen::VectorXd(e), Eigen::VectorXd(e)};
  Eigen::Index k = 0;
  for (const auto& [i, j] : oriented.edges()) {
    const EdgeGeometry g = edge_geometry(config, i, j, model);
    const double w2 = g.weight * g.weight;
    q.xx(k) = g.dx * g.dx * w2;
    q.xy(k) = g.dx * g.dy * w2;
    q.yy(k) = g.dy * g.dy * w2;
    ++k;
  }
  return q;
}

std::vector<int> split_coordinate_map(int num_nodes) {
  std::vector<int> map(2 * static_cast<std::size_t>(num_nodes));
  for (int i = 0; i < num_nodes; ++i) {
    map[2 * static_cast<std::size_t>(i)] = i;
    map[2 * static_cast<std::size_t>(i) + 1] = num_nodes + i;
  }
  return map;
}

Eigen::MatrixXd to_split_layout(const Eigen::MatrixXd& interleaved) {
  const auto map = split_coordinate_map(static_cast<int>(interleaved.rows() / 2));
  Eigen::MatrixXd out(interleaved.rows(), interleaved.cols());
  for (Eigen::Index r = 0; r < interleaved.rows(); ++r) {
    for (Eigen::Index c = 0; c < interleaved.cols(); ++c) {
      out(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = interleaved(r, c);
    }
  }
  return out;
}

Eigen::MatrixXd to_interleaved_layout(const Eigen::MatrixXd& split) {
  const auto map = split_coordinate_map(static_cast<int>(split.rows() / 2));
  Eigen::MatrixXd out(split.rows(), split.cols());
  for (Eigen::Index r = 0; r < split.rows(); ++r) {
    for (Eigen::Index c = 0; c < split.cols(); ++c) {
      out(r, c) = split(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

Eigen::MatrixXd split_extended_fim(const Configuration& config, const RangingGraph& graph, const NoiseModel& model) {
  return to_split_layout(assemble_extended_fim(config, graph, model).to_dense());
}

Eigen::MatrixXd weighted_laplacian_product(const OrientedGraph& oriented, const EdgeWeightMatrix& q) {
  const Eigen::MatrixXd b = Eigen::MatrixXd(incidence_matrix(oriented));
  const Eigen::Index nodes = b.rows();
  const Eigen::Index e = b.cols();
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(2 * nodes, 2 * e);
  kron.topLeftCorner(nodes, e) = b;
  kron.bottomRightCorner(nodes, e) = b;
  return kron * q.to_dense() * kron.transpose();
}

namespace {

RangingGraph underlying_graph(const OrientedGraph& oriented) {
  RangingGraph g(oriented.num_nodes());
  for (const auto& [t, h] : oriented.edges()) g.add_edge(t, h);
  return g;
}

}  // namespace

double verify_prop1(const Configuration& config, const OrientedGraph& oriented, const NoiseModel& model) {
  const Eigen::MatrixXd f1 = split_extended_fim(config, underlying_graph(oriented), model);
  const Eigen::MatrixXd r = Eigen::MatrixXd(rigidity_matrix(config, oriented, model));
  return (f1 - r.transpose() * r).cwiseAbs().maxCoeff();
}

double verify_prop2(const Configuration& config, const OrientedGraph& oriented, const NoiseModel& model) {
  const Eigen::MatrixXd f1 = split_extended_fim(config, underlying_graph(oriented), model);
  const Eigen::MatrixXd product = weighted_laplacian_product(oriented, weight_matrix_q(config, oriented, model));
  return (f1 - product).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd rigid_motion_basis(const Configuration& config) {
  const Eigen::Index nodes = config.num_nodes();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(2 * nodes, 3);
  for (Eigen::Index k = 0; k < nodes; ++k) {
    const Point& p = config.position(static_cast<int>(k));
    basis(k, 0) = 1.0;
    basis(nodes + k, 1) = 1.0;
    basis(k, 2) = -p.y();
    basis(nodes + k, 2) = p.x();
  }
  return basis;
}

double rigid_motion_residual(const Eigen::MatrixXd& split_fim, const Eigen::MatrixXd& basis) {
  return (split_fim * basis).cwiseAbs().maxCoeff();
}

int numerical_rank(const Eigen::MatrixXd& symmetric, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(ev(k)) > rel_tol * scale) ++rank;
  }
  return rank;
}

}  // namespace locdeploy
