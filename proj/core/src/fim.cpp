#include "locdeploy/fim.hpp"

#include "locdeploy/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace locdeploy {

namespace {

double checked_distance(const Point& pi, const Point& pj, int i = -1, int j = -1) {
  const double d = (pi - pj).norm();
  if (!(d >= kMinSeparation)) throw CoincidentPointsError(i, j, d);
  return d;
}

double inverse_weight(double d, const NoiseModel& model) {
  // 1 / (sigma^2 d^{2 alpha})
  const double s2 = model.sigma() * model.sigma();
  const double d2 = d * d;
  return model.alpha() == 1 ? 1.0 / (s2 * d2) : 1.0 / (s2 * d2 * d2);
}

Block pair_block(const Point& pi, const Point& pj, const NoiseModel& model, int i, int j) {
  const double d = checked_distance(pi, pj, i, j);
  const double w = inverse_weight(d, model);
  const double dx = pi.x() - pj.x();
  const double dy = pi.y() - pj.y();
  const double xy = -w * dx * dy;
  Block out;
  out << -w * dx * dx, xy, xy, -w * dy * dy;
  return out;
}

Block pair_derivative(const Point& pi, const Point& pj, const NoiseModel& model, Axis axis, int i, int j) {
  const double d = checked_distance(pi, pj, i, j);
  const double dx = pi.x() - pj.x();
  const double dy = pi.y() - pj.y();
  const double a = model.alpha();
  const double d2 = d * d;
  const double scale = 2.0 * inverse_weight(d, model);
  Block out;
  if (axis == Axis::X) {
    out(0, 0) = a * dx * dx * dx / d2 - dx;
    out(0, 1) = dy * (a * dx * dx / d2 - 0.5);
    out(1, 1) = a * dx * dy * dy / d2;
  } else {
    out(0, 0) = a * dy * dx * dx / d2;
    out(0, 1) = dx * (a * dy * dy / d2 - 0.5);
    out(1, 1) = a * dy * dy * dy / d2 - dy;
  }
  out(1, 0) = out(0, 1);
  return scale * out;
}

void require_sizes(const Configuration& config, const RangingGraph& graph) {
  if (graph.num_nodes() != config.num_nodes()) {
    throw std::invalid_argument("graph and configuration disagree on the number of nodes");
  }
}

BlockMatrix assemble_over(const Configuration& config, const RangingGraph& graph, const NoiseModel& model,
                          int block_dim) {
  require_sizes(config, graph);
  BlockMatrix f(block_dim);
  for (const Edge& e : graph.edges()) {
    const Block fij = pair_block(config.position(e.a), config.position(e.b), model, e.a, e.b);
    if (e.a < block_dim) f.add_diagonal(e.a, -fij);
    if (e.b < block_dim) f.add_diagonal(e.b, -fij);
    if (e.a < block_dim && e.b < block_dim) f.set_symmetric(e.a, e.b, fij);
  }
  return f;
}

}  // namespace

Block fim_block(const Point& pi, const Point& pj, const NoiseModel& model, bool connected) {
  if (!connected) return Block::Zero();
  return pair_block(pi, pj, model, -1, -1);
}

Block fim_block_derivative(const Point& pi, const Point& pj, const NoiseModel& model, Axis axis) {
  return pair_derivative(pi, pj, model, axis, -1, -1);
}

BlockMatrix assemble_fim(const Configuration& config, const RangingGraph& graph, const NoiseModel& model) {
  return assemble_over(config, graph, model, config.num_mobile());
}

BlockMatrix assemble_extended_fim(const Configuration& config, const RangingGraph& graph,
                                  const NoiseModel& model) {
  return assemble_over(config, graph, model, config.num_nodes());
}

BlockMatrix assemble_fim_derivative(const Configuration& config, const RangingGraph& graph,
                                    const NoiseModel& model, int node, Axis axis) {
  require_sizes(config, graph);
  if (!config.is_mobile(node)) throw std::out_of_range("assemble_fim_derivative: node is not mobile");
  BlockMatrix df(config.num_mobile());
  df.add_diagonal(node, Block::Zero());
  for (int k : graph.neighbors(node)) {
    const Block dik = pair_derivative(config.position(node), config.position(k), model, axis, node, k);
    df.add_diagonal(node, -dik);
    if (config.is_mobile(k)) {
      // dF_ki/dnu_i = dF_ik/dnu_i, and dF_kk/dnu_i = -dF_ki/dnu_i.
      df.set_symmetric(node, k, dik);
      df.add_diagonal(k, -dik);
    }
  }
  return df;
}

}  // namespace locdeploy
