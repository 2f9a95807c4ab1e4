#pragma once

#include "locdeploy/types.hpp"

namespace locdeploy {

/// Connected pairs closer than this are treated as singular geometry.
inline constexpr double kMinSeparation = 1e-9;

/// Off-diagonal FIM block for the pair (i, j).
///
/// Zero when the nodes are not ranging neighbors, otherwise
///   -1 / (sigma^2 d^{2 alpha}) * [dx dx^T]
/// with dx = p_i - p_j. The result is symmetric, negative semi-definite and
/// of rank at most one. Throws CoincidentPointsError when connected and
/// d < kMinSeparation.
Block fim_block(const Point& pi, const Point& pj, const NoiseModel& model, bool connected);

/// d F_ij / d nu_i for a connected pair, nu being x_i or y_i.
Block fim_block_derivative(const Point& pi, const Point& pj, const NoiseModel& model, Axis axis);

/// 2n x 2n FIM over the mobile robots. Diagonal blocks collect every
/// neighbor, anchors included; off-diagonal blocks exist only for adjacent
/// mobile pairs.
BlockMatrix assemble_fim(const Configuration& config, const RangingGraph& graph, const NoiseModel& model);

/// 2(n+m) x 2(n+m) FIM with anchor rows and columns. Every block-row sums to
/// zero and the leading 2n x 2n principal block equals assemble_fim.
BlockMatrix assemble_extended_fim(const Configuration& config, const RangingGraph& graph,
                                  const NoiseModel& model);

/// dF / d nu_node for a mobile node. Nonzero blocks are confined to (i,i),
/// (i,j), (j,i) and (j,j) for mobile neighbors j. Throws std::out_of_range
/// when `node` is not mobile.
BlockMatrix assemble_fim_derivative(const Configuration& config, const RangingGraph& graph,
                                    const NoiseModel& model, int node, Axis axis);

}  // namespace locdeploy
