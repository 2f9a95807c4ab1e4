#pragma once

// Reference implementations written straight from the model definitions,
// sharing no code with the library beyond its value types.

#include <locdeploy/types.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using locdeploy::Configuration;
using locdeploy::NoiseModel;
using locdeploy::RangingGraph;

/// Dense 2(n+m) x 2(n+m) extended FIM, interleaved layout, entry by entry.
Eigen::MatrixXd extended_fim(const Configuration& c, const RangingGraph& g, const NoiseModel& m);

/// Leading 2n x 2n principal block of extended_fim.
Eigen::MatrixXd fim(const Configuration& c, const RangingGraph& g, const NoiseModel& m);

double f_T(const Eigen::MatrixXd& f);
/// -Tr F summed pairwise from positions in long double, for difference quotients.
double f_T(const Configuration& c, const RangingGraph& g, const NoiseModel& m);
double f_D(const Eigen::MatrixXd& f);  // through an LU determinant
double f_A(const Eigen::MatrixXd& f);  // through an LU inverse

/// Central differences of a scalar function of the stacked mobile coordinates.
Eigen::VectorXd fd_gradient(const std::function<double(const Configuration&)>& f, const Configuration& c,
                            double h = 1e-6);

/// Central difference of a matrix-valued function along one mobile coordinate.
Eigen::MatrixXd fd_matrix(const std::function<Eigen::MatrixXd(const Configuration&)>& f, const Configuration& c,
                          int coord, double h = 1e-6);

struct Instance {
  Configuration config;
  RangingGraph graph;
  NoiseModel model;
};

/// Random connected instance with `anchors` anchors, positions in [0, 4]^2
/// kept at least `min_sep` apart, chain plus random extra edges. The FIM is
/// positive definite with condition number below `max_cond` (redrawn otherwise).
Instance random_instance(std::mt19937_64& rng, int nodes, int anchors = 3, double min_sep = 0.4,
                         double max_cond = 1e4);

}  // namespace oracle
