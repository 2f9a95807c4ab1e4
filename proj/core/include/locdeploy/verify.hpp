#pragma once

#include "locdeploy/potentials.hpp"
#include "locdeploy/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace locdeploy {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;  // e.g. why a check was skipped
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

struct VerificationOptions {
  std::optional<TaskSpec> task;
  std::optional<BarrierSpec> barrier;
  double fd_step = 1e-6;
  double fd_rel_tol = 1e-5;
  /// Test hook: scales the first edge weight in Q before the incidence-Laplacian
  /// product, which must then fail.
  bool corrupt_weight = false;
};

/// Factorization identities, Laplacian/null-space structure, rank bound and
/// finite-difference gradient audits at one configuration.
///
/// Residual tolerances are 1e-10 times max(1, max|F1|) (times the coordinate
/// scale for the rotation check). Gradient audits use the relative error
///   ||g - g_fd||_inf / max(||g_fd||_inf, 1e-3).
VerificationReport verify_configuration(const Configuration& config, const RangingGraph& graph,
                                        const NoiseModel& model, const VerificationOptions& options = {});

/// Central-difference gradient of `f` over the stacked mobile coordinates.
Eigen::VectorXd central_difference_gradient(const std::function<double(const Configuration&)>& f,
                                            const Configuration& config, double step);

double gradient_relative_error(const Eigen::VectorXd& analytic, const Eigen::VectorXd& reference);

struct RandomInstance {
  Configuration config;
  RangingGraph graph;
  NoiseModel model;
};

/// Seeded random instance: 3 anchors (fewer when num_nodes < 4), positions
/// in [0, 5]^2 with pairwise separation >= 0.3, connected random graph,
/// noise kind and sigma drawn from the seed.
RandomInstance random_instance(int num_nodes, std::uint64_t seed);

}  // namespace locdeploy
