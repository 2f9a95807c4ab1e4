#pragma once

#include "locdeploy/types.hpp"

#include <optional>
#include <vector>

namespace locdeploy {

/// Scalarization used for the localizability term.
enum class LocKind { None, T, D, A, E };

/// Weights of  f = f_loc + alpha_conn * f_conn + beta_task * f_task.
/// alpha_conn is unrelated to the noise exponent NoiseModel::alpha().
struct PotentialWeights {
  double alpha_conn = 0.0;
  double beta_task = 0.0;
  LocKind loc_kind = LocKind::D;

  void validate() const;
  friend bool operator==(const PotentialWeights&, const PotentialWeights&) = default;
};

/// Desired x-coordinate per mobile robot.
struct TaskSpec {
  std::vector<double> target_x;
  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// Connectivity barrier: penalty starts at d0 and diverges at dmax.
struct BarrierSpec {
  double d0 = 0.0;
  double dmax = 0.0;

  void validate() const;
  friend bool operator==(const BarrierSpec&, const BarrierSpec&) = default;
};

/// Relative cutoff: lambda_min <= kSingularityCutoff * lambda_max is singular.
inline constexpr double kSingularityCutoff = 1e-12;

/// Dense SPD view of F with the factorizations shared by f_D and f_A.
/// Construction throws SingularFimError when F fails the cutoff.
class FimFactorization {
 public:
  explicit FimFactorization(const BlockMatrix& fim);

  const Eigen::MatrixXd& dense() const { return dense_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }
  double log_det() const { return log_det_; }

 private:
  Eigen::MatrixXd dense_;
  Eigen::MatrixXd inverse_;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
  double log_det_ = 0.0;
};

/// Tr(M * D), touching only the stored blocks of D.
double trace_product(const Eigen::MatrixXd& m, const BlockMatrix& d);

// T-optimal: -Tr F.
double f_T(const BlockMatrix& fim);
/// Closed-form per-neighbor gradient of f_T.
MobileGradient grad_f_T(const Configuration& config, const RangingGraph& graph, const NoiseModel& model);
/// -sum_k Tr[dF_kk / dnu_i] from the assembled derivative matrices.
MobileGradient grad_f_T_trace_route(const Configuration& config, const RangingGraph& graph, const NoiseModel& model);

// D-optimal: -ln det F.
double f_D(const BlockMatrix& fim);
MobileGradient grad_f_D(const Configuration& config, const RangingGraph& graph, const NoiseModel& model);

// A-optimal: Tr F^{-1}.
double f_A(const BlockMatrix& fim);
MobileGradient grad_f_A(const Configuration& config, const RangingGraph& graph, const NoiseModel& model);

// E-optimal: -lambda_min(F). Value only.
double f_E(const BlockMatrix& fim);

double f_task(const Configuration& config, const TaskSpec& task);
MobileGradient grad_f_task(const Configuration& config, const TaskSpec& task);

/// Barrier profile g(d) and its derivative.
double barrier_value(double d, const BarrierSpec& barrier);
double barrier_derivative(double d, const BarrierSpec& barrier);

/// Sum of g over constrained edges. Throws BarrierViolationError when a
/// constrained distance reaches dmax.
double f_conn(const Configuration& config, const RangingGraph& graph, const BarrierSpec& barrier);
/// Gradient for every node (anchors included); zero off the constrained set.
std::vector<Eigen::Vector2d> grad_f_conn(const Configuration& config, const RangingGraph& graph,
                                         const BarrierSpec& barrier);

enum class GradientRequest { None, Full, ExceptLoc };

struct PotentialEvaluation {
  double total = 0.0;
  std::optional<double> loc;  // absent for LocKind::None
  double conn = 0.0;
  double task = 0.0;

  // Unweighted component gradients and the weighted total (mobile nodes only).
  // Empty when not requested.
  MobileGradient grad_loc;
  MobileGradient grad_conn;
  MobileGradient grad_task;
  MobileGradient gradient;
};

/// Evaluates the weighted potential. With GradientRequest::ExceptLoc the
/// loc term is left out of `gradient` (and `grad_loc` stays empty) so that a
/// caller can supply it from elsewhere. Requesting a loc gradient for
/// LocKind::E throws UnsupportedGradientError.
PotentialEvaluation total_potential(const Configuration& config, const RangingGraph& graph, const NoiseModel& model,
                                    const PotentialWeights& weights, const std::optional<TaskSpec>& task,
                                    const std::optional<BarrierSpec>& barrier,
                                    GradientRequest request = GradientRequest::Full);

/// Weighted sum of component gradients; empty components count as zero.
MobileGradient combine_gradients(const PotentialWeights& weights, int num_mobile, const MobileGradient& loc,
                                 const MobileGradient& conn, const MobileGradient& task);

}  // namespace locdeploy
