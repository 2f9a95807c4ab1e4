#pragma once

#include "locdeploy/distributed.hpp"
#include "locdeploy/potentials.hpp"
#include "locdeploy/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace locdeploy {

enum class StepKind { Constant, Backtracking };

struct StepPolicy {
  StepKind kind = StepKind::Backtracking;
  double gamma0 = 1e-4;
  double shrink = 0.5;
  double armijo = 1e-4;  // sufficient-decrease coefficient
  int max_halvings = 50;

  /// Backtracking with gamma0 = 1e-2 sigma^2.
  static StepPolicy default_for(const NoiseModel& model);
  void validate() const;
  friend bool operator==(const StepPolicy&, const StepPolicy&) = default;
};

enum class GradientMode { Centralized, Distributed };

/// Stop once the gradient norm falls below this.
inline constexpr double kMinGradientNorm = 1e-8;

struct Scenario {
  Configuration initial;
  RangingGraph graph;
  NoiseModel model{NoiseKind::AdditiveGaussian, 1.0};
  PotentialWeights weights;
  std::optional<TaskSpec> task;
  std::optional<BarrierSpec> barrier;
  int steps = 0;
  StepPolicy step_policy;
  GradientMode gradient_mode = GradientMode::Centralized;
  double estimator_noise_std = 0.0;
  /// Mobile starting points are drawn uniformly from the box of this
  /// half-width around `initial`.
  double vicinity_radius = 0.0;
  std::uint64_t seed = 0;
  SolverParams solver;

  void validate() const;
};

struct StepRecord {
  int step = 0;
  Configuration config;
  double f_total = 0.0;
  std::optional<double> f_loc;
  double f_conn = 0.0;
  double f_task = 0.0;
  double grad_norm = 0.0;
  double gamma = 0.0;  // step size that produced this configuration (0 at step 0)
};

enum class Termination {
  BudgetExhausted,
  Converged,
  SingularFim,
  BarrierViolation,
  StepPolicyFailure,
  SolverFailure,
};

const char* to_string(Termination t);
bool is_failure(Termination t);

struct TrajectoryRecord {
  std::vector<StepRecord> steps;
  Termination termination = Termination::BudgetExhausted;
  std::string message;  // diagnostic for failures
};

/// Starting configuration p^0: `initial` with the seeded vicinity perturbation.
Configuration starting_configuration(const Scenario& scenario);

/// Gradient descent on the mobile robots with anchors held fixed. Terminal
/// failures end the run and are reported through `termination`.
TrajectoryRecord run(const Scenario& scenario, std::vector<RoundMessage>* first_step_transcript = nullptr);

/// Potential values and gradients at one configuration, no stepping.
/// Component errors propagate as exceptions.
PotentialEvaluation evaluate(const Scenario& scenario, const Configuration& config);

}  // namespace locdeploy
