#include "locdeploy/planner.hpp"

#include "locdeploy/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace locdeploy {

StepPolicy StepPolicy::default_for(const NoiseModel& model) {
  StepPolicy p;
  p.kind = StepKind::Backtracking;
  p.gamma0 = 1e-2 * model.sigma() * model.sigma();
  return p;
}

void StepPolicy::validate() const {
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw std::invalid_argument("StepPolicy: gamma0 must be positive");
  if (kind == StepKind::Backtracking) {
    if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("StepPolicy: shrink must lie in (0, 1)");
    if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("StepPolicy: armijo must lie in (0, 1)");
    if (max_halvings < 1) throw std::invalid_argument("StepPolicy: max_halvings must be >= 1");
  }
}

void Scenario::validate() const {
  const int n = initial.num_mobile();
  if (graph.num_nodes() != initial.num_nodes()) throw std::invalid_argument("Scenario: graph size mismatch");
  weights.validate();
  if ((weights.alpha_conn > 0.0) != barrier.has_value()) {
    throw std::invalid_argument("Scenario: barrier must be present iff alpha_conn > 0");
  }
  if ((weights.beta_task > 0.0) != task.has_value()) {
    throw std::invalid_argument("Scenario: task must be present iff beta_task > 0");
  }
  if (barrier) barrier->validate();
  if (task && static_cast<int>(task->target_x.size()) != n) {
    throw std::invalid_argument("Scenario: one task target per mobile robot required");
  }
  if (steps < 0) throw std::invalid_argument("Scenario: steps must be >= 0");
  step_policy.validate();
  if (!(estimator_noise_std >= 0.0) || !std::isfinite(estimator_noise_std)) {
    throw std::invalid_argument("Scenario: estimator_noise_std must be >= 0");
  }
  if (!(vicinity_radius >= 0.0) || !std::isfinite(vicinity_radius)) {
    throw std::invalid_argument("Scenario: vicinity_radius must be >= 0");
  }
  if (weights.loc_kind == LocKind::E && steps > 0) {
    throw std::invalid_argument("Scenario: loc_kind E has no gradient and cannot drive a run");
  }
  if (gradient_mode == GradientMode::Distributed) {
    if (weights.loc_kind != LocKind::D) throw std::invalid_argument("Scenario: distributed mode supports f_D only");
    solver.validate();
  }
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::BudgetExhausted: return "budget_exhausted";
    case Termination::Converged: return "converged";
    case Termination::SingularFim: return "singular_fim";
    case Termination::BarrierViolation: return "barrier_violation";
    case Termination::StepPolicyFailure: return "step_policy_failure";
    case Termination::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

bool is_failure(Termination t) { return t != Termination::BudgetExhausted && t != Termination::Converged; }

namespace {

Configuration perturbed(const Configuration& base, double half_width, std::mt19937_64& rng) {
  if (half_width == 0.0) return base;
  std::uniform_real_distribution<double> u(-half_width, half_width);
  Configuration out = base;
  for (int i = 0; i < base.num_mobile(); ++i) {
    const double dx = u(rng);
    const double dy = u(rng);
    out.set_mobile_position(i, base.position(i) + Point(dx, dy));
  }
  return out;
}

Configuration estimate_of(const Configuration& truth, double noise_std, std::mt19937_64& rng) {
  if (noise_std == 0.0) return truth;
  std::normal_distribution<double> normal(0.0, noise_std);
  Configuration out = truth;
  for (int i = 0; i < truth.num_mobile(); ++i) {
    const double ex = normal(rng);
    const double ey = normal(rng);
    out.set_mobile_position(i, truth.position(i) + Point(ex, ey));
  }
  return out;
}

StepRecord record_values(int step, const Configuration& config, const PotentialEvaluation& ev, double gamma) {
  StepRecord r;
  r.step = step;
  r.config = config;
  r.f_total = ev.total;
  r.f_loc = ev.loc;
  r.f_conn = ev.conn;
  r.f_task = ev.task;
  r.gamma = gamma;
  return r;
}

PotentialEvaluation values_at(const Scenario& s, const Configuration& config) {
  return total_potential(config, s.graph, s.model, s.weights, s.task, s.barrier, GradientRequest::None);
}

MobileGradient gradient_at(const Scenario& s, const Configuration& config, std::vector<RoundMessage>* transcript) {
  if (s.gradient_mode == GradientMode::Centralized) {
    return total_potential(config, s.graph, s.model, s.weights, s.task, s.barrier, GradientRequest::Full).gradient;
  }
  const PotentialEvaluation rest =
      total_potential(config, s.graph, s.model, s.weights, s.task, s.barrier, GradientRequest::ExceptLoc);
  SolverParams params = s.solver;
  params.record_messages = transcript != nullptr;
  const MobileGradient loc = distributed_grad_f_D_all(config, s.graph, s.model, params, transcript);
  return combine_gradients(s.weights, config.num_mobile(), loc, rest.grad_conn, rest.grad_task);
}

Termination classify(const std::exception& e) {
  if (dynamic_cast<const SingularFimError*>(&e) || dynamic_cast<const CoincidentPointsError*>(&e)) {
    return Termination::SingularFim;
  }
  if (dynamic_cast<const BarrierViolationError*>(&e)) return Termination::BarrierViolation;
  if (dynamic_cast<const StepPolicyError*>(&e)) return Termination::StepPolicyFailure;
  if (dynamic_cast<const SolverDivergenceError*>(&e) || dynamic_cast<const SolverNonConvergenceError*>(&e)) {
    return Termination::SolverFailure;
  }
  throw;  // not a terminal planner condition
}

struct Candidate {
  Configuration config;
  PotentialEvaluation values;
  double gamma;
};

Candidate take_step(const Scenario& s, const Configuration& p, double f_now, const Eigen::VectorXd& g) {
  const Eigen::VectorXd x = p.mobile_vector();
  double gamma = s.step_policy.gamma0;
  if (s.step_policy.kind == StepKind::Constant) {
    Configuration next = p.with_mobile_vector(x - gamma * g);
    PotentialEvaluation ev = values_at(s, next);
    return {std::move(next), std::move(ev), gamma};
  }
  const double g2 = g.squaredNorm();
  for (int attempt = 0; attempt <= s.step_policy.max_halvings; ++attempt) {
    Configuration next = p.with_mobile_vector(x - gamma * g);
    try {
      PotentialEvaluation ev = values_at(s, next);
      if (ev.total <= f_now - s.step_policy.armijo * gamma * g2) return {std::move(next), std::move(ev), gamma};
    } catch (const SingularFimError&) {
    } catch (const CoincidentPointsError&) {
    } catch (const BarrierViolationError&) {
    }
    gamma *= s.step_policy.shrink;
  }
  std::ostringstream os;
  os << "backtracking found no sufficient decrease after " << s.step_policy.max_halvings << " halvings";
  throw StepPolicyError(os.str());
}

}  // namespace

Configuration starting_configuration(const Scenario& scenario) {
  std::mt19937_64 rng(scenario.seed);
  return perturbed(scenario.initial, scenario.vicinity_radius, rng);
}

TrajectoryRecord run(const Scenario& scenario, std::vector<RoundMessage>* first_step_transcript) {
  scenario.validate();
  std::mt19937_64 rng(scenario.seed);
  Configuration p = perturbed(scenario.initial, scenario.vicinity_radius, rng);

  TrajectoryRecord out;
  int k = 0;
  try {
    PotentialEvaluation current = values_at(scenario, p);
    out.steps.push_back(record_values(0, p, current, 0.0));
    for (;; ++k) {
      const Configuration estimate = estimate_of(p, scenario.estimator_noise_std, rng);
      const Eigen::VectorXd g = stack(gradient_at(scenario, estimate, k == 0 ? first_step_transcript : nullptr));
      out.steps.back().grad_norm = g.norm();
      if (g.norm() < kMinGradientNorm) {
        out.termination = Termination::Converged;
        break;
      }
      if (k == scenario.steps) {
        out.termination = Termination::BudgetExhausted;
        break;
      }
      Candidate next = take_step(scenario, p, current.total, g);
      p = std::move(next.config);
      current = std::move(next.values);
      out.steps.push_back(record_values(k + 1, p, current, next.gamma));
    }
  } catch (const std::exception& e) {
    out.termination = classify(e);
    std::ostringstream os;
    os << "step " << k << ": " << e.what();
    out.message = os.str();
  }
  return out;
}

PotentialEvaluation evaluate(const Scenario& scenario, const Configuration& config) {
  const GradientRequest request =
      scenario.weights.loc_kind == LocKind::E ? GradientRequest::ExceptLoc : GradientRequest::Full;
  return total_potential(config, scenario.graph, scenario.model, scenario.weights, scenario.task, scenario.barrier,
                         request);
}

}  // namespace locdeploy
