#pragma once

#include "locdeploy/planner.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace locdeploy {

struct RobotEntry {
  int id = 0;
  bool anchor = false;
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const RobotEntry&, const RobotEntry&) = default;
};

struct EdgeEntry {
  int a = 0;
  int b = 0;
  bool constrained = false;
  friend bool operator==(const EdgeEntry&, const EdgeEntry&) = default;
};

/// In-memory form of a scenario document. Sections and field names:
///
///   robots:    list of {id, role: mobile|anchor, x, y}
///   edges:     list of [id, id] or {nodes: [id, id], constrained: bool}
///   noise:     {kind: additive|multiplicative, sigma}
///   potential: {loc_kind: T|D|A|E|none, alpha_conn, beta_task, targets_x, d0, dmax}
///   run:       {steps, step_policy: constant|backtracking, gamma0, shrink, armijo,
///               gradient_mode: centralized|distributed, estimator_noise_std, seed,
///               vicinity_radius}
///   solver:    {gain_k, step_eta, max_rounds, residual_tol, stop_rule: global|local,
///               stall_rounds}                                  (optional section)
///
/// targets_x lists one value per mobile robot in document order and is present
/// iff beta_task > 0; d0 and dmax are present iff alpha_conn > 0.
struct ScenarioFile {
  std::vector<RobotEntry> robots;
  std::vector<EdgeEntry> edges;

  NoiseKind noise_kind = NoiseKind::AdditiveGaussian;
  double sigma = 1.0;

  LocKind loc_kind = LocKind::D;
  double alpha_conn = 0.0;
  double beta_task = 0.0;
  std::vector<double> targets_x;
  std::optional<double> d0;
  std::optional<double> dmax;

  int steps = 0;
  StepKind step_kind = StepKind::Backtracking;
  std::optional<double> gamma0;  // default 1e-2 sigma^2
  double shrink = 0.5;
  double armijo = 1e-4;
  GradientMode gradient_mode = GradientMode::Centralized;
  double estimator_noise_std = 0.0;
  std::uint64_t seed = 0;
  double vicinity_radius = 0.05;

  std::optional<SolverParams> solver;

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

using Override = std::pair<std::string, std::string>;

/// Parses a scenario document. Each override "section.field" = value replaces
/// (or adds) that field before validation. Throws ScenarioParseError.
ScenarioFile parse_scenario(const std::string& text, const std::vector<Override>& overrides = {});
ScenarioFile load_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

/// Canonical document text; parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const ScenarioFile& scenario);

/// "section.field=value" -> pair. Throws ScenarioParseError on bad syntax.
Override parse_override(const std::string& assignment);

struct LoadedScenario {
  Scenario scenario;
  std::vector<int> node_ids;  // document id of each internal node index
};

/// Mobile robots take indices 0..n-1 in document order, anchors follow.
LoadedScenario to_scenario(const ScenarioFile& file);

std::string to_string(LocKind kind);
std::string to_string(GradientMode mode);

}  // namespace locdeploy
