#include "commands.hpp"

#include <locdeploy/errors.hpp>
#include <locdeploy/fim.hpp>
#include <locdeploy/output.hpp>
#include <locdeploy/planner.hpp>
#include <locdeploy/scenario_io.hpp>
#include <locdeploy/verify.hpp>

#include <cstdio>
#include <iomanip>
#include <ostream>

namespace locdeploy::cli {

namespace {

std::vector<Override> collect_overrides(const std::vector<std::string>& raw) {
  std::vector<Override> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back(parse_override(r));
  return out;
}

std::string number(double v) { return format_number(v); }

double norm_of(const MobileGradient& g) { return g.empty() ? 0.0 : stack(g).norm(); }

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  LoadedScenario loaded;
  std::vector<Override> overrides;
  try {
    overrides = collect_overrides(options.overrides);
    if (options.steps) overrides.emplace_back("run.steps", std::to_string(*options.steps));
    if (options.seed) overrides.emplace_back("run.seed", std::to_string(*options.seed));
    if (options.gradient_mode) overrides.emplace_back("run.gradient_mode", *options.gradient_mode);
    loaded = to_scenario(load_scenario(options.scenario, overrides));
  } catch (const ScenarioParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid scenario: " << e.what() << '\n';
    return kExitUsage;
  }

  const Scenario& s = loaded.scenario;
  std::vector<RoundMessage> transcript;
  const bool want_transcript = options.messages && s.gradient_mode == GradientMode::Distributed;
  if (options.messages && !want_transcript) err << "note: --messages only applies to distributed gradient mode\n";

  const TrajectoryRecord record = run(s, want_transcript ? &transcript : nullptr);

  for (RoundMessage& m : transcript) {
    m.sender = loaded.node_ids[static_cast<std::size_t>(m.sender)];
    m.receiver = loaded.node_ids[static_cast<std::size_t>(m.receiver)];
  }

  std::vector<std::pair<std::string, std::string>> extra{
      {"scenario", options.scenario},
      {"seed", std::to_string(s.seed)},
      {"gradient_mode", to_string(s.gradient_mode)},
      {"loc_kind", to_string(s.weights.loc_kind)},
      {"steps_budget", std::to_string(s.steps)},
  };
  for (const auto& [k, v] : overrides) extra.emplace_back("override." + k, v);

  try {
    const BundlePaths paths =
        write_bundle(options.out_dir, record, loaded.node_ids, extra, want_transcript ? &transcript : nullptr);
    out << "wrote " << paths.trajectory.string() << ", " << paths.costs.string() << ", " << paths.summary.string();
    if (!paths.messages.empty()) out << ", " << paths.messages.string();
    out << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  out << "termination: " << to_string(record.termination) << " after "
      << (record.steps.empty() ? 0 : record.steps.back().step) << " steps\n";
  if (is_failure(record.termination)) {
    err << "error: run failed: " << record.message << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_probe(const ProbeOptions& options, std::ostream& out, std::ostream& err) {
  LoadedScenario loaded;
  try {
    loaded = to_scenario(load_scenario(options.scenario, collect_overrides(options.overrides)));
  } catch (const ScenarioParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid scenario: " << e.what() << '\n';
    return kExitUsage;
  }

  const Scenario& s = loaded.scenario;
  const Configuration start = starting_configuration(s);
  out << std::setprecision(17);
  try {
    const BlockMatrix fim = assemble_fim(start, s.graph, s.model);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fim.to_dense(), Eigen::EigenvaluesOnly);
    out << "fim_lambda_min = " << number(eig.eigenvalues().minCoeff()) << '\n';
    out << "fim_lambda_max = " << number(eig.eigenvalues().maxCoeff()) << '\n';
    out << "f_E = " << number(f_E(fim)) << '\n';

    const PotentialEvaluation ev = evaluate(s, start);
    out << "loc_kind = " << to_string(s.weights.loc_kind) << '\n';
    out << "f_loc = " << (ev.loc ? number(*ev.loc) : "absent") << '\n';
    out << "f_conn = " << number(ev.conn) << '\n';
    out << "f_task = " << number(ev.task) << '\n';
    out << "f_total = " << number(ev.total) << '\n';
    out << "grad_norm_loc = " << (ev.loc && s.weights.loc_kind != LocKind::E ? number(norm_of(ev.grad_loc)) : "absent")
        << '\n';
    out << "grad_norm_conn = " << number(norm_of(ev.grad_conn)) << '\n';
    out << "grad_norm_task = " << number(norm_of(ev.grad_task)) << '\n';
    out << "grad_norm_total = " << number(norm_of(ev.gradient)) << '\n';
  } catch (const SingularFimError& e) {
    err << "error: " << e.what() << '\n';
    out << "status = singular_fim\n";
    return kExitRuntime;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  out << "status = ok\n";
  return kExitOk;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  if (options.scenario.has_value() == options.random_nodes.has_value()) {
    err << "error: give exactly one of --scenario or --random-nodes\n";
    return kExitUsage;
  }

  std::optional<RandomInstance> instance;
  VerificationOptions vopts;
  vopts.corrupt_weight = options.corrupt_weight;
  try {
    if (options.scenario) {
      const LoadedScenario loaded =
          to_scenario(load_scenario(*options.scenario, collect_overrides(options.overrides)));
      const Scenario& s = loaded.scenario;
      instance = RandomInstance{starting_configuration(s), s.graph, s.model};
      vopts.task = s.task;
      vopts.barrier = s.barrier;
    } else {
      if (*options.random_nodes < 2) {
        err << "error: --random-nodes must be >= 2\n";
        return kExitUsage;
      }
      instance = random_instance(*options.random_nodes, options.seed);
    }
  } catch (const ScenarioParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid scenario: " << e.what() << '\n';
    return kExitUsage;
  }

  VerificationReport report;
  try {
    report = verify_configuration(instance->config, instance->graph, instance->model, vopts);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  out << "nodes = " << instance->config.num_nodes() << ", mobile = " << instance->config.num_mobile()
      << ", edges = " << instance->graph.num_edges() << ", noise = "
      << (instance->model.kind() == NoiseKind::AdditiveGaussian ? "additive" : "multiplicative")
      << ", sigma = " << number(instance->model.sigma()) << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%-40s %-24s %-24s %s\n", "check", "value", "tolerance", "result");
  out << line;
  for (const CheckResult& c : report.checks) {
    const std::string verdict = !c.note.empty() ? "skip (" + c.note + ")" : (c.passed ? "pass" : "FAIL");
    std::snprintf(line, sizeof line, "%-40s %-24s %-24s %s\n", c.name.c_str(), number(c.value).c_str(),
                  number(c.tolerance).c_str(), verdict.c_str());
    out << line;
  }
  if (!report.all_passed()) {
    err << "error: failed checks:";
    for (const CheckResult& c : report.checks) {
      if (!c.passed) err << " [" << c.name << "]";
    }
    err << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace locdeploy::cli
