#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  namespace cli = locdeploy::cli;

  CLI::App app{"Localizability-constrained deployment simulator"};
  app.require_subcommand(1);

  cli::RunOptions run;
  int run_steps = 0;
  std::uint64_t run_seed = 0;
  std::string run_mode;
  auto* run_cmd = app.add_subcommand("run", "Run the gradient-descent planner and write the output bundle");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
  auto* steps_opt = run_cmd->add_option("--steps", run_steps, "Override run.steps")->check(CLI::NonNegativeNumber);
  auto* seed_opt = run_cmd->add_option("--seed", run_seed, "Override run.seed");
  auto* mode_opt = run_cmd->add_option("--gradient-mode", run_mode, "Override run.gradient_mode")
                       ->check(CLI::IsMember({"centralized", "distributed"}));
  run_cmd->add_option("--override", run.overrides, "section.field=value (repeatable)");
  run_cmd->add_flag("--messages", run.messages, "Write messages.log for the first distributed gradient");

  cli::ProbeOptions probe;
  auto* probe_cmd = app.add_subcommand("probe", "Evaluate potentials and FIM eigenvalues at the start configuration");
  probe_cmd->add_option("--scenario", probe.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  probe_cmd->add_option("--override", probe.overrides, "section.field=value (repeatable)");

  cli::VerifyOptions verify;
  int random_nodes = 0;
  std::string verify_scenario;
  auto* verify_cmd = app.add_subcommand("verify", "Check factorization identities and gradient audits");
  auto* vs_opt = verify_cmd->add_option("--scenario", verify_scenario, "Scenario file")->check(CLI::ExistingFile);
  auto* rn_opt = verify_cmd->add_option("--random-nodes", random_nodes, "Generate a seeded random instance");
  vs_opt->excludes(rn_opt);
  verify_cmd->add_option("--seed", verify.seed, "Seed for --random-nodes");
  verify_cmd->add_option("--override", verify.overrides, "section.field=value (repeatable)");
  verify_cmd->add_flag("--corrupt-weight", verify.corrupt_weight, "Test hook: corrupt one edge weight")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  if (*run_cmd) {
    if (*steps_opt) run.steps = run_steps;
    if (*seed_opt) run.seed = run_seed;
    if (*mode_opt) run.gradient_mode = run_mode;
    return cli::cmd_run(run, std::cout, std::cerr);
  }
  if (*probe_cmd) return cli::cmd_probe(probe, std::cout, std::cerr);
  if (*vs_opt) verify.scenario = verify_scenario;
  if (*rn_opt) verify.random_nodes = random_nodes;
  return cli::cmd_verify(verify, std::cout, std::cerr);
}
