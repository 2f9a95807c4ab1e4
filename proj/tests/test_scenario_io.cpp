#include <locdeploy/errors.hpp>
#include <locdeploy/output.hpp>
#include <locdeploy/scenario_io.hpp>

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace locdeploy;

namespace {

const char* kMinimal = R"(robots:
  - {id: 10, role: anchor, x: 0, y: 0}
  - {id: 2, role: mobile, x: 1, y: 0.5}
  - {id: 7, role: anchor, x: 0, y: 1}
  - {id: 4, role: mobile, x: 2, y: 0}
edges:
  - [10, 2]
  - [2, 7]
  - {nodes: [2, 4], constrained: true}
  - [4, 10]
noise:
  kind: additive
  sigma: 0.5
potential:
  loc_kind: D
run:
  steps: 3
)";

ScenarioFile random_file(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10, 10);
  std::uniform_real_distribution<double> pos(1e-3, 1.0);
  std::uniform_int_distribution<int> small(0, 5);
  std::bernoulli_distribution coin;
  ScenarioFile f;
  const int nodes = 2 + small(rng);
  std::vector<int> ids;
  for (int k = 0; k < nodes; ++k) {
    const int id = 3 * k + small(rng) % 3;
    ids.push_back(id);
    f.robots.push_back({id, k > 0 && coin(rng), u(rng), u(rng)});
  }
  for (int a = 0; a < nodes; ++a) {
    for (int b = a + 1; b < nodes; ++b) {
      if (coin(rng)) f.edges.push_back({ids[static_cast<std::size_t>(a)], ids[static_cast<std::size_t>(b)], coin(rng)});
    }
  }
  f.noise_kind = coin(rng) ? NoiseKind::AdditiveGaussian : NoiseKind::MultiplicativeLogNormal;
  f.sigma = pos(rng);
  const LocKind kinds[] = {LocKind::None, LocKind::T, LocKind::D, LocKind::A, LocKind::E};
  f.loc_kind = kinds[small(rng) % 5];
  const bool has_constrained = std::any_of(f.edges.begin(), f.edges.end(), [](const EdgeEntry& e) { return e.constrained; });
  if (has_constrained && coin(rng)) {
    f.alpha_conn = pos(rng);
    f.d0 = pos(rng);
    f.dmax = *f.d0 + pos(rng);
  }
  if (coin(rng)) {
    f.beta_task = pos(rng);
    for (const auto& r : f.robots) {
      if (!r.anchor) f.targets_x.push_back(u(rng) / 3.0);
    }
  }
  f.steps = f.loc_kind == LocKind::E ? 0 : small(rng) * 100;
  f.step_kind = coin(rng) ? StepKind::Constant : StepKind::Backtracking;
  if (coin(rng)) f.gamma0 = pos(rng);
  f.shrink = 0.1 + 0.8 * pos(rng);
  f.armijo = pos(rng) * 0.5;
  if (f.loc_kind == LocKind::D && coin(rng)) f.gradient_mode = GradientMode::Distributed;
  f.estimator_noise_std = coin(rng) ? 0.0 : pos(rng);
  f.seed = std::uniform_int_distribution<std::uint64_t>(0, 1ull << 62)(rng);
  f.vicinity_radius = pos(rng);
  if (coin(rng)) {
    SolverParams p;
    p.gain_k = 1 + pos(rng);
    if (coin(rng)) p.step_eta = pos(rng) * 1e-3;
    p.max_rounds = 1 + small(rng) * 1000;
    p.residual_tol = pos(rng) * 1e-6;
    p.stop_rule = coin(rng) ? StopRule::GlobalResidual : StopRule::LocalStall;
    p.stall_rounds = 1 + small(rng);
    f.solver = p;
  }
  return f;
}

void expect_parse_error(const std::string& text, const std::string& fragment) {
  try {
    parse_scenario(text);
    ADD_FAILURE() << "no error for fragment " << fragment;
  } catch (const ScenarioParseError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST(ScenarioParse, MinimalDocumentAndIndexing) {
  const ScenarioFile f = parse_scenario(kMinimal);
  EXPECT_EQ(f.robots.size(), 4u);
  EXPECT_EQ(f.vicinity_radius, 0.05);
  EXPECT_FALSE(f.gamma0);
  const LoadedScenario l = to_scenario(f);
  EXPECT_EQ(l.node_ids, (std::vector<int>{2, 4, 10, 7}));
  EXPECT_EQ(l.scenario.initial.num_mobile(), 2);
  EXPECT_TRUE(l.scenario.graph.is_constrained(0, 1));
  EXPECT_TRUE(l.scenario.graph.has_edge(1, 2));
  EXPECT_DOUBLE_EQ(l.scenario.step_policy.gamma0, 1e-2 * 0.25);
}

TEST(ScenarioParse, RoundTripRandomDocuments) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const ScenarioFile f = random_file(rng);
    const std::string text = emit_scenario(f);
    ScenarioFile back;
    ASSERT_NO_THROW(back = parse_scenario(text)) << text;
    EXPECT_EQ(back, f) << text;
    EXPECT_EQ(emit_scenario(back), text);
  }
}

TEST(ScenarioParse, RejectsBadDocuments) {
  const std::string base = kMinimal;
  expect_parse_error(replace(base, "[4, 10]", "[4, 99]"), "unknown robot id 99");
  expect_parse_error(replace(base, "id: 4,", "id: 2,"), "duplicate id");
  expect_parse_error(replace(base, "sigma: 0.5", "sigma: -1"), "noise.sigma");
  expect_parse_error(replace(base, "sigma: 0.5", "sigma: .nan"), "finite");
  expect_parse_error(replace(base, "loc_kind: D", "loc_kind: D\n  beta_task: 1"), "targets_x");
  expect_parse_error(replace(base, "loc_kind: D", "loc_kind: D\n  d0: 1"), "only allowed when alpha_conn");
  expect_parse_error(replace(base, "loc_kind: D", "loc_kind: D\n  colour: red"), "unknown field");
  expect_parse_error(replace(base, "loc_kind: D", "loc_kind: E"), "only steps: 0");
  expect_parse_error(replace(base, "[4, 10]", "[4, 4]"), "self-loop");
  expect_parse_error(replace(base, "[4, 10]", "[2, 10]"), "duplicate edge");
  expect_parse_error(replace(base, "steps: 3", "steps: 3\n  gradient_mode: distributed\n  seed: x"), "run.seed");
}

TEST(ScenarioParse, ErrorsCarryLineNumbers) {
  try {
    parse_scenario(replace(kMinimal, "[4, 10]", "[4, 99]"));
    FAIL();
  } catch (const ScenarioParseError& e) {
    EXPECT_EQ(e.line(), 10);
  }
}

TEST(ScenarioParse, Overrides) {
  const ScenarioFile f = parse_scenario(kMinimal, {{"run.steps", "0"}, {"run.gamma0", "0.125"}, {"solver.gain_k", "2"}});
  EXPECT_EQ(f.steps, 0);
  EXPECT_EQ(f.gamma0, 0.125);
  ASSERT_TRUE(f.solver);
  EXPECT_EQ(f.solver->gain_k, 2.0);
  EXPECT_EQ(parse_override("potential.beta_task=1.5"), Override("potential.beta_task", "1.5"));
  EXPECT_THROW(parse_override("steps=3"), ScenarioParseError);
  EXPECT_THROW(parse_override("run.steps"), ScenarioParseError);
  EXPECT_THROW(parse_scenario(kMinimal, {{"robots.x", "1"}}), ScenarioParseError);
  EXPECT_THROW(parse_scenario(kMinimal, {{"run.nonsense", "1"}}), ScenarioParseError);
}

TEST(Output, TablesAndSummary) {
  const LoadedScenario l = to_scenario(parse_scenario(kMinimal));
  const TrajectoryRecord r = run(l.scenario);
  std::ostringstream traj;
  std::ostringstream costs;
  std::ostringstream summary;
  write_trajectory_csv(traj, r, l.node_ids);
  write_costs_csv(costs, r);
  write_summary(summary, r, {{"seed", "0"}});
  EXPECT_EQ(traj.str().substr(0, traj.str().find('\n')), "step,id,x,y");
  EXPECT_EQ(costs.str().substr(0, costs.str().find('\n')), "step,f_total,f_loc,f_conn,f_task,grad_norm,gamma");
  // Rows sorted by step then id: ids 2, 4, 7, 10 at step 0.
  EXPECT_NE(traj.str().find("0,2,"), std::string::npos);
  EXPECT_LT(traj.str().find("0,7,"), traj.str().find("0,10,"));
  const std::string t = traj.str();
  const std::string c = costs.str();
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 1 + 4 * static_cast<long>(r.steps.size()));
  EXPECT_EQ(std::count(c.begin(), c.end(), '\n'), 1 + static_cast<long>(r.steps.size()));
  EXPECT_NE(summary.str().find("termination = "), std::string::npos);
  EXPECT_NE(summary.str().find("seed = 0"), std::string::npos);
}

TEST(Output, FullPrecisionNumbers) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}
