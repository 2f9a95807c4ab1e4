#include "locdeploy/scenario_io.hpp"

#include "locdeploy/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace locdeploy {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line + 1; }

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what) {
  throw ScenarioParseError(field, what, line_of(node));
}

void require_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) fail(node, field, "expected a mapping");
}

void reject_unknown(const YAML::Node& node, const std::string& section, const std::set<std::string>& known) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!known.contains(key)) fail(kv.first, section + "." + key, "unknown field");
  }
}

double as_double(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected a number");
  double v = 0.0;
  try {
    v = node.as<double>();
  } catch (const YAML::Exception&) {
    fail(node, field, "expected a number, got '" + node.Scalar() + "'");
  }
  if (!std::isfinite(v)) fail(node, field, "must be finite");
  return v;
}

long long as_integer(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected an integer");
  try {
    return node.as<long long>();
  } catch (const YAML::Exception&) {
    fail(node, field, "expected an integer, got '" + node.Scalar() + "'");
  }
}

bool as_bool(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    fail(node, field, "expected true or false");
  }
}

std::string as_word(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected a word");
  return node.Scalar();
}

template <typename T>
T as_enum(const YAML::Node& node, const std::string& field, const std::map<std::string, T>& choices) {
  const std::string word = as_word(node, field);
  auto it = choices.find(word);
  if (it == choices.end()) {
    std::string options;
    for (const auto& [k, v] : choices) options += (options.empty() ? "" : "|") + k;
    fail(node, field, "expected one of " + options + ", got '" + word + "'");
  }
  return it->second;
}

const std::map<std::string, NoiseKind> kNoiseKinds{{"additive", NoiseKind::AdditiveGaussian},
                                                   {"multiplicative", NoiseKind::MultiplicativeLogNormal}};
const std::map<std::string, LocKind> kLocKinds{
    {"none", LocKind::None}, {"T", LocKind::T}, {"D", LocKind::D}, {"A", LocKind::A}, {"E", LocKind::E}};
const std::map<std::string, StepKind> kStepKinds{{"constant", StepKind::Constant},
                                                 {"backtracking", StepKind::Backtracking}};
const std::map<std::string, GradientMode> kGradientModes{{"centralized", GradientMode::Centralized},
                                                         {"distributed", GradientMode::Distributed}};
const std::map<std::string, StopRule> kStopRules{{"global", StopRule::GlobalResidual},
                                                 {"local", StopRule::LocalStall}};

template <typename T>
std::string name_of(const std::map<std::string, T>& choices, T value) {
  for (const auto& [k, v] : choices) {
    if (v == value) return k;
  }
  return "?";
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Keep a decimal point so the field reads as a real number.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

// ---------------------------------------------------------------------------

void parse_robots(const YAML::Node& node, ScenarioFile& out) {
  if (!node || !node.IsSequence() || node.size() == 0) fail(node, "robots", "expected a non-empty list");
  std::set<int> ids;
  for (std::size_t k = 0; k < node.size(); ++k) {
    const YAML::Node r = node[k];
    require_map(r, "robots[]");
    reject_unknown(r, "robots[]", {"id", "role", "x", "y"});
    for (const char* key : {"id", "role", "x", "y"}) {
      if (!r[key]) fail(r, std::string("robots[].") + key, "missing");
    }
    RobotEntry e;
    const long long id = as_integer(r["id"], "robots[].id");
    if (id < 0 || id > 1'000'000'000) fail(r["id"], "robots[].id", "out of range");
    e.id = static_cast<int>(id);
    if (!ids.insert(e.id).second) fail(r["id"], "robots[].id", "duplicate id " + std::to_string(e.id));
    const std::string role = as_word(r["role"], "robots[].role");
    if (role != "mobile" && role != "anchor") fail(r["role"], "robots[].role", "expected mobile or anchor");
    e.anchor = role == "anchor";
    e.x = as_double(r["x"], "robots[].x");
    e.y = as_double(r["y"], "robots[].y");
    out.robots.push_back(e);
  }
}

void parse_edges(const YAML::Node& node, ScenarioFile& out) {
  if (!node) return;
  if (!node.IsSequence()) fail(node, "edges", "expected a list");
  std::set<int> ids;
  for (const auto& r : out.robots) ids.insert(r.id);
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < node.size(); ++k) {
    const YAML::Node e = node[k];
    EdgeEntry entry;
    YAML::Node ends;
    if (e.IsSequence()) {
      ends = e;
    } else if (e.IsMap()) {
      reject_unknown(e, "edges[]", {"nodes", "constrained"});
      ends = e["nodes"];
      if (!ends) fail(e, "edges[].nodes", "missing");
      if (e["constrained"]) entry.constrained = as_bool(e["constrained"], "edges[].constrained");
    } else {
      fail(e, "edges[]", "expected [id, id] or {nodes: [id, id], constrained: bool}");
    }
    if (!ends.IsSequence() || ends.size() != 2) fail(e, "edges[].nodes", "expected two robot ids");
    entry.a = static_cast<int>(as_integer(ends[0], "edges[].nodes"));
    entry.b = static_cast<int>(as_integer(ends[1], "edges[].nodes"));
    for (int id : {entry.a, entry.b}) {
      if (!ids.contains(id)) fail(e, "edges[].nodes", "unknown robot id " + std::to_string(id));
    }
    if (entry.a == entry.b) fail(e, "edges[].nodes", "self-loop on robot " + std::to_string(entry.a));
    if (!seen.insert({std::min(entry.a, entry.b), std::max(entry.a, entry.b)}).second) {
      fail(e, "edges[].nodes", "duplicate edge");
    }
    out.edges.push_back(entry);
  }
}

void parse_noise(const YAML::Node& node, ScenarioFile& out) {
  if (!node) throw ScenarioParseError("noise", "missing section");
  require_map(node, "noise");
  reject_unknown(node, "noise", {"kind", "sigma"});
  if (!node["kind"]) fail(node, "noise.kind", "missing");
  if (!node["sigma"]) fail(node, "noise.sigma", "missing");
  out.noise_kind = as_enum(node["kind"], "noise.kind", kNoiseKinds);
  out.sigma = as_double(node["sigma"], "noise.sigma");
  if (!(out.sigma > 0.0)) fail(node["sigma"], "noise.sigma", "must be positive");
}

void parse_potential(const YAML::Node& node, ScenarioFile& out) {
  if (!node) throw ScenarioParseError("potential", "missing section");
  require_map(node, "potential");
  reject_unknown(node, "potential", {"loc_kind", "alpha_conn", "beta_task", "targets_x", "d0", "dmax"});
  if (!node["loc_kind"]) fail(node, "potential.loc_kind", "missing");
  out.loc_kind = as_enum(node["loc_kind"], "potential.loc_kind", kLocKinds);
  if (node["alpha_conn"]) out.alpha_conn = as_double(node["alpha_conn"], "potential.alpha_conn");
  if (node["beta_task"]) out.beta_task = as_double(node["beta_task"], "potential.beta_task");
  if (out.alpha_conn < 0.0) fail(node["alpha_conn"], "potential.alpha_conn", "must be >= 0");
  if (out.beta_task < 0.0) fail(node["beta_task"], "potential.beta_task", "must be >= 0");

  const auto num_mobile = static_cast<std::size_t>(
      std::count_if(out.robots.begin(), out.robots.end(), [](const RobotEntry& r) { return !r.anchor; }));
  if (out.beta_task > 0.0) {
    const YAML::Node t = node["targets_x"];
    if (!t) fail(node, "potential.targets_x", "required when beta_task > 0");
    if (!t.IsSequence() || t.size() != num_mobile) {
      fail(t, "potential.targets_x", "expected one value per mobile robot (" + std::to_string(num_mobile) + ")");
    }
    for (const auto& v : t) out.targets_x.push_back(as_double(v, "potential.targets_x"));
  } else if (node["targets_x"]) {
    fail(node["targets_x"], "potential.targets_x", "only allowed when beta_task > 0");
  }

  if (out.alpha_conn > 0.0) {
    if (!node["d0"]) fail(node, "potential.d0", "required when alpha_conn > 0");
    if (!node["dmax"]) fail(node, "potential.dmax", "required when alpha_conn > 0");
    out.d0 = as_double(node["d0"], "potential.d0");
    out.dmax = as_double(node["dmax"], "potential.dmax");
    if (!(*out.d0 > 0.0 && *out.d0 < *out.dmax)) fail(node["d0"], "potential.d0", "need 0 < d0 < dmax");
    if (std::none_of(out.edges.begin(), out.edges.end(), [](const EdgeEntry& e) { return e.constrained; })) {
      fail(node, "potential.alpha_conn", "alpha_conn > 0 but no edge is marked constrained");
    }
  } else {
    for (const char* key : {"d0", "dmax"}) {
      if (node[key]) fail(node[key], std::string("potential.") + key, "only allowed when alpha_conn > 0");
    }
  }
}

void parse_run(const YAML::Node& node, ScenarioFile& out) {
  if (!node) return;
  require_map(node, "run");
  reject_unknown(node, "run",
                 {"steps", "step_policy", "gamma0", "shrink", "armijo", "gradient_mode", "estimator_noise_std",
                  "seed", "vicinity_radius"});
  if (node["steps"]) {
    const long long steps = as_integer(node["steps"], "run.steps");
    if (steps < 0 || steps > 100'000'000) fail(node["steps"], "run.steps", "out of range");
    out.steps = static_cast<int>(steps);
  }
  if (node["step_policy"]) out.step_kind = as_enum(node["step_policy"], "run.step_policy", kStepKinds);
  if (node["gamma0"]) {
    out.gamma0 = as_double(node["gamma0"], "run.gamma0");
    if (!(*out.gamma0 > 0.0)) fail(node["gamma0"], "run.gamma0", "must be positive");
  }
  if (node["shrink"]) {
    out.shrink = as_double(node["shrink"], "run.shrink");
    if (!(out.shrink > 0.0 && out.shrink < 1.0)) fail(node["shrink"], "run.shrink", "must lie in (0, 1)");
  }
  if (node["armijo"]) {
    out.armijo = as_double(node["armijo"], "run.armijo");
    if (!(out.armijo > 0.0 && out.armijo < 1.0)) fail(node["armijo"], "run.armijo", "must lie in (0, 1)");
  }
  if (node["gradient_mode"]) out.gradient_mode = as_enum(node["gradient_mode"], "run.gradient_mode", kGradientModes);
  if (node["estimator_noise_std"]) {
    out.estimator_noise_std = as_double(node["estimator_noise_std"], "run.estimator_noise_std");
    if (out.estimator_noise_std < 0.0) fail(node["estimator_noise_std"], "run.estimator_noise_std", "must be >= 0");
  }
  if (node["seed"]) {
    const long long seed = as_integer(node["seed"], "run.seed");
    if (seed < 0) fail(node["seed"], "run.seed", "must be >= 0");
    out.seed = static_cast<std::uint64_t>(seed);
  }
  if (node["vicinity_radius"]) {
    out.vicinity_radius = as_double(node["vicinity_radius"], "run.vicinity_radius");
    if (out.vicinity_radius < 0.0) fail(node["vicinity_radius"], "run.vicinity_radius", "must be >= 0");
  }
}

void parse_solver(const YAML::Node& node, ScenarioFile& out) {
  if (!node) return;
  require_map(node, "solver");
  reject_unknown(node, "solver", {"gain_k", "step_eta", "max_rounds", "residual_tol", "stop_rule", "stall_rounds"});
  SolverParams p;
  if (node["gain_k"]) p.gain_k = as_double(node["gain_k"], "solver.gain_k");
  if (node["step_eta"]) p.step_eta = as_double(node["step_eta"], "solver.step_eta");
  if (node["max_rounds"]) p.max_rounds = static_cast<int>(as_integer(node["max_rounds"], "solver.max_rounds"));
  if (node["residual_tol"]) p.residual_tol = as_double(node["residual_tol"], "solver.residual_tol");
  if (node["stop_rule"]) p.stop_rule = as_enum(node["stop_rule"], "solver.stop_rule", kStopRules);
  if (node["stall_rounds"]) p.stall_rounds = static_cast<int>(as_integer(node["stall_rounds"], "solver.stall_rounds"));
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    fail(node, "solver", e.what());
  }
  out.solver = p;
}

}  // namespace

Override parse_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ScenarioParseError("override", "expected section.field=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos) {
    throw ScenarioParseError("override", "key must look like section.field, got '" + key + "'");
  }
  return {key, assignment.substr(eq + 1)};
}

ScenarioFile parse_scenario(const std::string& text, const std::vector<Override>& overrides) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ScenarioParseError("", e.msg, e.mark.line + 1);
  }
  if (!doc.IsMap()) throw ScenarioParseError("", "document must be a mapping of sections");

  for (const auto& [key, value] : overrides) {
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    if (section == "robots" || section == "edges") {
      throw ScenarioParseError(key, "list sections cannot be overridden");
    }
    YAML::Node parsed;
    try {
      parsed = YAML::Load(value);
    } catch (const YAML::ParserException& e) {
      throw ScenarioParseError(key, "bad override value: " + e.msg);
    }
    if (!doc[section]) doc[section] = YAML::Node(YAML::NodeType::Map);
    doc[section][field] = parsed;
  }

  reject_unknown(doc, "", {"robots", "edges", "noise", "potential", "run", "solver"});
  ScenarioFile out;
  parse_robots(doc["robots"], out);
  if (std::all_of(out.robots.begin(), out.robots.end(), [](const RobotEntry& r) { return r.anchor; })) {
    fail(doc["robots"], "robots", "at least one mobile robot is required");
  }
  parse_edges(doc["edges"], out);
  parse_noise(doc["noise"], out);
  parse_potential(doc["potential"], out);
  parse_run(doc["run"], out);
  parse_solver(doc["solver"], out);
  if (out.gradient_mode == GradientMode::Distributed && out.loc_kind != LocKind::D) {
    throw ScenarioParseError("run.gradient_mode", "distributed mode requires potential.loc_kind D");
  }
  if (out.loc_kind == LocKind::E && out.steps > 0) {
    throw ScenarioParseError("potential.loc_kind", "E has no gradient; only steps: 0 (probe) is allowed");
  }
  return out;
}

ScenarioFile load_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), overrides);
}

std::string emit_scenario(const ScenarioFile& s) {
  std::ostringstream os;
  os << "robots:\n";
  for (const auto& r : s.robots) {
    os << "  - {id: " << r.id << ", role: " << (r.anchor ? "anchor" : "mobile") << ", x: " << number(r.x)
       << ", y: " << number(r.y) << "}\n";
  }
  os << "edges:";
  if (s.edges.empty()) os << " []";
  os << "\n";
  for (const auto& e : s.edges) {
    if (e.constrained) {
      os << "  - {nodes: [" << e.a << ", " << e.b << "], constrained: true}\n";
    } else {
      os << "  - [" << e.a << ", " << e.b << "]\n";
    }
  }
  os << "noise:\n  kind: " << name_of(kNoiseKinds, s.noise_kind) << "\n  sigma: " << number(s.sigma) << "\n";
  os << "potential:\n  loc_kind: " << name_of(kLocKinds, s.loc_kind) << "\n  alpha_conn: " << number(s.alpha_conn)
     << "\n  beta_task: " << number(s.beta_task) << "\n";
  if (s.beta_task > 0.0) {
    os << "  targets_x: [";
    for (std::size_t i = 0; i < s.targets_x.size(); ++i) os << (i ? ", " : "") << number(s.targets_x[i]);
    os << "]\n";
  }
  if (s.d0) os << "  d0: " << number(*s.d0) << "\n";
  if (s.dmax) os << "  dmax: " << number(*s.dmax) << "\n";
  os << "run:\n  steps: " << s.steps << "\n  step_policy: " << name_of(kStepKinds, s.step_kind) << "\n";
  if (s.gamma0) os << "  gamma0: " << number(*s.gamma0) << "\n";
  os << "  shrink: " << number(s.shrink) << "\n  armijo: " << number(s.armijo)
     << "\n  gradient_mode: " << name_of(kGradientModes, s.gradient_mode)
     << "\n  estimator_noise_std: " << number(s.estimator_noise_std) << "\n  seed: " << s.seed
     << "\n  vicinity_radius: " << number(s.vicinity_radius) << "\n";
  if (s.solver) {
    const SolverParams& p = *s.solver;
    os << "solver:\n  gain_k: " << number(p.gain_k) << "\n";
    if (p.step_eta) os << "  step_eta: " << number(*p.step_eta) << "\n";
    os << "  max_rounds: " << p.max_rounds << "\n  residual_tol: " << number(p.residual_tol)
       << "\n  stop_rule: " << name_of(kStopRules, p.stop_rule) << "\n  stall_rounds: " << p.stall_rounds << "\n";
  }
  return os.str();
}

LoadedScenario to_scenario(const ScenarioFile& file) {
  LoadedScenario out;
  std::vector<Point> positions;
  std::map<int, int> index_of;
  int num_mobile = 0;
  for (bool anchors : {false, true}) {
    for (const auto& r : file.robots) {
      if (r.anchor != anchors) continue;
      index_of[r.id] = static_cast<int>(positions.size());
      positions.emplace_back(r.x, r.y);
      out.node_ids.push_back(r.id);
      if (!anchors) ++num_mobile;
    }
  }
  Scenario& s = out.scenario;
  s.initial = Configuration(std::move(positions), num_mobile);
  s.graph = RangingGraph(s.initial.num_nodes());
  for (const auto& e : file.edges) s.graph.add_edge(index_of.at(e.a), index_of.at(e.b), e.constrained);
  s.model = NoiseModel(file.noise_kind, file.sigma);
  s.weights = PotentialWeights{file.alpha_conn, file.beta_task, file.loc_kind};
  if (file.beta_task > 0.0) s.task = TaskSpec{file.targets_x};
  if (file.alpha_conn > 0.0) s.barrier = BarrierSpec{*file.d0, *file.dmax};
  s.steps = file.steps;
  s.step_policy = StepPolicy::default_for(s.model);
  s.step_policy.kind = file.step_kind;
  if (file.gamma0) s.step_policy.gamma0 = *file.gamma0;
  s.step_policy.shrink = file.shrink;
  s.step_policy.armijo = file.armijo;
  s.gradient_mode = file.gradient_mode;
  s.estimator_noise_std = file.estimator_noise_std;
  s.vicinity_radius = file.vicinity_radius;
  s.seed = file.seed;
  if (file.solver) s.solver = *file.solver;
  s.validate();
  return out;
}

std::string to_string(LocKind kind) { return name_of(kLocKinds, kind); }
std::string to_string(GradientMode mode) { return name_of(kGradientModes, mode); }

}  // namespace locdeploy
