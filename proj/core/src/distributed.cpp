#include "locdeploy/distributed.hpp"

#include "locdeploy/errors.hpp"
#include "locdeploy/fim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace locdeploy {

void SolverParams::validate() const {
  if (!(gain_k > 0.0) || !std::isfinite(gain_k)) throw std::invalid_argument("SolverParams: gain_k must be positive");
  if (step_eta && (!(*step_eta > 0.0) || !std::isfinite(*step_eta))) {
    throw std::invalid_argument("SolverParams: step_eta must be positive");
  }
  if (max_rounds < 1) throw std::invalid_argument("SolverParams: max_rounds must be >= 1");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("SolverParams: residual_tol must be positive");
  if (stall_rounds < 1) throw std::invalid_argument("SolverParams: stall_rounds must be >= 1");
}

// ---------------------------------------------------------------------------

Agent::Agent(int id, const Block& diagonal, std::map<int, Block> off_diagonal, BlockRow c_block)
    : id_(id),
      diagonal_(diagonal),
      off_diagonal_(std::move(off_diagonal)),
      c_(std::move(c_block)),
      xi_(BlockRow::Zero(2, c_.cols())) {
  for (const auto& [j, b] : off_diagonal_) neighbor_xi_.emplace(j, BlockRow::Zero(2, c_.cols()));
}

std::vector<int> Agent::neighbors() const {
  std::vector<int> out;
  out.reserve(off_diagonal_.size());
  for (const auto& [j, b] : off_diagonal_) out.push_back(j);
  return out;
}

double Agent::gershgorin_bound() const {
  Eigen::Vector2d rows = diagonal_.cwiseAbs().rowwise().sum();
  for (const auto& [j, b] : off_diagonal_) rows += b.cwiseAbs().rowwise().sum();
  return rows.maxCoeff();
}

RoundMessage Agent::outgoing(int receiver, int round) const {
  return RoundMessage{round, id_, receiver, MessageKind::XiBlock, xi_};
}

void Agent::receive(const RoundMessage& msg) {
  auto it = neighbor_xi_.find(msg.sender);
  if (it == neighbor_xi_.end() || msg.receiver != id_) {
    throw std::logic_error("Agent: message from a non-neighbor");
  }
  it->second = msg.payload;
}

double Agent::update(double step) {
  BlockRow residual = diagonal_ * xi_ - c_;
  for (const auto& [j, b] : off_diagonal_) residual += b * neighbor_xi_.at(j);
  const BlockRow delta = -step * residual;
  xi_ += delta;
  return delta.norm();
}

void Agent::note_progress(double delta_norm, double tol) {
  stalled_rounds_ = delta_norm < tol ? stalled_rounds_ + 1 : 0;
}

// ---------------------------------------------------------------------------

namespace {

/// Agent i's block row of F, built from its own and its neighbors' positions.
std::vector<Agent> build_agents(const Configuration& config, const RangingGraph& graph, const NoiseModel& model,
                                const Eigen::MatrixXd& c) {
  const int n = config.num_mobile();
  std::vector<Agent> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Block diagonal = Block::Zero();
    std::map<int, Block> off;
    for (int k : graph.neighbors(i)) {
      const Block fik = fim_block(config.position(i), config.position(k), model, true);
      diagonal -= fik;
      if (config.is_mobile(k)) off.emplace(k, fik);
    }
    agents.emplace_back(i, diagonal, std::move(off), c.middleRows(2 * i, 2));
  }
  return agents;
}

Eigen::MatrixXd gather(const std::vector<Agent>& agents, Eigen::Index cols) {
  Eigen::MatrixXd xi(2 * static_cast<Eigen::Index>(agents.size()), cols);
  for (const Agent& a : agents) xi.middleRows(2 * a.id(), 2) = a.xi();
  return xi;
}

}  // namespace

SolveResult distributed_solve(const Configuration& config, const RangingGraph& graph, const NoiseModel& model,
                              const Eigen::MatrixXd& c, const SolverParams& params) {
  params.validate();
  const int n = config.num_mobile();
  if (c.rows() != 2 * n || c.cols() < 1) throw std::invalid_argument("distributed_solve: c must be 2n x r");
  if (!c.allFinite()) throw std::invalid_argument("distributed_solve: c must be finite");

  std::vector<Agent> agents = build_agents(config, graph, model, c);

  // Harness-only view of F, used for the stability check and global residual.
  const Eigen::MatrixXd f = assemble_fim(config, graph, model).to_dense();

  SolveResult result;
  if (params.step_eta) {
    result.step = *params.step_eta * params.gain_k;
  } else {
    double bound = 0.0;
    for (const Agent& a : agents) bound = std::max(bound, a.gershgorin_bound());
    if (!(bound > 0.0)) throw std::invalid_argument("distributed_solve: F has an empty block row");
    result.step = 1.0 / bound;
  }
  if (params.enforce_stability) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f, Eigen::EigenvaluesOnly);
    if (result.step * eig.eigenvalues().maxCoeff() >= 2.0) {
      throw std::invalid_argument("distributed_solve: eta * k * lambda_max(F) >= 2, the flow is unstable");
    }
  }

  auto residual_of = [&] { return (f * gather(agents, c.cols()) - c).norm(); };
  const double initial = residual_of();
  result.residual_history.push_back(initial);
  double residual = initial;

  const bool global_stop = params.stop_rule == StopRule::GlobalResidual;
  if (global_stop && residual <= params.residual_tol) {
    result.xi = gather(agents, c.cols());
    result.final_residual = residual;
    return result;
  }

  std::vector<RoundMessage> inbox;
  for (int round = 1; round <= params.max_rounds; ++round) {
    inbox.clear();
    for (const Agent& a : agents) {
      for (int j : a.neighbors()) inbox.push_back(a.outgoing(j, round));
    }
    for (const RoundMessage& msg : inbox) agents[static_cast<std::size_t>(msg.receiver)].receive(msg);
    const bool keep = params.record_messages &&
                      (!params.transcript_round_limit || round <= *params.transcript_round_limit);
    if (keep) result.messages.insert(result.messages.end(), inbox.begin(), inbox.end());

    bool all_stalled = true;
    for (Agent& a : agents) {
      a.note_progress(a.update(result.step), params.residual_tol);
      all_stalled = all_stalled && a.stalled_rounds() >= params.stall_rounds;
    }

    residual = residual_of();
    result.residual_history.push_back(residual);
    result.rounds_used = round;
    if (!std::isfinite(residual) || residual > 10.0 * initial) {
      std::ostringstream os;
      os << "Laplacian flow diverged at round " << round << " (residual " << residual << ", initial " << initial
         << ", eta*k " << result.step << ")";
      throw SolverDivergenceError(os.str());
    }
    const bool done = global_stop ? residual <= params.residual_tol : all_stalled;
    if (done) {
      result.xi = gather(agents, c.cols());
      result.final_residual = residual;
      return result;
    }
  }

  std::ostringstream os;
  os << "Laplacian flow did not converge in " << params.max_rounds << " rounds (residual " << residual
     << ", tolerance " << params.residual_tol << ")";
  throw SolverNonConvergenceError(os.str());
}

// ---------------------------------------------------------------------------

DistributedGradient distributed_grad_f_D(const Configuration& config, const RangingGraph& graph,
                                         const NoiseModel& model, int node, Axis axis, const SolverParams& params) {
  if (!config.is_mobile(node)) throw std::out_of_range("distributed_grad_f_D: node is not mobile");

  // Column blocks b_k of dF/dnu_node are nonzero for k = node and its mobile
  // neighbors; agent l's rows of b_k depend only on positions relative to node.
  std::vector<int> columns{node};
  for (int k : graph.neighbors(node)) {
    if (config.is_mobile(k)) columns.push_back(k);
  }
  std::sort(columns.begin(), columns.end());

  const Eigen::MatrixXd df = assemble_fim_derivative(config, graph, model, node, axis).to_dense();
  const int n = config.num_mobile();
  Eigen::MatrixXd c(2 * n, 2 * static_cast<Eigen::Index>(columns.size()));
  for (std::size_t r = 0; r < columns.size(); ++r) {
    c.middleCols(2 * static_cast<Eigen::Index>(r), 2) = df.middleCols(2 * columns[r], 2);
  }

  SolveResult solve = distributed_solve(config, graph, model, c, params);

  DistributedGradient out;
  out.rounds_used = solve.rounds_used;
  out.final_residual = solve.final_residual;
  out.messages = std::move(solve.messages);

  const int report_round = solve.rounds_used + 1;
  double trace_sum = 0.0;
  for (std::size_t r = 0; r < columns.size(); ++r) {
    const int k = columns[r];
    // Agent k's 2x2 block [F^{-1} b_k]_k.
    const Block own = solve.xi.block<2, 2>(2 * k, 2 * static_cast<Eigen::Index>(r));
    if (k != node && params.record_messages) {
      out.messages.push_back(RoundMessage{report_round, k, node, MessageKind::TraceReport, own});
    }
    trace_sum += own.trace();
  }
  out.value = -trace_sum;
  return out;
}

MobileGradient distributed_grad_f_D_all(const Configuration& config, const RangingGraph& graph,
                                        const NoiseModel& model, const SolverParams& params,
                                        std::vector<RoundMessage>* transcript) {
  MobileGradient g(static_cast<std::size_t>(config.num_mobile()));
  for (int i = 0; i < config.num_mobile(); ++i) {
    for (Axis axis : {Axis::X, Axis::Y}) {
      DistributedGradient d = distributed_grad_f_D(config, graph, model, i, axis, params);
      g[static_cast<std::size_t>(i)](axis == Axis::X ? 0 : 1) = d.value;
      if (transcript) transcript->insert(transcript->end(), d.messages.begin(), d.messages.end());
    }
  }
  return g;
}

std::size_t count_messages(const std::vector<RoundMessage>& log, int round, MessageKind kind) {
  return static_cast<std::size_t>(std::count_if(log.begin(), log.end(), [&](const RoundMessage& m) {
    return m.round == round && m.kind == kind;
  }));
}

void write_transcript(std::ostream& os, const std::vector<RoundMessage>& log) {
  char buf[32];
  for (const RoundMessage& m : log) {
    os << m.round << ',' << m.sender << ',' << m.receiver << ','
       << (m.kind == MessageKind::XiBlock ? "xi" : "trace");
    for (Eigen::Index r = 0; r < m.payload.rows(); ++r) {
      for (Eigen::Index col = 0; col < m.payload.cols(); ++col) {
        std::snprintf(buf, sizeof buf, "%.17g", m.payload(r, col));
        os << ',' << buf;
      }
    }
    os << '\n';
  }
}

}  // namespace locdeploy
