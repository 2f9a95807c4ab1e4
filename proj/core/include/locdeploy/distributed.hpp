#pragma once

#include "locdeploy/types.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

namespace locdeploy {

using BlockRow = Eigen::Matrix<double, 2, Eigen::Dynamic>;

enum class StopRule {
  GlobalResidual,  // harness measures ||F xi - c||_F after every round
  LocalStall,      // every agent saw ||d xi_i|| < residual_tol for stall_rounds rounds
};

struct SolverParams {
  double gain_k = 1.0;
  /// Explicit Euler step. When unset, eta * k = 1 / max_i(Gershgorin bound of
  /// agent i's block row).
  std::optional<double> step_eta;
  int max_rounds = 200000;
  double residual_tol = 1e-10;
  StopRule stop_rule = StopRule::GlobalResidual;
  int stall_rounds = 10;
  /// Reject steps with eta * k * lambda_max(F) >= 2 before running.
  bool enforce_stability = true;
  bool record_messages = true;
  /// When set, only solver rounds 1..limit are kept in the message log.
  std::optional<int> transcript_round_limit;

  void validate() const;
  friend bool operator==(const SolverParams&, const SolverParams&) = default;
};

enum class MessageKind { XiBlock, TraceReport };

struct RoundMessage {
  int round = 0;
  int sender = 0;
  int receiver = 0;
  MessageKind kind = MessageKind::XiBlock;
  BlockRow payload;
};

/// One mobile robot in the Laplacian-flow solver. It only knows its own
/// block row of F (from relative positions of its neighbors), its rows of c,
/// and whatever its neighbors sent last round.
class Agent {
 public:
  Agent(int id, const Block& diagonal, std::map<int, Block> off_diagonal, BlockRow c_block);

  int id() const { return id_; }
  std::vector<int> neighbors() const;
  const BlockRow& xi() const { return xi_; }
  const BlockRow& c_block() const { return c_; }

  /// Row-sum bound on lambda_max computable from the local block row.
  double gershgorin_bound() const;

  RoundMessage outgoing(int receiver, int round) const;
  void receive(const RoundMessage& msg);

  /// xi_i <- xi_i - step * (F_ii xi_i + sum_j F_ij xi_j - c_i).
  /// Returns ||delta xi_i||_F.
  double update(double step);

  int stalled_rounds() const { return stalled_rounds_; }
  void note_progress(double delta_norm, double tol);

 private:
  int id_;
  Block diagonal_;
  std::map<int, Block> off_diagonal_;
  BlockRow c_;
  BlockRow xi_;
  std::map<int, BlockRow> neighbor_xi_;
  int stalled_rounds_ = 0;
};

struct SolveResult {
  Eigen::MatrixXd xi;  // 2n x columns of c
  int rounds_used = 0;
  double final_residual = 0.0;
  double step = 0.0;  // eta * k actually used
  std::vector<double> residual_history;  // [0] is the initial residual
  std::vector<RoundMessage> messages;
};

/// Runs synchronous rounds of  xi <- xi - eta k (F xi - c)  until xi ~ F^{-1} c.
/// Throws SolverDivergenceError when the residual exceeds 10x its initial
/// value and SolverNonConvergenceError when max_rounds is hit.
SolveResult distributed_solve(const Configuration& config, const RangingGraph& graph, const NoiseModel& model,
                              const Eigen::MatrixXd& c, const SolverParams& params);

struct DistributedGradient {
  double value = 0.0;
  int rounds_used = 0;
  double final_residual = 0.0;
  std::vector<RoundMessage> messages;
};

/// d f_D / d nu_node from the per-agent solves plus one final report round in
/// which each mobile neighbor sends its 2x2 block [F^{-1} b_j]_j to `node`.
DistributedGradient distributed_grad_f_D(const Configuration& config, const RangingGraph& graph,
                                         const NoiseModel& model, int node, Axis axis, const SolverParams& params);

/// Full mobile gradient of f_D through distributed_grad_f_D.
MobileGradient distributed_grad_f_D_all(const Configuration& config, const RangingGraph& graph,
                                        const NoiseModel& model, const SolverParams& params,
                                        std::vector<RoundMessage>* transcript = nullptr);

/// Messages of the given kind sent in `round`.
std::size_t count_messages(const std::vector<RoundMessage>& log, int round, MessageKind kind = MessageKind::XiBlock);

/// One line per message: round,sender,receiver,kind,payload entries (row-major).
void write_transcript(std::ostream& os, const std::vector<RoundMessage>& log);

}  // namespace locdeploy
