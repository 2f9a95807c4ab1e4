#include "locdeploy/potentials.hpp"

#include "locdeploy/errors.hpp"
#include "locdeploy/fim.hpp"

#include <cmath>
#include <stdexcept>

namespace locdeploy {

void PotentialWeights::validate() const {
  if (!std::isfinite(alpha_conn) || alpha_conn < 0.0 || !std::isfinite(beta_task) || beta_task < 0.0) {
    throw std::invalid_argument("PotentialWeights: weights must be finite and non-negative");
  }
}

void BarrierSpec::validate() const {
  if (!(d0 > 0.0) || !(d0 < dmax) || !std::isfinite(dmax)) {
    throw std::invalid_argument("BarrierSpec: need 0 < d0 < dmax");
  }
}

// ---------------------------------------------------------------------------

FimFactorization::FimFactorization(const BlockMatrix& fim) : dense_(fim.to_dense()) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense_, Eigen::EigenvaluesOnly);
  lambda_min_ = eig.eigenvalues().minCoeff();
  lambda_max_ = eig.eigenvalues().maxCoeff();
  if (!(lambda_max_ > 0.0) || lambda_min_ <= kSingularityCutoff * lambda_max_) {
    throw SingularFimError(lambda_min_, lambda_max_);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(dense_);
  if (llt.info() != Eigen::Success) throw SingularFimError(lambda_min_, lambda_max_);
  log_det_ = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  inverse_ = llt.solve(Eigen::MatrixXd::Identity(dense_.rows(), dense_.cols()));
}

double trace_product(const Eigen::MatrixXd& m, const BlockMatrix& d) {
  // Tr(M D) = sum_{a,b} Tr(M_ba D_ab)
  double t = 0.0;
  for (const auto& [key, block] : d.blocks()) {
    const auto [a, b] = key;
    t += (m.block<2, 2>(2 * b, 2 * a) * block).trace();
  }
  return t;
}

// ---------------------------------------------------------------------------

double f_T(const BlockMatrix& fim) { return -fim.trace(); }

MobileGradient grad_f_T(const Configuration& config, const RangingGraph& graph, const NoiseModel& model) {
  const int n = config.num_mobile();
  const double a = model.alpha();
  const double s2 = model.sigma() * model.sigma();
  MobileGradient g(static_cast<std::size_t>(n), Eigen::Vector2d::Zero());
  for (int i = 0; i < n; ++i) {
    for (int k : graph.neighbors(i)) {
      const Point delta = config.position(i) - config.position(k);
      const double d2 = delta.squaredNorm();
      if (!(std::sqrt(d2) >= kMinSeparation)) throw CoincidentPointsError(i, k, std::sqrt(d2));
      const double d2a = a == 1 ? d2 : d2 * d2;
      // A mobile neighbor's diagonal block also moves with p_i; an anchor's
      // block is not part of F.
      const double prefactor = (config.is_mobile(k) ? 4.0 : 2.0) / s2;
      g[static_cast<std::size_t>(i)] += prefactor / d2a * (-delta + a * d2 / d2 * delta);
    }
  }
  return g;
}

MobileGradient grad_f_T_trace_route(const Configuration& config, const RangingGraph& graph,
                                    const NoiseModel& model) {
  const int n = config.num_mobile();
  MobileGradient g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (Axis axis : {Axis::X, Axis::Y}) {
      const BlockMatrix df = assemble_fim_derivative(config, graph, model, i, axis);
      g[static_cast<std::size_t>(i)](axis == Axis::X ? 0 : 1) = -df.trace();
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

double f_D(const BlockMatrix& fim) { return -FimFactorization(fim).log_det(); }

namespace {

template <typename TraceFn>
MobileGradient directional_traces(const Configuration& config, const RangingGraph& graph, const NoiseModel& model,
                                  TraceFn&& trace_of) {
  const int n = config.num_mobile();
  MobileGradient g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (Axis axis : {Axis::X, Axis::Y}) {
      const BlockMatrix df = assemble_fim_derivative(config, graph, model, i, axis);
      g[static_cast<std::size_t>(i)](axis == Axis::X ? 0 : 1) = -trace_of(df);
    }
  }
  return g;
}

}  // namespace

MobileGradient grad_f_D(const Configuration& config, const RangingGraph& graph, const NoiseModel& model) {
  const FimFactorization fact(assemble_fim(config, graph, model));
  return directional_traces(config, graph, model,
                            [&](const BlockMatrix& df) { return trace_product(fact.inverse(), df); });
}

double f_A(const BlockMatrix& fim) { return FimFactorization(fim).inverse().trace(); }

MobileGradient grad_f_A(const Configuration& config, const RangingGraph& graph, const NoiseModel& model) {
  const FimFactorization fact(assemble_fim(config, graph, model));
  const Eigen::MatrixXd inv2 = fact.inverse() * fact.inverse();
  return directional_traces(config, graph, model, [&](const BlockMatrix& df) { return trace_product(inv2, df); });
}

double f_E(const BlockMatrix& fim) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fim.to_dense(), Eigen::EigenvaluesOnly);
  return -eig.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------

namespace {

void check_task(const Configuration& config, const TaskSpec& task) {
  if (static_cast<int>(task.target_x.size()) != config.num_mobile()) {
    throw std::invalid_argument("TaskSpec: one target per mobile robot required");
  }
}

}  // namespace

double f_task(const Configuration& config, const TaskSpec& task) {
  check_task(config, task);
  double v = 0.0;
  for (int i = 0; i < config.num_mobile(); ++i) {
    const double e = config.position(i).x() - task.target_x[static_cast<std::size_t>(i)];
    v += e * e;
  }
  return 0.5 * v;
}

MobileGradient grad_f_task(const Configuration& config, const TaskSpec& task) {
  check_task(config, task);
  MobileGradient g(static_cast<std::size_t>(config.num_mobile()));
  for (int i = 0; i < config.num_mobile(); ++i) {
    g[static_cast<std::size_t>(i)] = {config.position(i).x() - task.target_x[static_cast<std::size_t>(i)], 0.0};
  }
  return g;
}

// ---------------------------------------------------------------------------

double barrier_value(double d, const BarrierSpec& barrier) {
  if (d < barrier.d0) return 0.0;
  const double u = 1.0 / (barrier.dmax - d) - 1.0 / (barrier.dmax - barrier.d0);
  return u * u;
}

double barrier_derivative(double d, const BarrierSpec& barrier) {
  if (d < barrier.d0) return 0.0;
  const double inv = 1.0 / (barrier.dmax - d);
  return 2.0 * (inv - 1.0 / (barrier.dmax - barrier.d0)) * inv * inv;
}

namespace {

double constrained_distance(const Configuration& config, const Edge& e, const BarrierSpec& barrier) {
  const double d = (config.position(e.a) - config.position(e.b)).norm();
  if (!(d < barrier.dmax)) throw BarrierViolationError(e.a, e.b, d, barrier.dmax);
  return d;
}

}  // namespace

double f_conn(const Configuration& config, const RangingGraph& graph, const BarrierSpec& barrier) {
  barrier.validate();
  double v = 0.0;
  for (const Edge& e : graph.constrained_edges()) v += barrier_value(constrained_distance(config, e, barrier), barrier);
  return v;
}

std::vector<Eigen::Vector2d> grad_f_conn(const Configuration& config, const RangingGraph& graph,
                                         const BarrierSpec& barrier) {
  barrier.validate();
  std::vector<Eigen::Vector2d> g(static_cast<std::size_t>(config.num_nodes()), Eigen::Vector2d::Zero());
  for (const Edge& e : graph.constrained_edges()) {
    const double d = constrained_distance(config, e, barrier);
    const double slope = barrier_derivative(d, barrier);
    if (slope == 0.0) continue;
    const Eigen::Vector2d dir = (config.position(e.a) - config.position(e.b)) / d;
    g[static_cast<std::size_t>(e.a)] += slope * dir;
    g[static_cast<std::size_t>(e.b)] -= slope * dir;
  }
  return g;
}

// ---------------------------------------------------------------------------

MobileGradient combine_gradients(const PotentialWeights& weights, int num_mobile, const MobileGradient& loc,
                                 const MobileGradient& conn, const MobileGradient& task) {
  MobileGradient g(static_cast<std::size_t>(num_mobile), Eigen::Vector2d::Zero());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!loc.empty()) g[i] += loc[i];
    if (!conn.empty()) g[i] += weights.alpha_conn * conn[i];
    if (!task.empty()) g[i] += weights.beta_task * task[i];
  }
  return g;
}

PotentialEvaluation total_potential(const Configuration& config, const RangingGraph& graph, const NoiseModel& model,
                                    const PotentialWeights& weights, const std::optional<TaskSpec>& task,
                                    const std::optional<BarrierSpec>& barrier, GradientRequest request) {
  weights.validate();
  if (weights.alpha_conn > 0.0 && !barrier) throw std::invalid_argument("alpha_conn > 0 requires a barrier");
  if (weights.beta_task > 0.0 && !task) throw std::invalid_argument("beta_task > 0 requires a task");

  const bool want_grad = request != GradientRequest::None;
  const bool want_loc_grad = request == GradientRequest::Full;
  const int n = config.num_mobile();
  PotentialEvaluation out;

  if (weights.loc_kind != LocKind::None) {
    if (weights.loc_kind == LocKind::E && want_loc_grad) {
      throw UnsupportedGradientError("f_E is evaluation-only; no gradient is available");
    }
    const BlockMatrix fim = assemble_fim(config, graph, model);
    switch (weights.loc_kind) {
      case LocKind::T:
        out.loc = f_T(fim);
        if (want_loc_grad) out.grad_loc = grad_f_T(config, graph, model);
        break;
      case LocKind::D:
        out.loc = f_D(fim);
        if (want_loc_grad) out.grad_loc = grad_f_D(config, graph, model);
        break;
      case LocKind::A:
        out.loc = f_A(fim);
        if (want_loc_grad) out.grad_loc = grad_f_A(config, graph, model);
        break;
      case LocKind::E:
        out.loc = f_E(fim);
        break;
      case LocKind::None:
        break;
    }
  }

  if (barrier && weights.alpha_conn > 0.0) {
    out.conn = f_conn(config, graph, *barrier);
    if (want_grad) {
      auto full = grad_f_conn(config, graph, *barrier);
      out.grad_conn.assign(full.begin(), full.begin() + n);
    }
  }
  if (task && weights.beta_task > 0.0) {
    out.task = f_task(config, *task);
    if (want_grad) out.grad_task = grad_f_task(config, *task);
  }

  out.total = out.loc.value_or(0.0) + weights.alpha_conn * out.conn + weights.beta_task * out.task;
  if (want_grad) out.gradient = combine_gradients(weights, n, out.grad_loc, out.grad_conn, out.grad_task);
  return out;
}

}  // namespace locdeploy
