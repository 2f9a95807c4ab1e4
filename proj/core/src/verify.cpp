#include "locdeploy/verify.hpp"

#include "locdeploy/errors.hpp"
#include "locdeploy/fim.hpp"
#include "locdeploy/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace locdeploy {

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

Eigen::VectorXd central_difference_gradient(const std::function<double(const Configuration&)>& f,
                                            const Configuration& config, double step) {
  const Eigen::VectorXd x = config.mobile_vector();
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd plus = x;
    Eigen::VectorXd minus = x;
    plus(k) += step;
    minus(k) -= step;
    g(k) = (f(config.with_mobile_vector(plus)) - f(config.with_mobile_vector(minus))) / (2.0 * step);
  }
  return g;
}

double gradient_relative_error(const Eigen::VectorXd& analytic, const Eigen::VectorXd& reference) {
  const double scale = std::max(reference.cwiseAbs().maxCoeff(), 1e-3);
  return (analytic - reference).cwiseAbs().maxCoeff() / scale;
}

namespace {

CheckResult residual_check(std::string name, double value, double tolerance) {
  return CheckResult{std::move(name), value, tolerance, value <= tolerance, {}};
}

// -Tr F summed per edge in extended precision. For additive noise f_T does
// not depend on positions, so a double-precision difference quotient would
// only see rounding noise.
double f_T_extended(const Configuration& config, const RangingGraph& graph, const NoiseModel& model) {
  long double sum = 0;
  const long double s2 = static_cast<long double>(model.sigma()) * model.sigma();
  for (const Edge& e : graph.edges()) {
    const long double dx = static_cast<long double>(config.position(e.a).x()) - config.position(e.b).x();
    const long double dy = static_cast<long double>(config.position(e.a).y()) - config.position(e.b).y();
    const long double d2 = dx * dx + dy * dy;
    const long double term = d2 / (s2 * (model.alpha() == 1 ? d2 : d2 * d2));
    sum += (config.is_mobile(e.a) ? term : 0) + (config.is_mobile(e.b) ? term : 0);
  }
  return static_cast<double>(-sum);
}

CheckResult skipped(std::string name, std::string why) {
  return CheckResult{std::move(name), 0.0, 0.0, true, std::move(why)};
}

}  // namespace

VerificationReport verify_configuration(const Configuration& config, const RangingGraph& graph,
                                        const NoiseModel& model, const VerificationOptions& options) {
  VerificationReport report;
  const OrientedGraph oriented = OrientedGraph::canonical(graph);
  const Eigen::MatrixXd f1 = split_extended_fim(config, graph, model);
  const double scale = std::max(1.0, f1.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * scale;

  {
    const Eigen::MatrixXd r = Eigen::MatrixXd(rigidity_matrix(config, oriented, model));
    report.checks.push_back(residual_check("F1 - R^T R", (f1 - r.transpose() * r).cwiseAbs().maxCoeff(), tol));
  }
  {
    EdgeWeightMatrix q = weight_matrix_q(config, oriented, model);
    if (options.corrupt_weight && q.xx.size() > 0) {
      q.xx(0) = 1.5 * q.xx(0) + 1.0;
    }
    const Eigen::MatrixXd product = weighted_laplacian_product(oriented, q);
    report.checks.push_back(residual_check("F1 - (I2 x B) Q (I2 x B^T)", (f1 - product).cwiseAbs().maxCoeff(), tol));
  }

  {
    const BlockMatrix fbar = assemble_extended_fim(config, graph, model);
    double worst = 0.0;
    for (int i = 0; i < fbar.block_dim(); ++i) {
      Block sum = Block::Zero();
      for (int j = 0; j < fbar.block_dim(); ++j) sum += fbar.block(i, j);
      worst = std::max(worst, sum.cwiseAbs().maxCoeff());
    }
    report.checks.push_back(residual_check("extended FIM block-row sums", worst, tol));
  }

  {
    const Eigen::MatrixXd basis = rigid_motion_basis(config);
    double coord_scale = 1.0;
    for (const Point& p : config.positions()) coord_scale = std::max(coord_scale, p.cwiseAbs().maxCoeff());
    report.checks.push_back(residual_check("null space: x-translation", (f1 * basis.col(0)).cwiseAbs().maxCoeff(), tol));
    report.checks.push_back(residual_check("null space: y-translation", (f1 * basis.col(1)).cwiseAbs().maxCoeff(), tol));
    report.checks.push_back(
        residual_check("null space: rotation", (f1 * basis.col(2)).cwiseAbs().maxCoeff(), tol * coord_scale));
    const int bound = 2 * config.num_nodes() - 3;
    const int rank = numerical_rank(f1);
    CheckResult c{"rank(F1) <= 2(n+m)-3", static_cast<double>(rank), static_cast<double>(bound), rank <= bound, {}};
    report.checks.push_back(c);
  }

  // Finite-difference audits.
  auto audit = [&](const std::string& name, const std::function<double(const Configuration&)>& f,
                   const MobileGradient& analytic) {
    const Eigen::VectorXd fd = central_difference_gradient(f, config, options.fd_step);
    report.checks.push_back(
        residual_check("fd gradient: " + name, gradient_relative_error(stack(analytic), fd), options.fd_rel_tol));
  };

  audit("f_T", [&](const Configuration& c) { return f_T_extended(c, graph, model); },
        grad_f_T(config, graph, model));

  bool nonsingular = true;
  try {
    FimFactorization probe(assemble_fim(config, graph, model));
  } catch (const SingularFimError&) {
    nonsingular = false;
  }
  if (nonsingular) {
    audit("f_D", [&](const Configuration& c) { return f_D(assemble_fim(c, graph, model)); },
          grad_f_D(config, graph, model));
    audit("f_A", [&](const Configuration& c) { return f_A(assemble_fim(c, graph, model)); },
          grad_f_A(config, graph, model));
  } else {
    report.checks.push_back(skipped("fd gradient: f_D", "singular FIM"));
    report.checks.push_back(skipped("fd gradient: f_A", "singular FIM"));
  }

  if (options.task) {
    audit("f_task", [&](const Configuration& c) { return f_task(c, *options.task); },
          grad_f_task(config, *options.task));
  }
  if (options.barrier && !graph.constrained_edges().empty()) {
    auto full = grad_f_conn(config, graph, *options.barrier);
    audit("f_conn", [&](const Configuration& c) { return f_conn(c, graph, *options.barrier); },
          MobileGradient(full.begin(), full.begin() + config.num_mobile()));
  }
  return report;
}

RandomInstance random_instance(int num_nodes, std::uint64_t seed) {
  if (num_nodes < 2) throw std::invalid_argument("random_instance: need at least 2 nodes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 5.0);
  const int anchors = num_nodes >= 4 ? 3 : num_nodes - 1;

  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < num_nodes) {
    const Point candidate(coord(rng), coord(rng));
    const bool separated = std::all_of(pts.begin(), pts.end(), [&](const Point& q) { return (q - candidate).norm() >= 0.3; });
    if (separated) pts.push_back(candidate);
  }
  Configuration config(std::move(pts), num_nodes - anchors);

  RangingGraph graph(num_nodes);
  std::bernoulli_distribution extra(0.4);
  for (int k = 1; k < num_nodes; ++k) {
    std::uniform_int_distribution<int> parent(0, k - 1);
    graph.add_edge(k, parent(rng));
  }
  for (int i = 0; i < num_nodes; ++i) {
    for (int j = i + 1; j < num_nodes; ++j) {
      if (extra(rng)) graph.add_edge(i, j);
    }
  }

  std::bernoulli_distribution multiplicative(0.5);
  std::uniform_real_distribution<double> sigma(0.05, 1.0);
  const NoiseKind kind = multiplicative(rng) ? NoiseKind::MultiplicativeLogNormal : NoiseKind::AdditiveGaussian;
  return RandomInstance{std::move(config), std::move(graph), NoiseModel(kind, sigma(rng))};
}

}  // namespace locdeploy
