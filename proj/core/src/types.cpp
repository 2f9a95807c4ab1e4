#include "locdeploy/types.hpp"

#include "locdeploy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace locdeploy {

CoincidentPointsError::CoincidentPointsError(int i, int j, double distance)
    : Error([&] {
        std::ostringstream os;
        os << "coincident connected nodes " << i << " and " << j << " (distance " << distance << ")";
        return os.str();
      }()),
      first_(i),
      second_(j) {}

SingularFimError::SingularFimError(double lambda_min, double lambda_max)
    : Error([&] {
        std::ostringstream os;
        os << "singular FIM: lambda_min=" << lambda_min << " lambda_max=" << lambda_max;
        return os.str();
      }()),
      lambda_min_(lambda_min),
      lambda_max_(lambda_max) {}

BarrierViolationError::BarrierViolationError(int i, int j, double distance, double dmax)
    : Error([&] {
        std::ostringstream os;
        os << "constrained link " << i << "-" << j << " broken: distance " << distance
           << " >= dmax " << dmax;
        return os.str();
      }()) {}

ScenarioParseError::ScenarioParseError(const std::string& field, const std::string& what, int line)
    : Error([&] {
        std::ostringstream os;
        os << "scenario";
        if (line > 0) os << " line " << line;
        if (!field.empty()) os << " field '" << field << "'";
        os << ": " << what;
        return os.str();
      }()),
      field_(field),
      line_(line) {}

// ---------------------------------------------------------------------------

Configuration::Configuration(std::vector<Point> positions, int num_mobile)
    : positions_(std::move(positions)), num_mobile_(num_mobile) {
  if (num_mobile_ < 1 || num_mobile_ > static_cast<int>(positions_.size())) {
    throw std::invalid_argument("Configuration: need 1 <= num_mobile <= number of positions");
  }
  for (const auto& p : positions_) {
    if (!p.allFinite()) throw std::invalid_argument("Configuration: non-finite coordinate");
  }
}

void Configuration::set_mobile_position(int node, const Point& p) {
  if (!is_mobile(node)) throw std::out_of_range("Configuration: node is not mobile");
  if (!p.allFinite()) throw std::invalid_argument("Configuration: non-finite coordinate");
  positions_[static_cast<std::size_t>(node)] = p;
}

Eigen::VectorXd Configuration::mobile_vector() const {
  Eigen::VectorXd v(2 * num_mobile_);
  for (int i = 0; i < num_mobile_; ++i) v.segment<2>(2 * i) = positions_[static_cast<std::size_t>(i)];
  return v;
}

Configuration Configuration::with_mobile_vector(const Eigen::VectorXd& stacked) const {
  if (stacked.size() != 2 * num_mobile_) throw std::invalid_argument("with_mobile_vector: size mismatch");
  Configuration out = *this;
  for (int i = 0; i < num_mobile_; ++i) out.set_mobile_position(i, stacked.segment<2>(2 * i));
  return out;
}

Configuration Configuration::translated(const Point& t) const {
  Configuration out = *this;
  for (auto& p : out.positions_) p += t;
  return out;
}

// ---------------------------------------------------------------------------

RangingGraph::RangingGraph(int num_nodes) : num_nodes_(num_nodes), adjacency_(static_cast<std::size_t>(num_nodes)) {
  if (num_nodes < 1) throw std::invalid_argument("RangingGraph: need at least one node");
}

void RangingGraph::add_edge(int i, int j, bool constrained) {
  if (i == j) throw std::invalid_argument("RangingGraph: self-loop");
  if (i < 0 || j < 0 || i >= num_nodes_ || j >= num_nodes_) {
    throw std::out_of_range("RangingGraph: edge endpoint out of range");
  }
  const Edge e{std::min(i, j), std::max(i, j)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  const auto pos = static_cast<std::size_t>(it - edges_.begin());
  if (it != edges_.end() && *it == e) {
    if (constrained) constrained_[pos] = true;
    return;
  }
  edges_.insert(it, e);
  constrained_.insert(constrained_.begin() + static_cast<std::ptrdiff_t>(pos), constrained);
  auto link = [](std::vector<int>& adj, int v) { adj.insert(std::lower_bound(adj.begin(), adj.end(), v), v); };
  link(adjacency_[static_cast<std::size_t>(i)], j);
  link(adjacency_[static_cast<std::size_t>(j)], i);
}

bool RangingGraph::has_edge(int i, int j) const {
  const Edge e{std::min(i, j), std::max(i, j)};
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

bool RangingGraph::is_constrained(int i, int j) const {
  const Edge e{std::min(i, j), std::max(i, j)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || !(*it == e)) return false;
  return constrained_[static_cast<std::size_t>(it - edges_.begin())];
}

std::vector<Edge> RangingGraph::constrained_edges() const {
  std::vector<Edge> out;
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (constrained_[k]) out.push_back(edges_[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------

NoiseModel::NoiseModel(NoiseKind kind, double sigma) : kind_(kind), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("NoiseModel: sigma must be positive");
}

// ---------------------------------------------------------------------------

Block BlockMatrix::block(int i, int j) const {
  auto it = blocks_.find({i, j});
  return it == blocks_.end() ? Block::Zero() : it->second;
}

void BlockMatrix::set_symmetric(int i, int j, const Block& b) {
  if (i < 0 || j < 0 || i >= block_dim_ || j >= block_dim_) throw std::out_of_range("BlockMatrix: index");
  blocks_[{i, j}] = b;
  blocks_[{j, i}] = b.transpose();
}

void BlockMatrix::add_diagonal(int i, const Block& b) {
  if (i < 0 || i >= block_dim_) throw std::out_of_range("BlockMatrix: index");
  auto [it, inserted] = blocks_.try_emplace({i, i}, Block::Zero());
  it->second += b;
}

Eigen::MatrixXd BlockMatrix::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dim(), dim());
  for (const auto& [key, b] : blocks_) dense.block<2, 2>(2 * key.first, 2 * key.second) = b;
  return dense;
}

double BlockMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < block_dim_; ++i) t += block(i, i).trace();
  return t;
}

Eigen::VectorXd stack(const MobileGradient& g) {
  Eigen::VectorXd v(2 * static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) v.segment<2>(2 * static_cast<Eigen::Index>(i)) = g[i];
  return v;
}

MobileGradient unstack(const Eigen::VectorXd& v) {
  MobileGradient g(static_cast<std::size_t>(v.size() / 2));
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = v.segment<2>(2 * static_cast<Eigen::Index>(i));
  return g;
}

}  // namespace locdeploy
