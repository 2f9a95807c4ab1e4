#include "locdeploy/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace locdeploy {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record, const std::vector<int>& node_ids) {
  os << "step,id,x,y\n";
  std::vector<int> order(node_ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return node_ids[a] < node_ids[b]; });
  for (const StepRecord& s : record.steps) {
    if (static_cast<std::size_t>(s.config.num_nodes()) != node_ids.size()) {
      throw std::invalid_argument("write_trajectory_csv: id list does not match the configuration");
    }
    for (int node : order) {
      const Point& p = s.config.position(node);
      os << s.step << ',' << node_ids[static_cast<std::size_t>(node)] << ',' << format_number(p.x()) << ','
         << format_number(p.y()) << '\n';
    }
  }
}

void write_costs_csv(std::ostream& os, const TrajectoryRecord& record) {
  os << "step,f_total,f_loc,f_conn,f_task,grad_norm,gamma\n";
  for (const StepRecord& s : record.steps) {
    os << s.step << ',' << format_number(s.f_total) << ',' << format_number(s.f_loc.value_or(std::nan(""))) << ','
       << format_number(s.f_conn) << ',' << format_number(s.f_task) << ',' << format_number(s.grad_norm) << ','
       << format_number(s.gamma) << '\n';
  }
}

void write_summary(std::ostream& os, const TrajectoryRecord& record,
                   const std::vector<std::pair<std::string, std::string>>& extra) {
  os << "termination = " << to_string(record.termination) << '\n';
  os << "steps_used = " << (record.steps.empty() ? 0 : record.steps.back().step) << '\n';
  if (!record.steps.empty()) {
    const StepRecord& last = record.steps.back();
    os << "final_f_total = " << format_number(last.f_total) << '\n';
    os << "final_f_loc = " << (last.f_loc ? format_number(*last.f_loc) : "absent") << '\n';
    os << "final_f_conn = " << format_number(last.f_conn) << '\n';
    os << "final_f_task = " << format_number(last.f_task) << '\n';
    os << "final_grad_norm = " << format_number(last.grad_norm) << '\n';
  }
  if (!record.message.empty()) os << "message = " << record.message << '\n';
  for (const auto& [k, v] : extra) os << k << " = " << v << '\n';
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

}  // namespace

BundlePaths write_bundle(const std::filesystem::path& dir, const TrajectoryRecord& record,
                         const std::vector<int>& node_ids,
                         const std::vector<std::pair<std::string, std::string>>& extra,
                         const std::vector<RoundMessage>* transcript) {
  std::filesystem::create_directories(dir);
  BundlePaths paths{dir / "trajectory.csv", dir / "costs.csv", dir / "summary.txt", {}};
  {
    auto out = open_for_write(paths.trajectory);
    write_trajectory_csv(out, record, node_ids);
  }
  {
    auto out = open_for_write(paths.costs);
    write_costs_csv(out, record);
  }
  {
    auto out = open_for_write(paths.summary);
    write_summary(out, record, extra);
  }
  if (transcript) {
    paths.messages = dir / "messages.log";
    auto out = open_for_write(paths.messages);
    write_transcript(out, *transcript);
  }
  return paths;
}

}  // namespace locdeploy
