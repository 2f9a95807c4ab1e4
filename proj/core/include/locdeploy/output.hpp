#pragma once

#include "locdeploy/distributed.hpp"
#include "locdeploy/planner.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace locdeploy {

/// "%.17g"; NaN prints as "nan".
std::string format_number(double v);

/// trajectory.csv: step,id,x,y sorted by step then id.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record, const std::vector<int>& node_ids);

/// costs.csv: step,f_total,f_loc,f_conn,f_task,grad_norm,gamma. f_loc is
/// "nan" when the scenario has no localizability term.
void write_costs_csv(std::ostream& os, const TrajectoryRecord& record);

/// key = value lines: termination, steps_used, final values, then `extra`
/// in the given order.
void write_summary(std::ostream& os, const TrajectoryRecord& record,
                   const std::vector<std::pair<std::string, std::string>>& extra);

struct BundlePaths {
  std::filesystem::path trajectory;
  std::filesystem::path costs;
  std::filesystem::path summary;
  std::filesystem::path messages;  // empty unless a transcript was written
};

/// Writes the output bundle into `dir` (created if needed).
BundlePaths write_bundle(const std::filesystem::path& dir, const TrajectoryRecord& record,
                         const std::vector<int>& node_ids,
                         const std::vector<std::pair<std::string, std::string>>& extra,
                         const std::vector<RoundMessage>* transcript = nullptr);

}  // namespace locdeploy
