#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace locdeploy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

struct RunOptions {
  std::string scenario;
  std::string out_dir;
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> gradient_mode;
  std::vector<std::string> overrides;  // "section.field=value"
  bool messages = false;
};

struct ProbeOptions {
  std::string scenario;
  std::vector<std::string> overrides;
};

struct VerifyOptions {
  std::optional<std::string> scenario;
  std::optional<int> random_nodes;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  bool corrupt_weight = false;
};

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_probe(const ProbeOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

}  // namespace locdeploy::cli
