#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msrpa/graph.hpp"

namespace msrpa::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidationFailed = 2,
  kRuntimeAbort = 3,
  kCheckFailed = 4,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "MSRPA_OUTPUT_DIR";

struct RunOptions {
  std::vector<std::string> scenarios;
  bool strict = false;
  bool check_theorems = false;
  bool write_outputs = true;
  std::optional<std::int64_t> eta;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> horizon;
  std::optional<double> u_max;
  std::optional<std::string> out_dir;
  unsigned jobs = 1;
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

struct RobustnessOptions {
  std::optional<std::size_t> circulant_n;
  std::optional<std::size_t> circulant_k;
  bool directed = false;
  std::optional<std::string> edge_list;
  std::optional<std::size_t> n;
  std::string set;
  std::size_t index_base = 0;
  std::size_t r = 1;
  bool bruteforce = false;
};

int cmd_robustness(const RobustnessOptions& opts, std::ostream& out, std::ostream& err);

/// Parses "1..5,8,10..11" into agent ids, subtracting `index_base`.
AgentSet parse_agent_list(const std::string& text, std::size_t index_base);

int main_entry(int argc, char** argv);

}  // namespace msrpa::cli
