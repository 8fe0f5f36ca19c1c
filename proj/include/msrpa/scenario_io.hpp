#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "msrpa/engine.hpp"

namespace msrpa {

/// Output file names, relative to the output directory.
struct OutputPaths {
  std::string trace;
  std::string messages;
  std::string metrics;

  bool operator==(const OutputPaths&) const = default;
};

struct ScenarioFile {
  Scenario scenario;
  OutputPaths outputs;
  /// Label base used by the file (0 or 1). Internally agents are 0-based.
  std::size_t index_base = 0;
};

/// Builds a scenario from a parsed document. Unknown keys and type errors
/// raise ScenarioError naming the offending key path. Relative edge-list
/// paths resolve against `base_dir`.
ScenarioFile parse_scenario(const nlohmann::json& doc,
                            const std::filesystem::path& base_dir = {});

/// Reads and parses a scenario file.
ScenarioFile load_scenario_file(const std::filesystem::path& path);

/// Convenience: load_scenario_file(path).scenario.
Scenario load_scenario(const std::filesystem::path& path);

/// Serializes with index_base 0 and the graph as an inline edge list, so
/// parse_scenario(to_json(f)) reproduces f.scenario exactly.
nlohmann::json to_json(const ScenarioFile& file);

}  // namespace msrpa
