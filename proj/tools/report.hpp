#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace sidkit::cli {

struct InputInfo {
  std::string path;
  std::string label;
  long long count = 0;
  long long dim = 0;

  friend bool operator==(const InputInfo&, const InputInfo&) = default;
};

/// Machine-readable record of one CLI invocation. Serializes to a JSON
/// object with keys command, inputs, parameters, results, tool_version,
/// wall_time_ms.
struct RunReport {
  std::string command;
  std::vector<InputInfo> inputs;
  std::map<std::string, nlohmann::json> parameters;  // scalar values only
  nlohmann::json results = nlohmann::json::object();
  std::string tool_version;
  long long wall_time_ms = 0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

/// JSON cannot hold non-finite numbers; they are written as the strings
/// "inf", "-inf" and "nan".
nlohmann::json number(double v);

}  // namespace sidkit::cli
