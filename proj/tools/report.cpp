#include "report.hpp"

#include <cmath>

#include "sidkit/errors.hpp"

namespace sidkit::cli {

nlohmann::json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json to_json(const RunReport& report) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : report.inputs) {
    inputs.push_back({{"path", in.path},
                      {"label", in.label},
                      {"count", in.count},
                      {"dim", in.dim}});
  }
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : report.parameters) params[k] = v;
  return {{"command", report.command},
          {"inputs", inputs},
          {"parameters", params},
          {"results", report.results},
          {"tool_version", report.tool_version},
          {"wall_time_ms", report.wall_time_ms}};
}

RunReport report_from_json(const nlohmann::json& j) {
  try {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    for (const auto& in : j.at("inputs")) {
      r.inputs.push_back({in.at("path").get<std::string>(),
                          in.at("label").get<std::string>(),
                          in.at("count").get<long long>(),
                          in.at("dim").get<long long>()});
    }
    for (const auto& [k, v] : j.at("parameters").items()) {
      if (v.is_structured()) {
        throw FormatError("report parameter '" + k + "' is not a scalar");
      }
      r.parameters[k] = v;
    }
    r.results = j.at("results");
    r.tool_version = j.at("tool_version").get<std::string>();
    r.wall_time_ms = j.at("wall_time_ms").get<long long>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report JSON: ") + e.what());
  }
}

}  // namespace sidkit::cli
