#pragma once

#include <filesystem>

#include "json.hpp"
#include "vvp/grid_search.h"
#include "vvp/online_predictor.h"
#include "vvp/traffic_sim.h"

namespace vvp::cli {

// Scenario config from JSON. Fields mirror ScenarioConfig; `kind` picks the
// preset that supplies defaults for absent fields. Unknown fields are
// rejected with ParameterError.
ScenarioConfig ScenarioConfigFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const ScenarioConfig& config);
nlohmann::json ToJson(const TraceStats& stats);
nlohmann::json ToJson(const GrnnParams& params);

// Sidecar path for a trace: "dir/name.csv" -> "dir/name.stats.json".
std::filesystem::path StatsSidecarPath(const std::filesystem::path& trace);

}  // namespace vvp::cli
