#include "cli/json_io.h"

#include <set>
#include <string>

#include "vvp/errors.h"

namespace vvp::cli {

using nlohmann::json;

namespace {

double Number(const json& j, const char* key) {
  if (!j.is_number()) {
    throw ParameterError(std::string("config field '") + key +
                         "' must be a number");
  }
  return j.get<double>();
}

}  // namespace

ScenarioConfig ScenarioConfigFromJson(const json& j) {
  if (!j.is_object()) throw ParameterError("scenario config must be an object");
  static const std::set<std::string> kKnown = {
      "kind",          "duration",          "seed",
      "light_spacing", "light_cycle",       "lead_speed_profile",
      "ego_max_speed", "ego_max_accel",     "ego_max_decel",
      "traffic_density", "light_phase_offset", "initial_speed",
      "initial_gap"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) {
      throw ParameterError("unknown config field '" + key + "'");
    }
  }

  ScenarioKind kind = ScenarioKind::kUrban;
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw ParameterError("'kind' must be a string");
    kind = ParseScenarioKind(j["kind"].get<std::string>());
  }
  ScenarioConfig config = kind == ScenarioKind::kUrban ? ScenarioConfig::Urban()
                                                       : ScenarioConfig::Highway();
  if (j.contains("duration")) {
    if (!j["duration"].is_number_integer()) {
      throw ParameterError("'duration' must be an integer");
    }
    config.duration = j["duration"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw ParameterError("'seed' must be a non-negative integer");
    }
    config.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("light_spacing")) {
    config.light_spacing = Number(j["light_spacing"], "light_spacing");
  }
  if (j.contains("light_cycle")) {
    const json& cycle = j["light_cycle"];
    if (!cycle.is_array() || cycle.size() != 2) {
      throw ParameterError("'light_cycle' must be [green_s, red_s]");
    }
    config.light_green = Number(cycle[0], "light_cycle");
    config.light_red = Number(cycle[1], "light_cycle");
  }
  if (j.contains("lead_speed_profile")) {
    const json& profile = j["lead_speed_profile"];
    if (!profile.is_array()) {
      throw ParameterError("'lead_speed_profile' must be an array of [t, v]");
    }
    for (const json& segment : profile) {
      if (!segment.is_array() || segment.size() != 2) {
        throw ParameterError("'lead_speed_profile' entries must be [t, v]");
      }
      config.lead_speed_profile.push_back(
          {Number(segment[0], "lead_speed_profile"),
           Number(segment[1], "lead_speed_profile")});
    }
  }
  if (j.contains("ego_max_speed")) {
    config.ego_max_speed = Number(j["ego_max_speed"], "ego_max_speed");
  }
  if (j.contains("ego_max_accel")) {
    config.ego_max_accel = Number(j["ego_max_accel"], "ego_max_accel");
  }
  if (j.contains("ego_max_decel")) {
    config.ego_max_decel = Number(j["ego_max_decel"], "ego_max_decel");
  }
  if (j.contains("traffic_density")) {
    if (!j["traffic_density"].is_string()) {
      throw ParameterError("'traffic_density' must be a string");
    }
    config.density = ParseTrafficDensity(j["traffic_density"].get<std::string>());
  }
  auto optional_number = [&](const char* key, std::optional<double>& field) {
    if (j.contains(key) && !j[key].is_null()) field = Number(j[key], key);
  };
  optional_number("light_phase_offset", config.light_phase_offset);
  optional_number("initial_speed", config.initial_speed);
  optional_number("initial_gap", config.initial_gap);

  config.Validate();
  return config;
}

json ToJson(const ScenarioConfig& config) {
  json profile = json::array();
  for (const SpeedSegment& s : config.lead_speed_profile) {
    profile.push_back({s.start_s, s.target});
  }
  json j = {
      {"kind", std::string(ToString(config.kind))},
      {"duration", config.duration},
      {"seed", config.seed},
      {"light_spacing", config.light_spacing},
      {"light_cycle", {config.light_green, config.light_red}},
      {"lead_speed_profile", profile},
      {"ego_max_speed", config.ego_max_speed},
      {"ego_max_accel", config.ego_max_accel},
      {"ego_max_decel", config.ego_max_decel},
      {"traffic_density", std::string(ToString(config.density))},
  };
  auto optional_number = [&](const char* key, const std::optional<double>& v) {
    j[key] = v ? json(*v) : json(nullptr);
  };
  optional_number("light_phase_offset", config.light_phase_offset);
  optional_number("initial_speed", config.initial_speed);
  optional_number("initial_gap", config.initial_gap);
  return j;
}

json ToJson(const TraceStats& stats) {
  return {
      {"total_mileage", stats.total_mileage_km},
      {"max_speed", stats.max_speed},
      {"avg_speed", stats.avg_speed},
      {"max_pos_accel", stats.max_pos_accel},
      {"max_neg_accel", stats.max_neg_accel},
      {"accel_ratio", stats.accel_ratio},
      {"decel_ratio", stats.decel_ratio},
  };
}

json ToJson(const GrnnParams& params) {
  return {{"order", params.order},
          {"sigma", params.sigma},
          {"horizon", params.horizon}};
}

std::filesystem::path StatsSidecarPath(const std::filesystem::path& trace) {
  std::filesystem::path out = trace;
  out.replace_extension(".stats.json");
  return out;
}

}  // namespace vvp::cli
