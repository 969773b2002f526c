#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vvp/signal_fusion.h"

namespace vvp {

enum class ScenarioKind { kUrban, kHighway };
enum class TrafficDensity { kLow, kHigh };

std::string_view ToString(ScenarioKind kind);
std::string_view ToString(TrafficDensity density);
ScenarioKind ParseScenarioKind(std::string_view text);
TrafficDensity ParseTrafficDensity(std::string_view text);

// Lead vehicle target speed from start_s onward.
struct SpeedSegment {
  double start_s = 0.0;
  double target = 0.0;

  friend bool operator==(const SpeedSegment&, const SpeedSegment&) = default;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kUrban;
  int duration = 900;  // seconds, one frame per second
  std::uint64_t seed = 1;
  double light_spacing = 400.0;  // m, urban only
  double light_green = 25.0;     // s
  double light_red = 30.0;       // s
  // Empty: seeded piecewise-constant profile for the kind and density.
  std::vector<SpeedSegment> lead_speed_profile;
  double ego_max_speed = 16.7;  // m/s, IDM desired speed
  double ego_max_accel = 2.0;   // m/s^2
  double ego_max_decel = 3.0;   // m/s^2, IDM comfortable decel and hard limit
  TrafficDensity density = TrafficDensity::kHigh;

  // Optional overrides, mostly for controlled experiments.
  std::optional<double> light_phase_offset;  // s; same phase for all lights
  std::optional<double> initial_speed;       // m/s; default first target
  std::optional<double> initial_gap;         // m; default IDM equilibrium

  // Throws ParameterError on invalid settings.
  void Validate() const;

  static ScenarioConfig Urban(std::uint64_t seed = 1);
  static ScenarioConfig Highway(std::uint64_t seed = 1);
};

// IDM settings shared by the simulator and its tests.
inline constexpr double kVehicleLength = 5.0;
inline constexpr double kIdmTimeHeadway = 1.5;
inline constexpr double kIdmMinGap = 2.0;
inline constexpr double kIdmExponent = 4.0;

// IDM acceleration for a follower at speed v with bumper gap `gap` and
// closing speed v - v_leader.
double IdmAcceleration(double v, double gap, double closing_speed,
                       double desired_speed, double max_accel,
                       double comfortable_decel);

// Gap at which IDM acceleration is zero when following at speed v.
double IdmEquilibriumGap(double v, double desired_speed, double max_accel);

// Simulates the ego vehicle behind a lead vehicle (and through fixed-cycle
// signals in urban scenarios) and samples it at 1 Hz.
std::vector<SignalFrame> Generate(const ScenarioConfig& config);

struct TraceStats {
  double total_mileage_km = 0.0;
  double max_speed = 0.0;
  double avg_speed = 0.0;
  double max_pos_accel = 0.0;
  double max_neg_accel = 0.0;
  double accel_ratio = 0.0;
  double decel_ratio = 0.0;
};

inline constexpr double kAccelDeadBand = 0.05;

// Requires at least two frames (InputError).
TraceStats ComputeStats(std::span<const SignalFrame> frames);

}  // namespace vvp
