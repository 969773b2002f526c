#include "vvp/traffic_sim.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vvp/errors.h"
#include "vvp/random.h"

namespace vvp {

std::string_view ToString(ScenarioKind kind) {
  return kind == ScenarioKind::kUrban ? "urban" : "highway";
}

std::string_view ToString(TrafficDensity density) {
  return density == TrafficDensity::kHigh ? "high" : "low";
}

ScenarioKind ParseScenarioKind(std::string_view text) {
  if (text == "urban") return ScenarioKind::kUrban;
  if (text == "highway") return ScenarioKind::kHighway;
  throw ParameterError("unknown scenario kind '" + std::string(text) + "'");
}

TrafficDensity ParseTrafficDensity(std::string_view text) {
  if (text == "high") return TrafficDensity::kHigh;
  if (text == "low") return TrafficDensity::kLow;
  throw ParameterError("unknown traffic density '" + std::string(text) + "'");
}

void ScenarioConfig::Validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParameterError(std::string(name) + " must be positive");
    }
  };
  if (duration < 120) throw ParameterError("duration must be >= 120 s");
  positive(ego_max_speed, "ego_max_speed");
  positive(ego_max_accel, "ego_max_accel");
  positive(ego_max_decel, "ego_max_decel");
  if (kind == ScenarioKind::kUrban) {
    positive(light_spacing, "light_spacing");
    positive(light_green, "light_cycle green");
    if (!(light_red >= 0.0)) throw ParameterError("light_cycle red must be >= 0");
  }
  for (std::size_t i = 0; i < lead_speed_profile.size(); ++i) {
    const SpeedSegment& s = lead_speed_profile[i];
    if (!(s.target >= 0.0) || !std::isfinite(s.target) ||
        !std::isfinite(s.start_s)) {
      throw ParameterError("lead speed targets must be finite and >= 0");
    }
    if (i > 0 && !(s.start_s > lead_speed_profile[i - 1].start_s)) {
      throw ParameterError("lead speed segments must have increasing start_s");
    }
  }
  if (initial_speed && !(*initial_speed >= 0.0)) {
    throw ParameterError("initial_speed must be >= 0");
  }
  if (initial_gap && !(*initial_gap > 0.0)) {
    throw ParameterError("initial_gap must be positive");
  }
}

ScenarioConfig ScenarioConfig::Urban(std::uint64_t seed) {
  ScenarioConfig config;
  config.kind = ScenarioKind::kUrban;
  config.seed = seed;
  return config;
}

ScenarioConfig ScenarioConfig::Highway(std::uint64_t seed) {
  ScenarioConfig config;
  config.kind = ScenarioKind::kHighway;
  config.seed = seed;
  config.ego_max_speed = 36.0;
  config.ego_max_accel = 2.6;
  config.ego_max_decel = 3.0;
  return config;
}

double IdmAcceleration(double v, double gap, double closing_speed,
                       double desired_speed, double max_accel,
                       double comfortable_decel) {
  const double speed = std::max(0.0, v);
  const double desired_gap =
      kIdmMinGap +
      std::max(0.0, speed * kIdmTimeHeadway +
                        speed * closing_speed /
                            (2.0 * std::sqrt(max_accel * comfortable_decel)));
  const double free_term = std::pow(speed / desired_speed, kIdmExponent);
  const double ratio = desired_gap / std::max(gap, 0.01);
  return max_accel * (1.0 - free_term - ratio * ratio);
}

double IdmEquilibriumGap(double v, double desired_speed, double /*max_accel*/) {
  const double desired_gap = kIdmMinGap + v * kIdmTimeHeadway;
  const double free_term = std::pow(v / desired_speed, kIdmExponent);
  if (free_term >= 1.0) return 10.0 * desired_gap;
  return desired_gap / std::sqrt(1.0 - free_term);
}

namespace {

constexpr double kDt = 0.1;
constexpr int kSubsteps = 10;
// Lead drivers close the gap to their target speed over these time constants.
constexpr double kUrbanLeadRelaxation = 2.0;
constexpr double kHighwayLeadRelaxation = 10.0;
// Stop this far before the stop line when judging whether a stop is feasible.
constexpr double kStopMargin = 1.0;

struct Vehicle {
  double x = 0.0;  // front bumper, m
  double v = 0.0;
};

struct LeadLimits {
  double accel;
  double comfortable_decel;
  double hard_decel;
  double relaxation_s;
};

LeadLimits LeadLimitsFor(const ScenarioConfig& config) {
  const double hard = 0.8 * config.ego_max_decel;
  if (config.kind == ScenarioKind::kHighway) {
    return {std::min(0.5, config.ego_max_accel), std::min(0.5, hard), hard,
            kHighwayLeadRelaxation};
  }
  return {std::min(1.5, config.ego_max_accel), std::min(2.0, hard), hard,
          kUrbanLeadRelaxation};
}

std::vector<SpeedSegment> LeadProfile(const ScenarioConfig& config) {
  if (!config.lead_speed_profile.empty()) return config.lead_speed_profile;
  Rng rng(DeriveSeed(config.seed, 1));
  double lo, hi, min_hold, max_hold;
  if (config.kind == ScenarioKind::kUrban) {
    const bool high = config.density == TrafficDensity::kHigh;
    lo = high ? 6.0 : 9.0;
    hi = 15.0;
    min_hold = 30.0;
    max_hold = 60.0;
  } else {
    const bool high = config.density == TrafficDensity::kHigh;
    // Short holds and a slow lead response keep highway speed drifting gently
    // most of the time instead of cruising flat.
    lo = high ? 26.0 : 28.0;
    hi = high ? 37.0 : 38.0;
    min_hold = 8.0;
    max_hold = 20.0;
  }
  std::vector<SpeedSegment> profile;
  double start = 0.0;
  while (start < config.duration) {
    profile.push_back({start, rng.Uniform(lo, hi)});
    start += std::floor(rng.Uniform(min_hold, max_hold + 1.0));
  }
  return profile;
}

double TargetAt(const std::vector<SpeedSegment>& profile, double time) {
  double target = profile.front().target;
  for (const SpeedSegment& s : profile) {
    if (s.start_s > time) break;
    target = s.target;
  }
  return target;
}

class Signals {
 public:
  explicit Signals(const ScenarioConfig& config)
      : enabled_(config.kind == ScenarioKind::kUrban),
        spacing_(config.light_spacing),
        green_(config.light_green),
        cycle_(config.light_green + config.light_red) {
    if (!enabled_) return;
    const double reach = config.duration * (config.ego_max_speed + 40.0) + 1000.0;
    const auto count = static_cast<std::size_t>(reach / spacing_) + 2;
    Rng rng(DeriveSeed(config.seed, 2));
    offsets_.resize(count);
    for (double& offset : offsets_) {
      offset = config.light_phase_offset ? *config.light_phase_offset
                                         : rng.Uniform(0.0, cycle_);
    }
  }

  bool enabled() const { return enabled_; }

  // Index of the first light strictly ahead of x.
  std::size_t NextIndex(double x) const {
    return static_cast<std::size_t>(std::max(0.0, std::floor(x / spacing_)));
  }
  double Position(std::size_t i) const { return spacing_ * (i + 1); }

  bool IsRed(std::size_t i, double time) const {
    if (cycle_ <= green_) return false;
    const double offset = i < offsets_.size() ? offsets_[i] : 0.0;
    double phase = std::fmod(time - offset, cycle_);
    if (phase < 0.0) phase += cycle_;
    return phase >= green_;
  }

  // Distance to the light a vehicle at x must stop for at `time`, or nullopt
  // when the light ahead is green or too close to stop for.
  std::optional<double> StopDistance(double x, double v, double time,
                                     double hard_decel) const {
    if (!enabled_) return std::nullopt;
    const std::size_t i = NextIndex(x);
    if (!IsRed(i, time)) return std::nullopt;
    const double distance = Position(i) - x;
    const double room = distance - kStopMargin;
    if (room <= 0.0 || v * v / (2.0 * room) > 0.9 * hard_decel) {
      return std::nullopt;
    }
    return distance;
  }

 private:
  bool enabled_;
  double spacing_;
  double green_;
  double cycle_;
  std::vector<double> offsets_;
};

double Quantize(double value) { return std::round(value * 1e6) / 1e6; }

void Advance(Vehicle& vehicle, double accel) {
  const double v_next = std::max(0.0, vehicle.v + accel * kDt);
  vehicle.x += 0.5 * (vehicle.v + v_next) * kDt;
  vehicle.v = v_next;
}

}  // namespace

std::vector<SignalFrame> Generate(const ScenarioConfig& config) {
  config.Validate();
  const std::vector<SpeedSegment> profile = LeadProfile(config);
  const Signals signals(config);
  const LeadLimits lead_limits = LeadLimitsFor(config);

  const double start_speed =
      std::min(config.initial_speed.value_or(profile.front().target),
               config.ego_max_speed);
  Vehicle ego{0.0, start_speed};
  const double gap = config.initial_gap.value_or(IdmEquilibriumGap(
      start_speed, config.ego_max_speed, config.ego_max_accel));
  Vehicle lead{ego.x + kVehicleLength + gap, start_speed};

  std::vector<SignalFrame> frames;
  frames.reserve(static_cast<std::size_t>(config.duration));
  for (int second = 0; second < config.duration; ++second) {
    SignalFrame frame;
    frame.t = second;
    frame.v_ego = Quantize(ego.v);
    frame.dist_front = Quantize(lead.x - kVehicleLength - ego.x);
    frame.v_front = Quantize(lead.v);
    if (signals.enabled()) {
      frame.dist_tls = Quantize(signals.Position(signals.NextIndex(ego.x)) - ego.x);
    }
    frames.push_back(frame);

    for (int sub = 0; sub < kSubsteps; ++sub) {
      const double time = second + sub * kDt;

      const double target = TargetAt(profile, time);
      double lead_accel = std::clamp((target - lead.v) / lead_limits.relaxation_s,
                                     -lead_limits.comfortable_decel,
                                     lead_limits.accel);
      if (auto stop = signals.StopDistance(lead.x, lead.v, time,
                                           lead_limits.hard_decel)) {
        lead_accel = std::min(
            lead_accel, IdmAcceleration(lead.v, *stop, lead.v,
                                        std::numeric_limits<double>::infinity(),
                                        lead_limits.accel,
                                        lead_limits.comfortable_decel));
      }
      lead_accel = std::clamp(lead_accel, -lead_limits.hard_decel,
                              lead_limits.accel);

      const double bumper_gap = lead.x - kVehicleLength - ego.x;
      double ego_accel =
          IdmAcceleration(ego.v, bumper_gap, ego.v - lead.v,
                          config.ego_max_speed, config.ego_max_accel,
                          config.ego_max_decel);
      if (auto stop = signals.StopDistance(ego.x, ego.v, time,
                                           config.ego_max_decel)) {
        ego_accel = std::min(
            ego_accel,
            IdmAcceleration(ego.v, *stop, ego.v, config.ego_max_speed,
                            config.ego_max_accel, config.ego_max_decel));
      }
      ego_accel =
          std::clamp(ego_accel, -config.ego_max_decel, config.ego_max_accel);

      Advance(lead, lead_accel);
      Advance(ego, ego_accel);
    }
  }
  return frames;
}

TraceStats ComputeStats(std::span<const SignalFrame> frames) {
  if (frames.size() < 2) {
    throw InputError("trace statistics need at least two frames");
  }
  TraceStats stats;
  double speed_sum = 0.0;
  double distance_m = 0.0;
  std::size_t accelerating = 0;
  std::size_t decelerating = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double v = frames[i].v_ego;
    speed_sum += v;
    stats.max_speed = std::max(stats.max_speed, v);
    if (i == 0) continue;
    const double prev = frames[i - 1].v_ego;
    const double dv = v - prev;
    distance_m += 0.5 * (v + prev);
    stats.max_pos_accel = std::max(stats.max_pos_accel, dv);
    stats.max_neg_accel = std::min(stats.max_neg_accel, dv);
    if (dv > kAccelDeadBand) ++accelerating;
    if (dv < -kAccelDeadBand) ++decelerating;
  }
  const auto steps = static_cast<double>(frames.size() - 1);
  stats.total_mileage_km = distance_m / 1000.0;
  stats.avg_speed = speed_sum / static_cast<double>(frames.size());
  stats.accel_ratio = static_cast<double>(accelerating) / steps;
  stats.decel_ratio = static_cast<double>(decelerating) / steps;
  return stats;
}

}  // namespace vvp
