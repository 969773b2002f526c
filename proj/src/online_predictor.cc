#include "vvp/online_predictor.h"

#include <algorithm>
#include <map>
#include <string>

#include "vvp/errors.h"
#include "vvp/random.h"

namespace vvp {
namespace {

// Frames needed to rebuild the newest kTrainingCapacity columns for any order.
std::size_t RetainedFrames(int horizon) {
  return kTrainingCapacity + static_cast<std::size_t>(kMaxOrder + horizon);
}

}  // namespace

GrnnParams InitialParams(const Strategy& strategy) {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, FixedStrategy>) {
          return s.params;
        } else {
          return s.initial;
        }
      },
      strategy);
}

OnlinePredictor::OnlinePredictor(FusionMode mode, Strategy strategy, int k,
                                 std::uint64_t seed)
    : mode_(mode),
      strategy_(std::move(strategy)),
      k_(k),
      seed_(seed),
      params_(InitialParams(strategy_)),
      training_(static_cast<std::size_t>(PatternSize(params_.order, mode)),
                static_cast<std::size_t>(params_.horizon)) {
  params_.Validate();
  if (k_ < 2) throw ParameterError("k must be >= 2");
  if (const auto* adaptive = std::get_if<AdaptiveStrategy>(&strategy_)) {
    adaptive->swarm.Validate();
    if (adaptive->reopt_interval < 1) {
      throw ParameterError("reopt_interval must be >= 1");
    }
  }
}

Forecast OnlinePredictor::Step(const SignalFrame& frame) {
  ValidateFrame(frame);
  if (!frames_.empty() && frame.t != frames_.back().t + 1) {
    throw SequenceError("expected t=" + std::to_string(frames_.back().t + 1) +
                        ", got t=" + std::to_string(frame.t));
  }

  normalizers_.Observe(frame);
  frames_.push_back(frame);
  bounds_.push_back(normalizers_);
  if (frames_.size() > RetainedFrames(params_.horizon)) {
    frames_.pop_front();
    bounds_.pop_front();
  }
  ++frames_seen_;
  AppendNewestColumn();

  if (const auto* adaptive = std::get_if<AdaptiveStrategy>(&strategy_)) {
    ++steps_since_reopt_;
    if (steps_since_reopt_ >= adaptive->reopt_interval &&
        training_.size() >= static_cast<std::size_t>(k_)) {
      Reoptimize();
      steps_since_reopt_ = 0;
    }
  }
  if (params_history_.empty()) params_history_.push_back({frame.t, params_});

  return MakeForecast(frame);
}

void OnlinePredictor::AppendNewestColumn() {
  const auto order = static_cast<std::size_t>(params_.order);
  const auto horizon = static_cast<std::size_t>(params_.horizon);
  const std::size_t span = order + horizon;
  if (frames_.size() < span) return;

  const std::size_t start = frames_.size() - span;
  std::vector<SignalFrame> window(frames_.begin() + start,
                                  frames_.begin() + start + order);
  std::vector<double> pattern = AssemblePattern(window, mode_, normalizers_);
  std::vector<double> target(horizon);
  for (std::size_t j = 0; j < horizon; ++j) {
    target[j] = normalizers_.velocity.Normalize(frames_[start + order + j].v_ego);
  }
  training_.Append(pattern, target);
}

TrainingSet OnlinePredictor::RebuildTraining(int order) const {
  const std::vector<SignalFrame> frames(frames_.begin(), frames_.end());
  const std::vector<NormalizerSet> bounds(bounds_.begin(), bounds_.end());
  GrnnParams params = params_;
  params.order = order;
  return BuildTrainingSet(frames, bounds, params, mode_);
}

void OnlinePredictor::Reoptimize() {
  const auto& adaptive = std::get<AdaptiveStrategy>(strategy_);
  SwarmConfig swarm = adaptive.swarm;
  swarm.seed = DeriveSeed(seed_, static_cast<std::uint64_t>(optimizations_));

  std::map<int, TrainingSet> rebuilt;
  auto provider = [&](int order) -> const TrainingSet& {
    if (order == params_.order) return training_;
    auto it = rebuilt.find(order);
    if (it == rebuilt.end()) it = rebuilt.emplace(order, RebuildTraining(order)).first;
    return it->second;
  };

  ++optimizations_;
  OptimizeResult result;
  try {
    result = Optimize(provider, swarm, k_, params_.horizon);
  } catch (const InsufficientDataError&) {
    // Early on the swarm can visit only orders too long for the data seen so
    // far; keep the current parameters until the next attempt.
    return;
  }
  if (result.params.order != params_.order) {
    training_ = std::move(rebuilt.at(result.params.order));
  }
  params_ = result.params;
  params_history_.push_back({frames_.back().t, params_});
}

Forecast OnlinePredictor::MakeForecast(const SignalFrame& frame) const {
  Forecast forecast;
  forecast.origin_t = frame.t;
  forecast.params_used = params_;
  const auto horizon = static_cast<std::size_t>(params_.horizon);
  if (training_.empty()) {
    forecast.fallback = true;
    forecast.velocities.assign(horizon, frame.v_ego);
    return forecast;
  }
  const auto order = static_cast<std::size_t>(params_.order);
  const std::vector<SignalFrame> recent(frames_.end() - order, frames_.end());
  const std::vector<double> query =
      AssembleQuery(recent, params_, mode_, normalizers_);
  std::vector<double> normalized = Predict(query, training_, params_.sigma);
  forecast.velocities.resize(horizon);
  for (std::size_t j = 0; j < horizon; ++j) {
    forecast.velocities[j] =
        std::max(0.0, normalizers_.velocity.Denormalize(normalized[j]));
  }
  return forecast;
}

TraceEvaluation ScoreForecasts(std::span<const SignalFrame> frames,
                               std::span<const Forecast> forecasts) {
  TraceEvaluation out;
  if (frames.empty()) throw InsufficientDataError("empty trace");
  const std::int64_t first_t = frames.front().t;
  std::vector<StepError> errors;
  for (const Forecast& f : forecasts) {
    const std::int64_t index = f.origin_t - first_t;
    const auto horizon = static_cast<std::int64_t>(f.velocities.size());
    if (index < 0 || index + horizon >= static_cast<std::int64_t>(frames.size())) {
      continue;
    }
    StepRecord record;
    record.forecast = f;
    record.actual.reserve(f.velocities.size());
    for (std::int64_t j = 1; j <= horizon; ++j) {
      record.actual.push_back(frames[static_cast<std::size_t>(index + j)].v_ego);
    }
    record.rmse = Rmse(f.velocities, record.actual);
    errors.push_back({f.origin_t, record.rmse});
    out.steps.push_back(std::move(record));
  }
  if (errors.empty()) throw InsufficientDataError("no forecast can be scored");
  out.armse = Armse(errors);
  return out;
}

TraceEvaluation EvaluateTrace(std::span<const SignalFrame> frames,
                              FusionMode mode, const Strategy& strategy, int k,
                              std::uint64_t seed) {
  const GrnnParams initial = InitialParams(strategy);
  initial.Validate();
  const auto needed =
      static_cast<std::size_t>(initial.order + 2 * initial.horizon);
  if (frames.size() <= needed) {
    throw InsufficientDataError("trace has " + std::to_string(frames.size()) +
                                " frames; need more than " +
                                std::to_string(needed));
  }
  ValidateSequence(frames);

  OnlinePredictor predictor(mode, strategy, k, seed);
  std::vector<Forecast> forecasts;
  forecasts.reserve(frames.size());
  for (const SignalFrame& frame : frames) forecasts.push_back(predictor.Step(frame));

  TraceEvaluation out = ScoreForecasts(frames, forecasts);
  out.params_history = predictor.params_history();
  return out;
}

double ImprovementPercent(double baseline_armse, double candidate_armse) {
  if (baseline_armse == 0.0) return 0.0;
  return (baseline_armse - candidate_armse) / baseline_armse * 100.0;
}

}  // namespace vvp
