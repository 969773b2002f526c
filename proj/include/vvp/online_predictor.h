#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <variant>
#include <vector>

#include "vvp/grnn.h"
#include "vvp/metrics.h"
#include "vvp/pso.h"
#include "vvp/signal_fusion.h"

namespace vvp {

inline constexpr int kDefaultReoptInterval = 10;

struct FixedStrategy {
  GrnnParams params;
};

// Re-runs PSO every reopt_interval seconds. `initial` is used until the
// first optimization succeeds.
struct AdaptiveStrategy {
  SwarmConfig swarm;
  int reopt_interval = kDefaultReoptInterval;
  GrnnParams initial;
};

using Strategy = std::variant<FixedStrategy, AdaptiveStrategy>;

GrnnParams InitialParams(const Strategy& strategy);

struct Forecast {
  std::int64_t origin_t = 0;
  std::vector<double> velocities;  // m/s, t+1 .. t+p
  GrnnParams params_used;
  bool fallback = false;
};

struct ParamsChange {
  std::int64_t t = 0;
  GrnnParams params;
};

// The per-second online loop. Copying a predictor snapshots its full state.
class OnlinePredictor {
 public:
  OnlinePredictor(FusionMode mode, Strategy strategy, int k = kDefaultFolds,
                  std::uint64_t seed = 1);

  // Ingests the next frame and returns the forecast made at its timestamp.
  // Throws SequenceError if frame.t is not the previous t + 1.
  Forecast Step(const SignalFrame& frame);

  FusionMode mode() const { return mode_; }
  const GrnnParams& params() const { return params_; }
  const TrainingSet& training() const { return training_; }
  const NormalizerSet& normalizers() const { return normalizers_; }
  std::int64_t frames_seen() const { return frames_seen_; }
  // PSO runs attempted, including ones that found no feasible order.
  int optimizations() const { return optimizations_; }
  const std::vector<ParamsChange>& params_history() const {
    return params_history_;
  }
  // Retained tail of the trace (enough to rebuild any order at capacity).
  const std::deque<SignalFrame>& frames() const { return frames_; }

 private:
  void AppendNewestColumn();
  void Reoptimize();
  TrainingSet RebuildTraining(int order) const;
  Forecast MakeForecast(const SignalFrame& frame) const;

  FusionMode mode_;
  Strategy strategy_;
  int k_;
  std::uint64_t seed_;
  GrnnParams params_;
  NormalizerSet normalizers_;
  std::deque<SignalFrame> frames_;
  std::deque<NormalizerSet> bounds_;
  TrainingSet training_;
  std::int64_t frames_seen_ = 0;
  int steps_since_reopt_ = 0;
  int optimizations_ = 0;
  std::vector<ParamsChange> params_history_;
};

struct StepRecord {
  Forecast forecast;
  std::vector<double> actual;
  double rmse = 0.0;
};

struct TraceEvaluation {
  std::vector<StepRecord> steps;
  double armse = 0.0;
  std::vector<ParamsChange> params_history;
};

// Scores forecasts against the trace's own future velocities. Forecasts
// without p future seconds in the trace are dropped. Throws
// InsufficientDataError when nothing is scorable.
TraceEvaluation ScoreForecasts(std::span<const SignalFrame> frames,
                               std::span<const Forecast> forecasts);

// Replays a trace through an OnlinePredictor and scores every forecast.
// Requires more than order + 2 * horizon frames (InsufficientDataError).
TraceEvaluation EvaluateTrace(std::span<const SignalFrame> frames,
                              FusionMode mode, const Strategy& strategy,
                              int k = kDefaultFolds, std::uint64_t seed = 1);

// (baseline - candidate) / baseline * 100; positive means better.
double ImprovementPercent(double baseline_armse, double candidate_armse);

}  // namespace vvp
