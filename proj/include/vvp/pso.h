#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vvp/grnn.h"
#include "vvp/metrics.h"

namespace vvp {

// Search coordinates: (order, sigma).
using Position = std::array<double, 2>;

inline constexpr double kMinSigma = 0.01;

struct SwarmConfig {
  static constexpr int kDimensions = 2;

  Position lower_bound = {static_cast<double>(kMinOrder), kMinSigma};
  Position upper_bound = {static_cast<double>(kMaxOrder), kMaxSigma};
  int swarm_size = 10;
  int max_iterations = 20;
  double target_score = 0.0;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct Particle {
  Position position{};
  Position velocity{};
  Position best_position{};
  double best_score = 0.0;
};

struct SwarmResult {
  Position best_position{};
  double best_score = 0.0;
  // Global best after initialization (entry 0) and after each iteration.
  std::vector<double> best_history;
  int iterations = 0;
  int evaluations = 0;
  std::vector<Particle> particles;
};

using Objective = std::function<double(const Position&)>;
// Called for every fitness evaluation: (iteration, particle, position, score).
using EvaluationObserver =
    std::function<void(int, int, const Position&, double)>;

// Inertia-weight PSO minimizing `objective` within the config bounds.
// Positions are clamped to the bounds and velocities to half the range.
// Stops once the global best reaches target_score or after max_iterations.
SwarmResult Minimize(const Objective& objective, const SwarmConfig& config,
                     const EvaluationObserver& observer = {});

// Rounds the order coordinate and clamps both into the GRNN ranges.
GrnnParams MapPositionToParams(const Position& position,
                               int horizon = kDefaultHorizon);

// Supplies the training set for a candidate order. The reference must stay
// valid for the rest of the Optimize call.
using TrainingProvider = std::function<const TrainingSet&(int order)>;

struct OptimizeResult {
  GrnnParams params;
  double score = 0.0;
  SwarmResult swarm;
};

// PSO over (order, sigma) with the k-fold score as fitness. Sigma is
// quantized to 1e-3 and fitness is memoized per (order, sigma) within the
// call. Orders whose training set holds fewer than k columns are infeasible.
// Throws InsufficientDataError when no visited order is feasible.
OptimizeResult Optimize(const TrainingProvider& training_for_order,
                        const SwarmConfig& config, int k,
                        int horizon = kDefaultHorizon);

// Convenience overload building training sets from a trace.
OptimizeResult Optimize(std::span<const SignalFrame> frames, FusionMode mode,
                        const SwarmConfig& config, int k,
                        int horizon = kDefaultHorizon);

}  // namespace vvp
