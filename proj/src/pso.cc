#include "vvp/pso.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <utility>

#include "vvp/errors.h"
#include "vvp/random.h"

namespace vvp {

void SwarmConfig::Validate() const {
  for (int d = 0; d < kDimensions; ++d) {
    if (!(lower_bound[d] <= upper_bound[d])) {
      throw ParameterError("swarm lower bound exceeds upper bound");
    }
  }
  if (swarm_size < 1) throw ParameterError("swarm_size must be >= 1");
  if (max_iterations < 0) throw ParameterError("max_iterations must be >= 0");
}

namespace {

Position ClampToBounds(Position p, const SwarmConfig& config) {
  for (int d = 0; d < SwarmConfig::kDimensions; ++d) {
    p[d] = std::clamp(p[d], config.lower_bound[d], config.upper_bound[d]);
  }
  return p;
}

}  // namespace

SwarmResult Minimize(const Objective& objective, const SwarmConfig& config,
                     const EvaluationObserver& observer) {
  config.Validate();
  constexpr int kDims = SwarmConfig::kDimensions;
  Position range{};
  for (int d = 0; d < kDims; ++d) {
    range[d] = config.upper_bound[d] - config.lower_bound[d];
  }

  Rng rng(config.seed);
  SwarmResult result;
  result.particles.resize(static_cast<std::size_t>(config.swarm_size));
  for (Particle& p : result.particles) {
    for (int d = 0; d < kDims; ++d) {
      p.position[d] =
          rng.Uniform(config.lower_bound[d], config.upper_bound[d]);
      p.velocity[d] = rng.Uniform(-0.1 * range[d], 0.1 * range[d]);
    }
  }

  auto evaluate = [&](int iteration, std::size_t index) {
    Particle& p = result.particles[index];
    const double score = objective(p.position);
    ++result.evaluations;
    if (observer) observer(iteration, static_cast<int>(index), p.position, score);
    return score;
  };

  result.best_score = std::numeric_limits<double>::infinity();
  result.best_position = result.particles.front().position;
  for (std::size_t i = 0; i < result.particles.size(); ++i) {
    Particle& p = result.particles[i];
    p.best_score = evaluate(0, i);
    p.best_position = p.position;
    // Strict comparison keeps the lowest particle index on ties.
    if (p.best_score < result.best_score) {
      result.best_score = p.best_score;
      result.best_position = p.position;
    }
  }
  result.best_history.push_back(result.best_score);

  for (int it = 1; it <= config.max_iterations; ++it) {
    if (result.best_score <= config.target_score) break;
    for (Particle& p : result.particles) {
      for (int d = 0; d < kDims; ++d) {
        const double r1 = rng.Uniform();
        const double r2 = rng.Uniform();
        double v = config.inertia * p.velocity[d] +
                   config.cognitive * r1 * (p.best_position[d] - p.position[d]) +
                   config.social * r2 * (result.best_position[d] - p.position[d]);
        const double limit = 0.5 * range[d];
        p.velocity[d] = std::clamp(v, -limit, limit);
      }
      for (int d = 0; d < kDims; ++d) p.position[d] += p.velocity[d];
      p.position = ClampToBounds(p.position, config);
    }
    for (std::size_t i = 0; i < result.particles.size(); ++i) {
      Particle& p = result.particles[i];
      const double score = evaluate(it, i);
      if (score < p.best_score) {
        p.best_score = score;
        p.best_position = p.position;
      }
      if (score < result.best_score) {
        result.best_score = score;
        result.best_position = p.position;
      }
    }
    result.iterations = it;
    result.best_history.push_back(result.best_score);
  }
  return result;
}

GrnnParams MapPositionToParams(const Position& position, int horizon) {
  GrnnParams params;
  params.order = static_cast<int>(std::clamp(
      std::lround(position[0]), static_cast<long>(kMinOrder),
      static_cast<long>(kMaxOrder)));
  params.sigma = std::clamp(position[1], kMinSigma, kMaxSigma);
  params.horizon = horizon;
  return params;
}

namespace {

double QuantizeSigma(double sigma) {
  return std::clamp(std::round(sigma * 1000.0) / 1000.0, kMinSigma, kMaxSigma);
}

}  // namespace

OptimizeResult Optimize(const TrainingProvider& training_for_order,
                        const SwarmConfig& config, int k, int horizon) {
  std::map<int, std::unique_ptr<KFoldEvaluator>> evaluators;
  std::map<int, bool> infeasible;
  std::map<std::pair<int, long>, double> cache;

  auto fitness = [&](const Position& position) {
    const GrnnParams params = MapPositionToParams(position, horizon);
    const long sigma_key = std::lround(params.sigma * 1000.0);
    const auto key = std::make_pair(params.order, sigma_key);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    double score = std::numeric_limits<double>::infinity();
    if (!infeasible[params.order]) {
      auto& evaluator = evaluators[params.order];
      if (!evaluator) {
        const TrainingSet& training = training_for_order(params.order);
        if (training.size() < static_cast<std::size_t>(k)) {
          infeasible[params.order] = true;
        } else {
          evaluator = std::make_unique<KFoldEvaluator>(
              training, k,
              DeriveSeed(config.seed, static_cast<std::uint64_t>(params.order)));
        }
      }
      if (evaluator) score = evaluator->Score(QuantizeSigma(params.sigma));
    }
    cache.emplace(key, score);
    return score;
  };

  OptimizeResult result;
  result.swarm = Minimize(fitness, config);
  if (!std::isfinite(result.swarm.best_score)) {
    throw InsufficientDataError(
        "no visited candidate order has at least k training columns");
  }
  result.params = MapPositionToParams(result.swarm.best_position, horizon);
  result.params.sigma = QuantizeSigma(result.params.sigma);
  result.score = result.swarm.best_score;
  return result;
}

OptimizeResult Optimize(std::span<const SignalFrame> frames, FusionMode mode,
                        const SwarmConfig& config, int k, int horizon) {
  std::map<int, TrainingSet> built;
  auto provider = [&](int order) -> const TrainingSet& {
    auto it = built.find(order);
    if (it == built.end()) {
      GrnnParams params{order, kMaxSigma, horizon};
      it = built.emplace(order, BuildTrainingSet(frames, params, mode)).first;
    }
    return it->second;
  };
  return Optimize(provider, config, k, horizon);
}

}  // namespace vvp
