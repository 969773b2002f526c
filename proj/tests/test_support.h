#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "vvp/grnn.h"
#include "vvp/random.h"
#include "vvp/signal_fusion.h"

namespace vvp::testing {

// Smooth, bounded velocity trace with every signal present.
inline std::vector<SignalFrame> WavyTrace(int length, std::uint64_t seed = 7) {
  Rng rng(seed);
  std::vector<SignalFrame> frames;
  double phase = rng.Uniform(0.0, 6.0);
  for (int t = 0; t < length; ++t) {
    SignalFrame f;
    f.t = t;
    f.v_ego = 8.0 + 5.0 * std::sin(0.07 * t + phase) + rng.Uniform(-0.3, 0.3);
    f.dist_front = 15.0 + 6.0 * std::cos(0.05 * t) + rng.Uniform(0.0, 1.0);
    f.v_front = f.v_ego + std::sin(0.11 * t);
    f.dist_tls = 400.0 - std::fmod(8.0 * t, 400.0);
    frames.push_back(f);
  }
  return frames;
}

inline std::vector<SignalFrame> ConstantTrace(int length, double v) {
  std::vector<SignalFrame> frames;
  for (int t = 0; t < length; ++t) {
    frames.push_back({t, v, 20.0, v, 100.0});
  }
  return frames;
}

inline TrainingSet RandomTraining(Rng& rng, std::size_t m, std::size_t h,
                                  std::size_t p) {
  TrainingSet training(h, p);
  std::vector<double> x(h), y(p);
  for (std::size_t i = 0; i < m; ++i) {
    for (double& v : x) v = rng.Uniform();
    for (double& v : y) v = rng.Uniform();
    training.Append(x, y);
  }
  return training;
}

}  // namespace vvp::testing
