#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vvp/grnn_params.h"
#include "vvp/signal_fusion.h"

namespace vvp {

inline constexpr std::size_t kTrainingCapacity = 800;

// Kernel sums below this are treated as underflow; prediction then falls back
// to the nearest stored pattern.
inline constexpr double kKernelSumFloor = 1e-300;

// Paired pattern/target columns held in a fixed-capacity FIFO. Index 0 is the
// oldest column. Copies are independent snapshots.
class TrainingSet {
 public:
  TrainingSet(std::size_t pattern_size, std::size_t horizon,
              std::size_t capacity = kTrainingCapacity);

  // Appends a column, evicting the oldest one when full.
  void Append(std::span<const double> pattern, std::span<const double> target);
  void Clear();

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::size_t pattern_size() const { return pattern_size_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t capacity() const { return capacity_; }
  // Total number of columns ever appended, including evicted ones.
  std::uint64_t appended() const { return appended_; }

  std::span<const double> pattern(std::size_t i) const {
    return {patterns_.data() + Slot(i) * pattern_size_, pattern_size_};
  }
  std::span<const double> target(std::size_t i) const {
    return {targets_.data() + Slot(i) * horizon_, horizon_};
  }

  bool operator==(const TrainingSet& other) const;

 private:
  std::size_t Slot(std::size_t i) const { return (head_ + i) % capacity_; }

  std::size_t pattern_size_;
  std::size_t horizon_;
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::uint64_t appended_ = 0;
  std::vector<double> patterns_;
  std::vector<double> targets_;
};

double SquaredDistance(std::span<const double> a, std::span<const double> b);

// exp(-|x - xi|^2 / (2 sigma^2)).
double GaussianKernel(std::span<const double> x, std::span<const double> xi,
                      double sigma);

// Squared distance from `query` to every stored pattern, oldest first.
std::vector<double> SquaredDistances(std::span<const double> query,
                                     const TrainingSet& training);

// Normalized kernel weights for the given squared distances. On kernel-sum
// underflow the weights are one-hot on the nearest pattern (lowest index on
// ties).
std::vector<double> WeightsFromSquaredDistances(
    std::span<const double> squared_distances, double sigma);

std::vector<double> ComputeWeights(std::span<const double> query,
                                   const TrainingSet& training, double sigma);

// Kernel-weighted average of the stored targets.
std::vector<double> Predict(std::span<const double> query,
                            const TrainingSet& training, double sigma);

// Same as Predict, with precomputed squared distances (one per column).
void PredictFromSquaredDistances(std::span<const double> squared_distances,
                                 const TrainingSet& training, double sigma,
                                 std::span<double> out);

// Same again over a subset of columns; squared_distances[i] belongs to
// columns[i].
void PredictFromSquaredDistances(std::span<const double> squared_distances,
                                 std::span<const std::size_t> columns,
                                 const TrainingSet& training, double sigma,
                                 std::span<double> out);

// Builds the training set an online predictor holds after seeing `frames`
// from the start of a trace. Each column is normalized with the running
// bounds in effect when its last target second arrived.
TrainingSet BuildTrainingSet(std::span<const SignalFrame> frames,
                             const GrnnParams& params, FusionMode mode);

// Variant over a window of a longer trace: bounds[i] is the normalizer state
// after frames[i] was observed. Only the newest capacity columns are kept.
TrainingSet BuildTrainingSet(std::span<const SignalFrame> frames,
                             std::span<const NormalizerSet> bounds,
                             const GrnnParams& params, FusionMode mode);

}  // namespace vvp
