#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vvp/grnn.h"

namespace vvp {

inline constexpr int kDefaultFolds = 5;

struct StepError {
  std::int64_t step = 0;
  double rmse = 0.0;
};

struct FoldScore {
  int fold_index = 0;  // 1-based
  double rmse = 0.0;
};

// Root mean squared elementwise difference.
double Rmse(std::span<const double> predicted, std::span<const double> actual);

// Mean of the per-step RMSE values.
double Armse(std::span<const StepError> step_errors);

// Seeded split of [0, count) into k disjoint folds whose sizes differ by at
// most one. Each fold is sorted ascending.
std::vector<std::vector<std::size_t>> KFoldPartition(std::size_t count, int k,
                                                     std::uint64_t seed);

// k-fold cross-validation of a GRNN over one training set. The pairwise
// distance matrix and the split are computed once, so scoring many sigmas
// against the same training set only pays for the kernels.
class KFoldEvaluator {
 public:
  // Throws InsufficientDataError if training.size() < k, ParameterError if
  // k < 2. `training` must outlive the evaluator.
  KFoldEvaluator(const TrainingSet& training, int k, std::uint64_t seed);

  // Mean over folds of the mean held-out RMSE (in the training set's
  // normalized units).
  double Score(double sigma) const;
  std::vector<FoldScore> FoldScores(double sigma) const;

  const std::vector<std::vector<std::size_t>>& folds() const { return folds_; }

 private:
  const TrainingSet* training_;
  std::size_t count_;
  std::vector<std::vector<std::size_t>> folds_;
  std::vector<double> distances_;  // count_ x count_, row-major
};

// E: the k-fold score of `params.sigma` on a training set built with
// `params.order`.
double KFoldScore(const TrainingSet& training, const GrnnParams& params, int k,
                  std::uint64_t seed);

}  // namespace vvp
