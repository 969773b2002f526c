#include "vvp/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vvp/errors.h"
#include "vvp/random.h"

namespace vvp {

double Rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) {
    throw DimensionError("rmse: length mismatch " +
                         std::to_string(predicted.size()) + " vs " +
                         std::to_string(actual.size()));
  }
  if (predicted.empty()) throw DimensionError("rmse: empty sequences");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - actual[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(predicted.size()));
}

double Armse(std::span<const StepError> step_errors) {
  if (step_errors.empty()) throw InputError("armse: no step errors");
  double sum = 0.0;
  for (const StepError& e : step_errors) sum += e.rmse;
  return sum / static_cast<double>(step_errors.size());
}

std::vector<std::vector<std::size_t>> KFoldPartition(std::size_t count, int k,
                                                     std::uint64_t seed) {
  if (k < 2) throw ParameterError("k-fold needs k >= 2");
  if (count < static_cast<std::size_t>(k)) {
    throw InsufficientDataError("k-fold needs at least k=" + std::to_string(k) +
                                " columns, have " + std::to_string(count));
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = count; i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }

  const auto folds = static_cast<std::size_t>(k);
  std::vector<std::vector<std::size_t>> out(folds);
  const std::size_t base = count / folds;
  const std::size_t extra = count % folds;
  std::size_t next = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    out[f].assign(order.begin() + next, order.begin() + next + size);
    std::sort(out[f].begin(), out[f].end());
    next += size;
  }
  return out;
}

KFoldEvaluator::KFoldEvaluator(const TrainingSet& training, int k,
                               std::uint64_t seed)
    : training_(&training),
      count_(training.size()),
      folds_(KFoldPartition(training.size(), k, seed)),
      distances_(count_ * count_, 0.0) {
  for (std::size_t i = 0; i < count_; ++i) {
    for (std::size_t j = i + 1; j < count_; ++j) {
      const double d = SquaredDistance(training.pattern(i), training.pattern(j));
      distances_[i * count_ + j] = d;
      distances_[j * count_ + i] = d;
    }
  }
}

std::vector<FoldScore> KFoldEvaluator::FoldScores(double sigma) const {
  std::vector<FoldScore> scores;
  scores.reserve(folds_.size());
  std::vector<char> held_out(count_);
  std::vector<std::size_t> train;
  std::vector<double> sq;
  std::vector<double> predicted(training_->horizon());
  for (std::size_t f = 0; f < folds_.size(); ++f) {
    std::ranges::fill(held_out, 0);
    for (std::size_t i : folds_[f]) held_out[i] = 1;
    train.clear();
    for (std::size_t i = 0; i < count_; ++i) {
      if (!held_out[i]) train.push_back(i);
    }
    sq.resize(train.size());
    double fold_sum = 0.0;
    for (std::size_t q : folds_[f]) {
      const double* row = distances_.data() + q * count_;
      for (std::size_t n = 0; n < train.size(); ++n) sq[n] = row[train[n]];
      PredictFromSquaredDistances(sq, train, *training_, sigma, predicted);
      fold_sum += Rmse(predicted, training_->target(q));
    }
    scores.push_back(
        {static_cast<int>(f) + 1,
         fold_sum / static_cast<double>(folds_[f].size())});
  }
  return scores;
}

double KFoldEvaluator::Score(double sigma) const {
  const std::vector<FoldScore> scores = FoldScores(sigma);
  double sum = 0.0;
  for (const FoldScore& s : scores) sum += s.rmse;
  return sum / static_cast<double>(scores.size());
}

double KFoldScore(const TrainingSet& training, const GrnnParams& params, int k,
                  std::uint64_t seed) {
  params.Validate();
  return KFoldEvaluator(training, k, seed).Score(params.sigma);
}

}  // namespace vvp
