#include "vvp/grnn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vvp/errors.h"

namespace vvp {

void GrnnParams::Validate() const {
  if (order < kMinOrder || order > kMaxOrder) {
    throw ParameterError("order must be in [1, 13], got " +
                         std::to_string(order));
  }
  if (!(sigma > 0.0) || sigma > kMaxSigma) {
    throw ParameterError("sigma must be in (0, 1], got " +
                         std::to_string(sigma));
  }
  if (horizon < 1) {
    throw ParameterError("horizon must be positive, got " +
                         std::to_string(horizon));
  }
}

std::string GrnnParams::ToString() const {
  std::ostringstream out;
  out << "order=" << order << ",sigma=" << sigma << ",horizon=" << horizon;
  return out.str();
}

TrainingSet::TrainingSet(std::size_t pattern_size, std::size_t horizon,
                         std::size_t capacity)
    : pattern_size_(pattern_size),
      horizon_(horizon),
      capacity_(capacity),
      patterns_(pattern_size * capacity),
      targets_(horizon * capacity) {
  if (pattern_size == 0 || horizon == 0 || capacity == 0) {
    throw ParameterError("training set dimensions must be positive");
  }
}

void TrainingSet::Append(std::span<const double> pattern,
                         std::span<const double> target) {
  if (pattern.size() != pattern_size_ || target.size() != horizon_) {
    throw DimensionError("training column has wrong dimensions");
  }
  std::size_t slot;
  if (size_ < capacity_) {
    slot = Slot(size_);
    ++size_;
  } else {
    slot = head_;
    head_ = (head_ + 1) % capacity_;
  }
  std::copy(pattern.begin(), pattern.end(),
            patterns_.begin() + slot * pattern_size_);
  std::copy(target.begin(), target.end(), targets_.begin() + slot * horizon_);
  ++appended_;
}

void TrainingSet::Clear() {
  head_ = 0;
  size_ = 0;
}

bool TrainingSet::operator==(const TrainingSet& other) const {
  if (pattern_size_ != other.pattern_size_ || horizon_ != other.horizon_ ||
      size_ != other.size_) {
    return false;
  }
  for (std::size_t i = 0; i < size_; ++i) {
    if (!std::ranges::equal(pattern(i), other.pattern(i)) ||
        !std::ranges::equal(target(i), other.target(i))) {
      return false;
    }
  }
  return true;
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("pattern length mismatch: " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

namespace {

void CheckSigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("sigma must be positive and finite");
  }
}

// exp(-x) is exactly zero in double precision for x beyond this.
constexpr double kExpUnderflowArg = 746.0;

// Fills `kernels` and returns their sum.
double Kernels(std::span<const double> squared_distances, double sigma,
               std::vector<double>& kernels) {
  const double scale = 1.0 / (2.0 * sigma * sigma);
  kernels.resize(squared_distances.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < squared_distances.size(); ++i) {
    const double arg = squared_distances[i] * scale;
    kernels[i] = arg < kExpUnderflowArg ? std::exp(-arg) : 0.0;
    sum += kernels[i];
  }
  return sum;
}

std::size_t Nearest(std::span<const double> squared_distances) {
  return static_cast<std::size_t>(
      std::ranges::min_element(squared_distances) - squared_distances.begin());
}

// Turns raw kernels into weights in place.
void NormalizeWeights(std::span<const double> squared_distances, double sum,
                      std::vector<double>& weights) {
  if (sum < kKernelSumFloor) {
    const std::size_t nearest = Nearest(squared_distances);
    std::ranges::fill(weights, 0.0);
    weights[nearest] = 1.0;
    return;
  }
  for (double& w : weights) w /= sum;
}

void RequireTrained(const TrainingSet& training) {
  if (training.empty()) throw EmptyModelError("training set is empty");
}

}  // namespace

double GaussianKernel(std::span<const double> x, std::span<const double> xi,
                      double sigma) {
  CheckSigma(sigma);
  return std::exp(-SquaredDistance(x, xi) / (2.0 * sigma * sigma));
}

std::vector<double> SquaredDistances(std::span<const double> query,
                                     const TrainingSet& training) {
  if (query.size() != training.pattern_size()) {
    throw DimensionError("query length " + std::to_string(query.size()) +
                         " does not match pattern length " +
                         std::to_string(training.pattern_size()));
  }
  std::vector<double> out(training.size());
  for (std::size_t i = 0; i < training.size(); ++i) {
    out[i] = SquaredDistance(query, training.pattern(i));
  }
  return out;
}

std::vector<double> WeightsFromSquaredDistances(
    std::span<const double> squared_distances, double sigma) {
  CheckSigma(sigma);
  if (squared_distances.empty()) throw EmptyModelError("no patterns to weigh");
  std::vector<double> weights;
  const double sum = Kernels(squared_distances, sigma, weights);
  NormalizeWeights(squared_distances, sum, weights);
  return weights;
}

std::vector<double> ComputeWeights(std::span<const double> query,
                                   const TrainingSet& training, double sigma) {
  RequireTrained(training);
  return WeightsFromSquaredDistances(SquaredDistances(query, training), sigma);
}

std::vector<double> Predict(std::span<const double> query,
                            const TrainingSet& training, double sigma) {
  RequireTrained(training);
  std::vector<double> out(training.horizon());
  PredictFromSquaredDistances(SquaredDistances(query, training), training,
                              sigma, out);
  return out;
}

void PredictFromSquaredDistances(std::span<const double> squared_distances,
                                 const TrainingSet& training, double sigma,
                                 std::span<double> out) {
  RequireTrained(training);
  if (squared_distances.size() != training.size() ||
      out.size() != training.horizon()) {
    throw DimensionError("distance or output size mismatch");
  }
  const std::vector<double> weights =
      WeightsFromSquaredDistances(squared_distances, sigma);
  std::ranges::fill(out, 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const auto target = training.target(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights[i] * target[j];
  }
}

void PredictFromSquaredDistances(std::span<const double> squared_distances,
                                 std::span<const std::size_t> columns,
                                 const TrainingSet& training, double sigma,
                                 std::span<double> out) {
  if (columns.empty()) throw EmptyModelError("no training columns selected");
  if (squared_distances.size() != columns.size() ||
      out.size() != training.horizon()) {
    throw DimensionError("distance or output size mismatch");
  }
  const std::vector<double> weights =
      WeightsFromSquaredDistances(squared_distances, sigma);
  std::ranges::fill(out, 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const auto target = training.target(columns[i]);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights[i] * target[j];
  }
}

TrainingSet BuildTrainingSet(std::span<const SignalFrame> frames,
                             std::span<const NormalizerSet> bounds,
                             const GrnnParams& params, FusionMode mode) {
  params.Validate();
  if (bounds.size() != frames.size()) {
    throw DimensionError("need one normalizer snapshot per frame");
  }
  const auto order = static_cast<std::size_t>(params.order);
  const auto horizon = static_cast<std::size_t>(params.horizon);
  TrainingSet training(PatternSize(params.order, mode), horizon);

  const std::size_t span = order + horizon;
  if (frames.size() < span) return training;
  // Column c uses frames [c, c + order) as pattern and the following
  // `horizon` frames as targets; it completes at frame c + span - 1.
  const std::size_t columns = frames.size() - span + 1;
  const std::size_t first = columns > training.capacity()
                                ? columns - training.capacity()
                                : 0;
  std::vector<double> pattern;
  std::vector<double> target(horizon);
  for (std::size_t c = first; c < columns; ++c) {
    const NormalizerSet& at = bounds[c + span - 1];
    pattern.clear();
    AppendPattern(frames.subspan(c, order), mode, at, pattern);
    for (std::size_t j = 0; j < horizon; ++j) {
      target[j] = at.velocity.Normalize(frames[c + order + j].v_ego);
    }
    training.Append(pattern, target);
  }
  return training;
}

TrainingSet BuildTrainingSet(std::span<const SignalFrame> frames,
                             const GrnnParams& params, FusionMode mode) {
  std::vector<NormalizerSet> bounds;
  bounds.reserve(frames.size());
  NormalizerSet running;
  for (const SignalFrame& frame : frames) {
    running.Observe(frame);
    bounds.push_back(running);
  }
  return BuildTrainingSet(frames, bounds, params, mode);
}

}  // namespace vvp
