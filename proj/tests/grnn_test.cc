#include "vvp/grnn.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "test_support.h"
#include "vvp/errors.h"

namespace vvp {
namespace {

using V = std::vector<double>;

TrainingSet Make(const std::vector<V>& patterns, const std::vector<V>& targets) {
  TrainingSet t(patterns.front().size(), targets.front().size());
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    t.Append(patterns[i], targets[i]);
  }
  return t;
}

TEST(GaussianKernel, ZeroDistanceIsOne) {
  V x = {0.3, 0.9, 0.1};
  EXPECT_DOUBLE_EQ(GaussianKernel(x, x, 0.5), 1.0);
}

TEST(GaussianKernel, DistanceOfTwoSigmaSquared) {
  const double sigma = 0.4;
  V x = {0.0};
  V xi = {std::sqrt(2.0) * sigma};
  EXPECT_NEAR(GaussianKernel(x, xi, sigma), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(GaussianKernel(x, xi, sigma), 0.367879, 1e-6);
}

TEST(GaussianKernel, UnitStep) {
  EXPECT_NEAR(GaussianKernel(V{0, 0}, V{1, 0}, 1.0), 0.606531, 1e-6);
}

TEST(GaussianKernel, Errors) {
  EXPECT_THROW(GaussianKernel(V{0, 0}, V{1}, 1.0), DimensionError);
  EXPECT_THROW(GaussianKernel(V{0}, V{1}, 0.0), ParameterError);
  EXPECT_THROW(GaussianKernel(V{0}, V{1}, -1.0), ParameterError);
}

TEST(ComputeWeights, SinglePattern) {
  auto t = Make({{0.2, 0.7}}, {{0.5}});
  EXPECT_EQ(ComputeWeights(V{0.9, 0.1}, t, 0.3), V{1.0});
}

TEST(ComputeWeights, Equidistant) {
  auto t = Make({{0.0}, {1.0}}, {{0.2}, {0.6}});
  V w = ComputeWeights(V{0.5}, t, 0.3);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 0.5);
  EXPECT_NEAR(Predict(V{0.5}, t, 0.3)[0], 0.4, 1e-15);
}

TEST(ComputeWeights, TwoPatternsHandValues) {
  auto t = Make({{0.0}, {1.0}}, {{0.0}, {1.0}});
  V w = ComputeWeights(V{0.0}, t, 0.5);
  EXPECT_NEAR(w[0], 0.880797, 1e-6);
  EXPECT_NEAR(w[1], 0.119203, 1e-6);
  EXPECT_NEAR(w[0], 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(Predict(V{0.0}, t, 0.5)[0], 0.119203, 1e-6);
}

TEST(ComputeWeights, EmptyModel) {
  TrainingSet t(2, 5);
  EXPECT_THROW(ComputeWeights(V{0, 0}, t, 0.5), EmptyModelError);
  EXPECT_THROW(Predict(V{0, 0}, t, 0.5), EmptyModelError);
}

TEST(ComputeWeights, QueryLengthMismatch) {
  auto t = Make({{0.0, 0.0}}, {{0.0}});
  EXPECT_THROW(ComputeWeights(V{0.0}, t, 0.5), DimensionError);
}

TEST(Predict, SinglePatternReturnsItsTarget) {
  auto t = Make({{0.1}}, {{0.3, 0.4}});
  EXPECT_EQ(Predict(V{0.8}, t, 0.2), (V{0.3, 0.4}));
}

TEST(Predict, UnderflowFallsBackToNearest) {
  auto t = Make({{0.0}, {1.0}, {0.5}}, {{0.1}, {0.7}, {0.4}});
  // 1.0 and 0.5 are equidistant from 0.75: the lower index wins.
  EXPECT_EQ(ComputeWeights(V{0.75}, t, 1e-4), (V{0.0, 1.0, 0.0}));
  EXPECT_EQ(Predict(V{0.75}, t, 1e-4)[0], 0.7);
  EXPECT_EQ(Predict(V{0.1}, t, 1e-4)[0], 0.1);
}

TEST(Predict, SmallSigmaIsNearestNeighbor) {
  auto t = Make({{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}}, {{0.1}, {0.5}, {0.9}});
  EXPECT_NEAR(Predict(V{0.45, 0.55}, t, 1e-3)[0], 0.5, 1e-12);
  EXPECT_NEAR(Predict(V{0.9, 0.95}, t, 1e-3)[0], 0.9, 1e-12);
}

TEST(Predict, LargeSigmaIsMean) {
  Rng rng(3);
  auto t = testing::RandomTraining(rng, 40, 4, 3);
  V mean(3, 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (int j = 0; j < 3; ++j) mean[j] += t.target(i)[j] / 40.0;
  }
  V y = Predict(V{0.2, 0.4, 0.6, 0.8}, t, 1e3);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(y[j], mean[j], 1e-3);
}

// Direct evaluation of the weighted average, written without the library's
// distance helpers.
V OraclePredict(const V& x, const std::vector<V>& xs, const std::vector<V>& ys,
                double sigma) {
  std::vector<double> k(xs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      d += (x[j] - xs[i][j]) * (x[j] - xs[i][j]);
    }
    k[i] = std::exp(-d / (2.0 * sigma * sigma));
    sum += k[i];
  }
  V y(ys.front().size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += k[i] / sum * ys[i][j];
  }
  return y;
}

TEST(Predict, MatchesOracleOnRandomInstances) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.Below(5);
    const std::size_t h = 1 + rng.Below(3);
    const std::size_t p = 1 + rng.Below(5);
    const double sigma = rng.Uniform(0.05, 1.0);
    std::vector<V> xs(m, V(h)), ys(m, V(p));
    TrainingSet t(h, p);
    for (std::size_t i = 0; i < m; ++i) {
      for (double& v : xs[i]) v = rng.Uniform();
      for (double& v : ys[i]) v = rng.Uniform();
      t.Append(xs[i], ys[i]);
    }
    V x(h);
    for (double& v : x) v = rng.Uniform();
    V got = Predict(x, t, sigma);
    V want = OraclePredict(x, xs, ys, sigma);
    for (std::size_t j = 0; j < p; ++j) EXPECT_NEAR(got[j], want[j], 1e-12);
  }
}

TEST(Predict, WeightsSumToOneAndPredictionIsConvex) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = testing::RandomTraining(rng, 1 + rng.Below(30), 3, 2);
    V x = {rng.Uniform(), rng.Uniform(), rng.Uniform()};
    const double sigma = rng.Uniform(0.01, 1.0);
    V w = ComputeWeights(x, t, sigma);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-9);
    for (double wi : w) EXPECT_GE(wi, 0.0);
    V y = Predict(x, t, sigma);
    for (int j = 0; j < 2; ++j) {
      double lo = 1.0, hi = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        lo = std::min(lo, t.target(i)[j]);
        hi = std::max(hi, t.target(i)[j]);
      }
      EXPECT_GE(y[j], lo - 1e-12);
      EXPECT_LE(y[j], hi + 1e-12);
    }
  }
}

TEST(Predict, ColumnSubsetMatchesReducedSet) {
  Rng rng(8);
  auto t = testing::RandomTraining(rng, 12, 2, 3);
  std::vector<std::size_t> cols = {1, 4, 5, 9};
  TrainingSet reduced(2, 3);
  for (std::size_t c : cols) reduced.Append(t.pattern(c), t.target(c));
  V x = {0.3, 0.6};
  V sq;
  for (std::size_t c : cols) sq.push_back(SquaredDistance(x, t.pattern(c)));
  V got(3);
  PredictFromSquaredDistances(sq, cols, t, 0.2, got);
  EXPECT_EQ(got, Predict(x, reduced, 0.2));
}

TEST(TrainingSet, FifoEviction) {
  TrainingSet t(1, 1, 3);
  for (int i = 0; i < 5; ++i) {
    V x = {static_cast<double>(i)};
    t.Append(x, x);
  }
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.appended(), 5u);
  EXPECT_EQ(t.pattern(0)[0], 2.0);
  EXPECT_EQ(t.pattern(2)[0], 4.0);
  EXPECT_THROW(t.Append(V{1, 2}, V{1}), DimensionError);
}

TEST(BuildTrainingSet, CountThresholds) {
  const GrnnParams params{4, 0.5, 5};
  auto frames = testing::WavyTrace(4 + 5 - 1);
  EXPECT_EQ(BuildTrainingSet(frames, params, FusionMode::kHvv).size(), 0u);
  frames = testing::WavyTrace(4 + 5);
  EXPECT_EQ(BuildTrainingSet(frames, params, FusionMode::kHvv).size(), 1u);
}

TEST(BuildTrainingSet, CapKeepsNewestColumns) {
  const GrnnParams params{3, 0.5, 5};
  auto frames = testing::WavyTrace(900 + 3 + 5 - 1);
  auto t = BuildTrainingSet(frames, params, FusionMode::kHvvDis);
  ASSERT_EQ(t.size(), 800u);
  // Oldest surviving column starts at frame 100.
  NormalizerSet bounds;
  for (int i = 0; i < 100 + 3 + 5; ++i) bounds.Observe(frames[i]);
  auto expected =
      AssemblePattern(std::span(frames).subspan(100, 3), FusionMode::kHvvDis,
                      bounds);
  for (std::size_t j = 0; j < expected.size(); ++j) {
    EXPECT_DOUBLE_EQ(t.pattern(0)[j], expected[j]);
  }
}

TEST(BuildTrainingSet, CountLaw) {
  for (int order : {1, 7, 13}) {
    const GrnnParams params{order, 0.5, 5};
    for (int length : {10, 17, 18, 19, 400, 812, 813, 1000}) {
      auto frames = testing::WavyTrace(length);
      const long expected =
          std::clamp<long>(length - 5 - order + 1, 0, 800);
      EXPECT_EQ(static_cast<long>(
                    BuildTrainingSet(frames, params, FusionMode::kHvv).size()),
                expected)
          << "order " << order << " length " << length;
    }
  }
}

TEST(BuildTrainingSet, PatternLayout) {
  auto frames = testing::WavyTrace(30);
  const GrnnParams params{2, 0.5, 5};
  auto t = BuildTrainingSet(frames, params, FusionMode::kHvvDisVfvTls);
  EXPECT_EQ(t.pattern_size(), 5u);
  NormalizerSet bounds;
  for (int i = 0; i < 7; ++i) bounds.Observe(frames[i]);
  auto p = t.pattern(0);
  EXPECT_DOUBLE_EQ(p[0], bounds.velocity.Normalize(frames[0].v_ego));
  EXPECT_DOUBLE_EQ(p[1], bounds.velocity.Normalize(frames[1].v_ego));
  EXPECT_DOUBLE_EQ(p[2], bounds.distance.Normalize(*frames[1].dist_front));
  EXPECT_DOUBLE_EQ(p[3], bounds.front_velocity.Normalize(*frames[1].v_front));
  EXPECT_DOUBLE_EQ(p[4], bounds.tls.Normalize(*frames[1].dist_tls));
  for (int j = 0; j < 5; ++j) {
    EXPECT_DOUBLE_EQ(t.target(0)[j],
                     bounds.velocity.Normalize(frames[2 + j].v_ego));
  }
}

}  // namespace
}  // namespace vvp
