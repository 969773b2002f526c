#include "vvp/signal_fusion.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "test_support.h"
#include "vvp/errors.h"

namespace vvp {
namespace {

Normalizer Bounds(std::initializer_list<double> values) {
  Normalizer n;
  for (double v : values) n.Observe(v);
  return n;
}

TEST(Normalizer, FirstObservation) {
  Normalizer n = Bounds({5.0});
  EXPECT_EQ(n.min(), 5.0);
  EXPECT_EQ(n.max(), 5.0);
  EXPECT_EQ(n.count(), 1);
}

TEST(Normalizer, BoundsUpdate) {
  Normalizer n = Bounds({2.0, 8.0});
  n.Observe(10.0);
  EXPECT_EQ(n.min(), 2.0);
  EXPECT_EQ(n.max(), 10.0);
  Normalizer m = Bounds({2.0, 8.0});
  m.Observe(5.0);
  EXPECT_EQ(m.min(), 2.0);
  EXPECT_EQ(m.max(), 8.0);
}

TEST(Normalizer, RejectsNonFinite) {
  Normalizer n;
  EXPECT_THROW(n.Observe(std::numeric_limits<double>::quiet_NaN()), InputError);
  EXPECT_THROW(n.Observe(std::numeric_limits<double>::infinity()), InputError);
}

TEST(Normalizer, Normalize) {
  Normalizer n = Bounds({10, 20, 30});
  EXPECT_DOUBLE_EQ(n.Normalize(20), 0.5);
  EXPECT_DOUBLE_EQ(n.Normalize(30), 1.0);
  EXPECT_DOUBLE_EQ(n.Normalize(10), 0.0);
  // Out-of-range values clamp.
  EXPECT_EQ(n.Normalize(45), 1.0);
  EXPECT_EQ(n.Normalize(-3), 0.0);
}

TEST(Normalizer, DegenerateRange) {
  Normalizer n = Bounds({7, 7});
  EXPECT_EQ(n.Normalize(7), 0.5);
  EXPECT_EQ(n.Normalize(9), 0.5);
}

TEST(Normalizer, UnobservedIsStateError) {
  Normalizer n;
  EXPECT_THROW(n.Normalize(1.0), StateError);
  EXPECT_THROW(n.Denormalize(0.5), StateError);
}

TEST(Normalizer, MonotoneAndRoundTrip) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    Normalizer n;
    for (int i = 0; i < 5; ++i) n.Observe(rng.Uniform(-50.0, 50.0));
    double prev = -1.0;
    for (double v = -60.0; v <= 60.0; v += 0.5) {
      const double y = n.Normalize(v);
      EXPECT_GE(y, prev);
      EXPECT_GE(y, 0.0);
      EXPECT_LE(y, 1.0);
      prev = y;
      if (v >= n.min() && v <= n.max()) {
        EXPECT_NEAR(n.Denormalize(y), v, 1e-9);
      }
    }
  }
}

TEST(SignalFrame, MissingSignalsUseCaps) {
  SignalFrame f{0, 12.0, std::nullopt, std::nullopt, std::nullopt};
  EXPECT_EQ(f.FrontDistance(), kFrontRangeCap);
  EXPECT_EQ(f.FrontVelocity(), 12.0);
  EXPECT_EQ(f.TlsDistance(), kTlsRangeCap);
  SignalFrame far{0, 12.0, 900.0, 3.0, 800.0};
  EXPECT_EQ(far.FrontDistance(), kFrontRangeCap);
  EXPECT_EQ(far.FrontVelocity(), 3.0);
  EXPECT_EQ(far.TlsDistance(), kTlsRangeCap);
}

TEST(SignalFrame, Validation) {
  EXPECT_NO_THROW(ValidateFrame({0, 0.0, 0.0, 0.0, 0.0}));
  EXPECT_THROW(ValidateFrame({0, -1.0, 1.0, 1.0, 1.0}), InputError);
  EXPECT_THROW(ValidateFrame({0, 1.0, -0.5, 1.0, 1.0}), InputError);
  EXPECT_THROW(
      ValidateFrame({0, 1.0, 1.0, std::numeric_limits<double>::quiet_NaN(), 1}),
      InputError);
  std::vector<SignalFrame> gap = {{0, 1.0}, {1, 1.0}, {3, 1.0}};
  EXPECT_THROW(ValidateSequence(gap), SequenceError);
}

TEST(FusionMode, NamesRoundTrip) {
  for (FusionMode m : kAllFusionModes) {
    EXPECT_EQ(ParseFusionMode(ToString(m)), m);
  }
  EXPECT_EQ(ToString(FusionMode::kHvvDisVfvTls), "hvv-dis-vfv-tls");
  EXPECT_EQ(Label(FusionMode::kHvvDis), "HVV+DIS");
  EXPECT_THROW(ParseFusionMode("tls"), InputError);
}

NormalizerSet UnitBounds() {
  // Velocity, distance, front velocity and light distance all on [0, 1].
  NormalizerSet b;
  b.Observe({0, 0.0, 0.0, 0.0, 0.0});
  b.Observe({1, 1.0, 1.0, 1.0, 1.0});
  return b;
}

TEST(AssembleQuery, HvvLayout) {
  std::vector<SignalFrame> h = {{0, 0.9}, {1, 0.1}, {2, 0.2}, {3, 0.3}};
  auto q = AssembleQuery(h, {3, 0.5, 5}, FusionMode::kHvv, UnitBounds());
  EXPECT_EQ(q, (std::vector<double>{0.1, 0.2, 0.3}));
}

TEST(AssembleQuery, DistanceAppendedAfterVelocities) {
  std::vector<SignalFrame> h = {{0, 0.4, 0.1, 0.0, 0.0}, {1, 0.5, 0.7, 0.2, 0.9}};
  auto q = AssembleQuery(h, {2, 0.5, 5}, FusionMode::kHvvDis, UnitBounds());
  EXPECT_EQ(q, (std::vector<double>{0.4, 0.5, 0.7}));
  auto full =
      AssembleQuery(h, {2, 0.5, 5}, FusionMode::kHvvDisVfvTls, UnitBounds());
  EXPECT_EQ(full, (std::vector<double>{0.4, 0.5, 0.7, 0.2, 0.9}));
}

TEST(AssembleQuery, LengthForEveryModeAndOrder) {
  auto frames = testing::WavyTrace(20);
  NormalizerSet b;
  for (const auto& f : frames) b.Observe(f);
  for (FusionMode m : kAllFusionModes) {
    for (int order = kMinOrder; order <= kMaxOrder; ++order) {
      auto q = AssembleQuery(frames, {order, 0.5, 5}, m, b);
      EXPECT_EQ(static_cast<int>(q.size()), order + ExtraSignalCount(m));
      EXPECT_EQ(static_cast<int>(q.size()), PatternSize(order, m));
      for (double v : q) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
  auto one = AssembleQuery(frames, {1, 0.5, 5}, FusionMode::kHvvDisVfvTls, b);
  EXPECT_EQ(one.size(), 4u);
}

TEST(AssembleQuery, ColdStart) {
  std::vector<SignalFrame> h = {{0, 1.0}, {1, 2.0}};
  NormalizerSet b;
  for (const auto& f : h) b.Observe(f);
  EXPECT_THROW(AssembleQuery(h, {3, 0.5, 5}, FusionMode::kHvv, b),
               ColdStartError);
  EXPECT_THROW(AssembleQuery(h, {2, 0.5, 5}, FusionMode::kHvv, NormalizerSet{}),
               StateError);
}

}  // namespace
}  // namespace vvp
