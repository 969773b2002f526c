#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vvp/grnn_params.h"

namespace vvp {

// Sensing-range caps applied when a front vehicle or a traffic light is
// absent (or farther away than the cap).
inline constexpr double kFrontRangeCap = 250.0;
inline constexpr double kTlsRangeCap = 500.0;

// One second of raw telemetry. Absent front vehicle or traffic light is an
// empty optional; the effective accessors apply the range caps.
struct SignalFrame {
  std::int64_t t = 0;
  double v_ego = 0.0;
  std::optional<double> dist_front;
  std::optional<double> v_front;
  std::optional<double> dist_tls;

  double FrontDistance() const;
  // Falls back to v_ego (free flow) when no front vehicle is reported.
  double FrontVelocity() const;
  double TlsDistance() const;

  friend bool operator==(const SignalFrame&, const SignalFrame&) = default;
};

// Throws InputError if any present magnitude is negative or non-finite.
void ValidateFrame(const SignalFrame& frame);

// Throws SequenceError unless timestamps increase by exactly one second.
void ValidateSequence(std::span<const SignalFrame> frames);

enum class FusionMode { kHvv, kHvvDis, kHvvDisVfv, kHvvDisVfvTls };

inline constexpr std::array<FusionMode, 4> kAllFusionModes = {
    FusionMode::kHvv, FusionMode::kHvvDis, FusionMode::kHvvDisVfv,
    FusionMode::kHvvDisVfvTls};

// Number of fused signals appended after the velocity window (0..3).
int ExtraSignalCount(FusionMode mode);

inline int PatternSize(int order, FusionMode mode) {
  return order + ExtraSignalCount(mode);
}

// CLI spelling: hvv, hvv-dis, hvv-dis-vfv, hvv-dis-vfv-tls.
std::string_view ToString(FusionMode mode);
// Display label matching the usual HVV+DIS+... notation.
std::string_view Label(FusionMode mode);
FusionMode ParseFusionMode(std::string_view text);

// Streaming min/max scaler onto [0, 1].
class Normalizer {
 public:
  void Observe(double value);

  // Clamped to [0, 1]; a degenerate range (max == min) maps to 0.5.
  double Normalize(double value) const;
  // Inverse affine map with the current bounds. Not clamped.
  double Denormalize(double normalized) const;

  bool observed() const { return count_ > 0; }
  double min() const { return min_; }
  double max() const { return max_; }
  std::int64_t count() const { return count_; }

  friend bool operator==(const Normalizer&, const Normalizer&) = default;

 private:
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
  std::int64_t count_ = 0;
};

// Bounds for the four signals. Every signal is observed on every frame
// regardless of fusion mode.
struct NormalizerSet {
  Normalizer velocity;
  Normalizer distance;
  Normalizer front_velocity;
  Normalizer tls;

  void Observe(const SignalFrame& frame);

  friend bool operator==(const NormalizerSet&, const NormalizerSet&) = default;
};

// Appends a pattern for `window` to `out`: one normalized ego velocity per
// frame, followed by the mode's fused signals taken from the window's last
// frame, all scaled with `bounds`.
void AppendPattern(std::span<const SignalFrame> window, FusionMode mode,
                   const NormalizerSet& bounds, std::vector<double>& out);

std::vector<double> AssemblePattern(std::span<const SignalFrame> window,
                                    FusionMode mode,
                                    const NormalizerSet& bounds);

// Input vector for the newest `params.order` frames of `history`. Throws
// ColdStartError if the history is shorter than the order and StateError if a
// required normalizer has not been observed.
std::vector<double> AssembleQuery(std::span<const SignalFrame> history,
                                  const GrnnParams& params, FusionMode mode,
                                  const NormalizerSet& normalizers);

}  // namespace vvp
