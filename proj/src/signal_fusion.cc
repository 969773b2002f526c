#include "vvp/signal_fusion.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "vvp/errors.h"

namespace vvp {

double SignalFrame::FrontDistance() const {
  return std::min(dist_front.value_or(kFrontRangeCap), kFrontRangeCap);
}

double SignalFrame::FrontVelocity() const {
  return dist_front.has_value() ? v_front.value_or(v_ego) : v_ego;
}

double SignalFrame::TlsDistance() const {
  return std::min(dist_tls.value_or(kTlsRangeCap), kTlsRangeCap);
}

namespace {

void CheckMagnitude(const char* name, double value, std::int64_t t) {
  if (!std::isfinite(value) || value < 0.0) {
    std::ostringstream msg;
    msg << "frame t=" << t << ": " << name
        << " must be finite and non-negative, got " << value;
    throw InputError(msg.str());
  }
}

}  // namespace

void ValidateFrame(const SignalFrame& frame) {
  CheckMagnitude("v_ego", frame.v_ego, frame.t);
  if (frame.dist_front) CheckMagnitude("dist_front", *frame.dist_front, frame.t);
  if (frame.v_front) CheckMagnitude("v_front", *frame.v_front, frame.t);
  if (frame.dist_tls) CheckMagnitude("dist_tls", *frame.dist_tls, frame.t);
}

void ValidateSequence(std::span<const SignalFrame> frames) {
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].t != frames[i - 1].t + 1) {
      std::ostringstream msg;
      msg << "non-contiguous timestamps: " << frames[i - 1].t << " then "
          << frames[i].t;
      throw SequenceError(msg.str());
    }
  }
}

int ExtraSignalCount(FusionMode mode) {
  switch (mode) {
    case FusionMode::kHvv:
      return 0;
    case FusionMode::kHvvDis:
      return 1;
    case FusionMode::kHvvDisVfv:
      return 2;
    case FusionMode::kHvvDisVfvTls:
      return 3;
  }
  return 0;
}

std::string_view ToString(FusionMode mode) {
  switch (mode) {
    case FusionMode::kHvv:
      return "hvv";
    case FusionMode::kHvvDis:
      return "hvv-dis";
    case FusionMode::kHvvDisVfv:
      return "hvv-dis-vfv";
    case FusionMode::kHvvDisVfvTls:
      return "hvv-dis-vfv-tls";
  }
  return "?";
}

std::string_view Label(FusionMode mode) {
  switch (mode) {
    case FusionMode::kHvv:
      return "HVV";
    case FusionMode::kHvvDis:
      return "HVV+DIS";
    case FusionMode::kHvvDisVfv:
      return "HVV+DIS+VFV";
    case FusionMode::kHvvDisVfvTls:
      return "HVV+DIS+VFV+TLS";
  }
  return "?";
}

FusionMode ParseFusionMode(std::string_view text) {
  for (FusionMode mode : kAllFusionModes) {
    if (text == ToString(mode)) return mode;
  }
  throw InputError("unknown fusion mode '" + std::string(text) +
                   "' (expected hvv, hvv-dis, hvv-dis-vfv or hvv-dis-vfv-tls)");
}

void Normalizer::Observe(double value) {
  if (!std::isfinite(value)) {
    throw InputError("normalizer cannot observe a non-finite value");
  }
  min_ = std::min(min_, value);
  max_ = std::max(max_, value);
  ++count_;
}

double Normalizer::Normalize(double value) const {
  if (!observed()) throw StateError("normalizer has not observed any value");
  const double range = max_ - min_;
  if (range <= 0.0) return 0.5;
  return std::clamp((value - min_) / range, 0.0, 1.0);
}

double Normalizer::Denormalize(double normalized) const {
  if (!observed()) throw StateError("normalizer has not observed any value");
  return min_ + normalized * (max_ - min_);
}

void NormalizerSet::Observe(const SignalFrame& frame) {
  velocity.Observe(frame.v_ego);
  distance.Observe(frame.FrontDistance());
  front_velocity.Observe(frame.FrontVelocity());
  tls.Observe(frame.TlsDistance());
}

void AppendPattern(std::span<const SignalFrame> window, FusionMode mode,
                   const NormalizerSet& bounds, std::vector<double>& out) {
  for (const SignalFrame& frame : window) {
    out.push_back(bounds.velocity.Normalize(frame.v_ego));
  }
  const SignalFrame& last = window.back();
  const int extra = ExtraSignalCount(mode);
  if (extra >= 1) out.push_back(bounds.distance.Normalize(last.FrontDistance()));
  if (extra >= 2) {
    out.push_back(bounds.front_velocity.Normalize(last.FrontVelocity()));
  }
  if (extra >= 3) out.push_back(bounds.tls.Normalize(last.TlsDistance()));
}

std::vector<double> AssemblePattern(std::span<const SignalFrame> window,
                                    FusionMode mode,
                                    const NormalizerSet& bounds) {
  std::vector<double> out;
  out.reserve(window.size() + ExtraSignalCount(mode));
  AppendPattern(window, mode, bounds, out);
  return out;
}

std::vector<double> AssembleQuery(std::span<const SignalFrame> history,
                                  const GrnnParams& params, FusionMode mode,
                                  const NormalizerSet& normalizers) {
  params.Validate();
  const auto order = static_cast<std::size_t>(params.order);
  if (history.size() < order) {
    throw ColdStartError("query needs " + std::to_string(order) +
                         " frames of history, have " +
                         std::to_string(history.size()));
  }
  return AssemblePattern(history.last(order), mode, normalizers);
}

}  // namespace vvp
