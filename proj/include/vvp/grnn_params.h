#pragma once

#include <string>

namespace vvp {

inline constexpr int kMinOrder = 1;
inline constexpr int kMaxOrder = 13;
inline constexpr int kDefaultHorizon = 5;
inline constexpr double kMaxSigma = 1.0;

// Tunable GRNN settings: history length (order), kernel bandwidth (sigma) and
// the forecast horizon in seconds.
struct GrnnParams {
  int order = 7;
  double sigma = 0.5;
  int horizon = kDefaultHorizon;

  // Throws ParameterError unless 1 <= order <= 13, 0 < sigma <= 1 and
  // horizon >= 1.
  void Validate() const;

  std::string ToString() const;

  friend bool operator==(const GrnnParams&, const GrnnParams&) = default;
};

}  // namespace vvp
