#pragma once

#include <span>
#include <vector>

#include "vvp/grnn_params.h"
#include "vvp/signal_fusion.h"

namespace vvp {

inline constexpr int kGridSigmaSteps = 20;
inline constexpr int kGridCells = (kMaxOrder - kMinOrder + 1) * kGridSigmaSteps;

// i-th sigma of the sweep, 0.05 .. 1.00.
inline double GridSigma(int i) { return (i + 1) / 20.0; }

struct GridCell {
  int order = 0;
  double sigma = 0.0;
  double armse = 0.0;
};

// Fixed-parameter online ARMSE for every (order, sigma) with order 1..13 and
// sigma 0.05..1.00 step 0.05, ordered by order then sigma. Each order is
// replayed once and its distances are shared by all sigmas. Throws
// InsufficientDataError if the trace cannot score the largest order.
std::vector<GridCell> TraverseGrid(std::span<const SignalFrame> frames,
                                   FusionMode mode,
                                   int horizon = kDefaultHorizon);

// Lowest-ARMSE cell, first in grid order on ties.
GridCell GridArgmin(std::span<const GridCell> grid);

// Percentage of grid cells whose ARMSE is >= `armse`.
double GridPercentile(std::span<const GridCell> grid, double armse);

}  // namespace vvp
