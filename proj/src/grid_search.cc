#include "vvp/grid_search.h"

#include <algorithm>
#include <string>

#include "vvp/errors.h"
#include "vvp/online_predictor.h"
#include "vvp/parallel.h"

namespace vvp {
namespace {

// Replays the trace once with a fixed order and returns one ARMSE per grid
// sigma. Matches EvaluateTrace with FixedStrategy{order, sigma} exactly.
std::vector<double> ReplayOrder(std::span<const SignalFrame> frames,
                                FusionMode mode, int order, int horizon) {
  OnlinePredictor predictor(mode, FixedStrategy{{order, kMaxSigma, horizon}});
  std::vector<std::vector<Forecast>> forecasts(kGridSigmaSteps);
  for (auto& f : forecasts) f.reserve(frames.size());

  std::vector<double> normalized(static_cast<std::size_t>(horizon));
  for (const SignalFrame& frame : frames) {
    const Forecast base = predictor.Step(frame);
    if (base.fallback) {
      for (int s = 0; s < kGridSigmaSteps; ++s) {
        Forecast f = base;
        f.params_used.sigma = GridSigma(s);
        forecasts[s].push_back(std::move(f));
      }
      continue;
    }
    const auto& retained = predictor.frames();
    const std::vector<SignalFrame> recent(retained.end() - order, retained.end());
    const GrnnParams& params = predictor.params();
    const std::vector<double> query =
        AssembleQuery(recent, params, mode, predictor.normalizers());
    const std::vector<double> sq = SquaredDistances(query, predictor.training());
    const Normalizer& velocity = predictor.normalizers().velocity;
    for (int s = 0; s < kGridSigmaSteps; ++s) {
      PredictFromSquaredDistances(sq, predictor.training(), GridSigma(s),
                                  normalized);
      Forecast f;
      f.origin_t = frame.t;
      f.params_used = {order, GridSigma(s), horizon};
      f.velocities.resize(normalized.size());
      for (std::size_t j = 0; j < normalized.size(); ++j) {
        f.velocities[j] = std::max(0.0, velocity.Denormalize(normalized[j]));
      }
      forecasts[s].push_back(std::move(f));
    }
  }

  std::vector<double> armse(kGridSigmaSteps);
  for (int s = 0; s < kGridSigmaSteps; ++s) {
    armse[s] = ScoreForecasts(frames, forecasts[s]).armse;
  }
  return armse;
}

}  // namespace

std::vector<GridCell> TraverseGrid(std::span<const SignalFrame> frames,
                                   FusionMode mode, int horizon) {
  const auto needed = static_cast<std::size_t>(kMaxOrder + 2 * horizon);
  if (frames.size() <= needed) {
    throw InsufficientDataError("sweep needs more than " +
                                std::to_string(needed) + " frames, have " +
                                std::to_string(frames.size()));
  }
  ValidateSequence(frames);

  constexpr int kOrders = kMaxOrder - kMinOrder + 1;
  std::vector<std::vector<double>> per_order(kOrders);
  ParallelFor(kOrders, [&](std::size_t i) {
    per_order[i] = ReplayOrder(frames, mode, kMinOrder + static_cast<int>(i),
                               horizon);
  });

  std::vector<GridCell> grid;
  grid.reserve(kGridCells);
  for (int i = 0; i < kOrders; ++i) {
    for (int s = 0; s < kGridSigmaSteps; ++s) {
      grid.push_back({kMinOrder + i, GridSigma(s), per_order[i][s]});
    }
  }
  return grid;
}

GridCell GridArgmin(std::span<const GridCell> grid) {
  if (grid.empty()) throw InputError("empty grid");
  return *std::ranges::min_element(
      grid, [](const GridCell& a, const GridCell& b) { return a.armse < b.armse; });
}

double GridPercentile(std::span<const GridCell> grid, double armse) {
  if (grid.empty()) throw InputError("empty grid");
  const auto beaten = std::ranges::count_if(
      grid, [armse](const GridCell& c) { return c.armse >= armse; });
  return 100.0 * static_cast<double>(beaten) / static_cast<double>(grid.size());
}

}  // namespace vvp
