#include "vvp/cli.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cli/json_io.h"
#include "cli/strategy_spec.h"
#include "vvp/errors.h"
#include "vvp/grid_search.h"
#include "vvp/online_predictor.h"
#include "vvp/parallel.h"
#include "vvp/trace_io.h"
#include "vvp/traffic_sim.h"

namespace vvp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string FormatReal(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("failed writing " + path.string());
}

fs::path StepsCsvPath(const fs::path& report) {
  fs::path out = report;
  out.replace_extension(".steps.csv");
  return out;
}

struct RunSettings {
  std::string trace;
  std::string mode = "hvv";
  std::string strategy = "fixed:order=7,sigma=0.5";
  std::uint64_t seed = 1;
  int k = kDefaultFolds;
  int reopt = kDefaultReoptInterval;
  std::string out;
};

cli::StrategySpec ParseStrategy(const std::string& text,
                                const RunSettings& settings) {
  return cli::ParseStrategySpec(text, {settings.k, settings.reopt, settings.seed});
}

std::vector<SignalFrame> LoadTrace(const std::string& path) {
  return ReadTraceCsvFile(path);
}

json RunJson(const std::string& trace_id, FusionMode mode,
             const cli::StrategySpec& spec, const TraceEvaluation& eval) {
  json history = json::array();
  for (const ParamsChange& change : eval.params_history) {
    history.push_back({{"t", change.t},
                       {"order", change.params.order},
                       {"sigma", change.params.sigma}});
  }
  json steps = json::array();
  for (const StepRecord& step : eval.steps) {
    steps.push_back({{"t", step.forecast.origin_t},
                     {"forecast", step.forecast.velocities},
                     {"actual", step.actual},
                     {"rmse", step.rmse},
                     {"fallback", step.forecast.fallback}});
  }
  return {{"trace_id", trace_id},
          {"mode", std::string(ToString(mode))},
          {"strategy", cli::Describe(spec)},
          {"k", spec.k},
          {"seed", spec.seed},
          {"armse", eval.armse},
          {"params_history", history},
          {"per_step", steps}};
}

std::string StepsCsv(const TraceEvaluation& eval) {
  std::string text = "t,fallback,order,sigma";
  const std::size_t horizon =
      eval.steps.empty() ? 0 : eval.steps.front().forecast.velocities.size();
  for (std::size_t j = 1; j <= horizon; ++j) text += ",forecast_" + std::to_string(j);
  for (std::size_t j = 1; j <= horizon; ++j) text += ",actual_" + std::to_string(j);
  text += ",rmse\n";
  for (const StepRecord& step : eval.steps) {
    const Forecast& f = step.forecast;
    text += std::to_string(f.origin_t) + ',' + (f.fallback ? "1" : "0") + ',' +
            std::to_string(f.params_used.order) + ',' +
            FormatReal(f.params_used.sigma);
    for (double v : f.velocities) text += ',' + FormatReal(v);
    for (double v : step.actual) text += ',' + FormatReal(v);
    text += ',' + FormatReal(step.rmse) + '\n';
  }
  return text;
}

std::string TraceId(const std::string& path) {
  return fs::path(path).filename().string();
}

int Simulate(const std::optional<std::string>& preset,
             const std::optional<std::string>& config_path,
             const std::optional<std::uint64_t>& seed,
             const std::optional<int>& duration, const std::string& out_path,
             std::ostream& out) {
  ScenarioConfig config;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw InputError("cannot open config " + *config_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError("config is not valid JSON: " + std::string(e.what()));
    }
    config = cli::ScenarioConfigFromJson(j);
  } else {
    config = ScenarioConfig::Urban();
    if (preset) {
      config = ParseScenarioKind(*preset) == ScenarioKind::kUrban
                   ? ScenarioConfig::Urban()
                   : ScenarioConfig::Highway();
    }
  }
  if (seed) config.seed = *seed;
  if (duration) config.duration = *duration;
  config.Validate();

  const std::vector<SignalFrame> frames = Generate(config);
  WriteTraceCsvFile(out_path, frames);
  const fs::path stats_path = cli::StatsSidecarPath(out_path);
  WriteText(stats_path, cli::ToJson(ComputeStats(frames)).dump(2) + "\n");
  out << "wrote " << frames.size() << " frames to " << out_path << " and "
      << stats_path.string() << "\n";
  return kExitOk;
}

int Evaluate(const RunSettings& settings, std::ostream& out) {
  const FusionMode mode = ParseFusionMode(settings.mode);
  const cli::StrategySpec spec = ParseStrategy(settings.strategy, settings);
  const std::vector<SignalFrame> frames = LoadTrace(settings.trace);
  const TraceEvaluation eval =
      EvaluateTrace(frames, mode, spec.strategy, spec.k, spec.seed);

  const json report = RunJson(TraceId(settings.trace), mode, spec, eval);
  WriteText(settings.out, report.dump(2) + "\n");
  WriteText(StepsCsvPath(settings.out), StepsCsv(eval));
  out << Label(mode) << " " << cli::Describe(spec)
      << " ARMSE=" << FormatReal(eval.armse) << "\n";
  return kExitOk;
}

int Compare(const RunSettings& settings, const std::string& baseline_text,
            const std::string& baseline_mode_text, bool with_grid,
            std::ostream& out) {
  const FusionMode mode = ParseFusionMode(settings.mode);
  const FusionMode baseline_mode = ParseFusionMode(baseline_mode_text);
  const cli::StrategySpec spec = ParseStrategy(settings.strategy, settings);
  const cli::StrategySpec baseline = ParseStrategy(baseline_text, settings);
  const std::vector<SignalFrame> frames = LoadTrace(settings.trace);

  const TraceEvaluation base_eval = EvaluateTrace(
      frames, baseline_mode, baseline.strategy, baseline.k, baseline.seed);
  const TraceEvaluation cand_eval =
      EvaluateTrace(frames, mode, spec.strategy, spec.k, spec.seed);
  const double improvement =
      ImprovementPercent(base_eval.armse, cand_eval.armse);

  const std::string id = TraceId(settings.trace);
  json report = RunJson(id, mode, spec, cand_eval);
  report["baseline"] = RunJson(id, baseline_mode, baseline, base_eval);
  report["baseline"].erase("per_step");
  report["improvement_vs_baseline"] = improvement;
  if (with_grid) {
    const std::vector<GridCell> grid = TraverseGrid(frames, mode);
    report["grid_percentile"] = GridPercentile(grid, cand_eval.armse);
  }
  WriteText(settings.out, report.dump(2) + "\n");
  WriteText(StepsCsvPath(settings.out), StepsCsv(cand_eval));
  out << "baseline " << Label(baseline_mode) << " " << cli::Describe(baseline)
      << " ARMSE=" << FormatReal(base_eval.armse) << "\n"
      << "candidate " << Label(mode) << " " << cli::Describe(spec)
      << " ARMSE=" << FormatReal(cand_eval.armse) << "\n"
      << "improvement " << FormatReal(improvement) << "%\n";
  return kExitOk;
}

int Sweep(const RunSettings& settings, std::ostream& out) {
  const FusionMode mode = ParseFusionMode(settings.mode);
  const std::vector<SignalFrame> frames = LoadTrace(settings.trace);
  const std::vector<GridCell> grid = TraverseGrid(frames, mode);
  const GridCell best = GridArgmin(grid);

  std::string text = "order,sigma,armse\n";
  for (const GridCell& cell : grid) {
    text += std::to_string(cell.order) + ',' + FormatReal(cell.sigma) + ',' +
            FormatReal(cell.armse) + '\n';
  }
  text += "# argmin: order=" + std::to_string(best.order) +
          ",sigma=" + FormatReal(best.sigma) + ",armse=" + FormatReal(best.armse) +
          '\n';
  WriteText(settings.out, text);
  out << Label(mode) << " argmin order=" << best.order
      << " sigma=" << FormatReal(best.sigma)
      << " ARMSE=" << FormatReal(best.armse) << "\n";
  return kExitOk;
}

int Ablate(const RunSettings& settings, std::ostream& out) {
  const std::vector<SignalFrame> frames = LoadTrace(settings.trace);
  for (const SignalFrame& f : frames) {
    if (!f.dist_front || !f.v_front || !f.dist_tls) {
      throw InputError("ablation needs dist_front, v_front and dist_tls on "
                       "every row (missing at t=" + std::to_string(f.t) + ")");
    }
  }
  std::vector<GridCell> best(kAllFusionModes.size());
  ParallelFor(kAllFusionModes.size(), [&](std::size_t i) {
    best[i] = GridArgmin(TraverseGrid(frames, kAllFusionModes[i]));
  });

  std::string text = "mode,order,sigma,armse,improvement_pct\n";
  const double reference = best.front().armse;
  for (std::size_t i = 0; i < best.size(); ++i) {
    const double improvement = ImprovementPercent(reference, best[i].armse);
    text += std::string(ToString(kAllFusionModes[i])) + ',' +
            std::to_string(best[i].order) + ',' + FormatReal(best[i].sigma) +
            ',' + FormatReal(best[i].armse) + ',' + FormatReal(improvement) +
            '\n';
    out << Label(kAllFusionModes[i]) << ": order=" << best[i].order
        << " sigma=" << FormatReal(best[i].sigma)
        << " ARMSE=" << FormatReal(best[i].armse)
        << " improvement=" << FormatReal(improvement) << "%\n";
  }
  WriteText(settings.out, text);
  return kExitOk;
}

void AddRunOptions(CLI::App* cmd, RunSettings& s, bool with_mode,
                   bool with_strategy) {
  cmd->add_option("--trace", s.trace, "Trace CSV")->required();
  if (with_mode) {
    cmd->add_option("--mode", s.mode,
                    "hvv | hvv-dis | hvv-dis-vfv | hvv-dis-vfv-tls");
  }
  if (with_strategy) {
    cmd->add_option("--strategy", s.strategy,
                    "fixed:order=7,sigma=0.5 or adaptive:reopt=10,k=5,seed=1");
    cmd->add_option("--seed", s.seed, "Default seed for adaptive strategies");
    cmd->add_option("--k", s.k, "Default cross-validation folds");
    cmd->add_option("--reopt", s.reopt, "Default re-optimization interval (s)");
  }
  cmd->add_option("--out", s.out, "Output path")->required();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Online vehicle velocity prediction toolkit", "vvp"};
  app.require_subcommand(1);

  std::optional<std::string> preset;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> sim_seed;
  std::optional<int> sim_duration;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic trace");
  simulate->add_option("--preset", preset, "urban | highway");
  simulate->add_option("--config", config_path, "Scenario config JSON");
  simulate->add_option("--seed", sim_seed, "Override the scenario seed");
  simulate->add_option("--duration", sim_duration, "Override the duration (s)");
  simulate->add_option("--out", sim_out, "Trace CSV output path")->required();

  RunSettings evaluate_settings;
  auto* evaluate = app.add_subcommand("evaluate", "Replay a trace with one strategy");
  AddRunOptions(evaluate, evaluate_settings, true, true);

  RunSettings compare_settings;
  compare_settings.mode = "hvv-dis-vfv-tls";
  compare_settings.strategy = "adaptive";
  std::string baseline = "fixed:order=7,sigma=0.5";
  std::string baseline_mode = "hvv";
  bool with_grid = false;
  auto* compare = app.add_subcommand("compare", "Baseline vs. candidate strategy");
  AddRunOptions(compare, compare_settings, true, true);
  compare->add_option("--baseline", baseline, "Baseline strategy descriptor");
  compare->add_option("--baseline-mode", baseline_mode, "Baseline fusion mode");
  compare->add_flag("--grid", with_grid,
                    "Also report the candidate's percentile in the fixed grid");

  RunSettings sweep_settings;
  auto* sweep = app.add_subcommand("sweep", "Traverse the 13 x 20 parameter grid");
  AddRunOptions(sweep, sweep_settings, true, false);

  RunSettings ablate_settings;
  auto* ablate = app.add_subcommand("ablate", "Compare the four fusion modes");
  AddRunOptions(ablate, ablate_settings, false, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (simulate->parsed()) {
      return Simulate(preset, config_path, sim_seed, sim_duration, sim_out, out);
    }
    if (evaluate->parsed()) return Evaluate(evaluate_settings, out);
    if (compare->parsed()) {
      return Compare(compare_settings, baseline, baseline_mode, with_grid, out);
    }
    if (sweep->parsed()) return Sweep(sweep_settings, out);
    if (ablate->parsed()) return Ablate(ablate_settings, out);
  } catch (const InsufficientDataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInsufficientData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace vvp
