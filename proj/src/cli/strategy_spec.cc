#include "cli/strategy_spec.h"

#include <charconv>
#include <map>
#include <sstream>

#include "vvp/errors.h"

namespace vvp::cli {
namespace {

std::map<std::string, std::string> ParseKeyValues(std::string_view body) {
  std::map<std::string, std::string> out;
  while (!body.empty()) {
    const std::size_t comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw InputError("strategy option '" + std::string(item) +
                       "' is not key=value");
    }
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("strategy option " + key + "='" + text +
                     "' is not a valid number");
  }
  return value;
}

}  // namespace

StrategySpec ParseStrategySpec(std::string_view text,
                               const StrategyDefaults& defaults) {
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  auto options = ParseKeyValues(
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1));

  StrategySpec spec;
  spec.k = defaults.k;
  spec.seed = defaults.seed;
  auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = options.find(key);
    if (it == options.end()) return std::nullopt;
    std::string value = it->second;
    options.erase(it);
    return value;
  };

  GrnnParams params;
  if (auto v = take("order")) params.order = ParseNumber<int>("order", *v);
  if (auto v = take("sigma")) params.sigma = ParseNumber<double>("sigma", *v);

  if (kind == "fixed") {
    spec.strategy = FixedStrategy{params};
  } else if (kind == "adaptive") {
    AdaptiveStrategy adaptive;
    adaptive.initial = params;
    adaptive.reopt_interval = defaults.reopt;
    if (auto v = take("reopt")) adaptive.reopt_interval = ParseNumber<int>("reopt", *v);
    if (auto v = take("swarm")) adaptive.swarm.swarm_size = ParseNumber<int>("swarm", *v);
    if (auto v = take("iters")) {
      adaptive.swarm.max_iterations = ParseNumber<int>("iters", *v);
    }
    if (auto v = take("target")) {
      adaptive.swarm.target_score = ParseNumber<double>("target", *v);
    }
    if (auto v = take("k")) spec.k = ParseNumber<int>("k", *v);
    if (auto v = take("seed")) spec.seed = ParseNumber<std::uint64_t>("seed", *v);
    if (adaptive.reopt_interval < 1) throw ParameterError("reopt must be >= 1");
    adaptive.swarm.Validate();
    spec.strategy = adaptive;
  } else {
    throw InputError("unknown strategy kind '" + std::string(kind) +
                     "' (expected fixed or adaptive)");
  }
  if (!options.empty()) {
    throw InputError("unknown strategy option '" + options.begin()->first + "'");
  }
  params.Validate();
  if (spec.k < 2) throw ParameterError("k must be >= 2");
  return spec;
}

std::string Describe(const StrategySpec& spec) {
  std::ostringstream out;
  if (const auto* fixed = std::get_if<FixedStrategy>(&spec.strategy)) {
    out << "fixed:order=" << fixed->params.order
        << ",sigma=" << fixed->params.sigma;
  } else {
    const auto& adaptive = std::get<AdaptiveStrategy>(spec.strategy);
    out << "adaptive:reopt=" << adaptive.reopt_interval << ",k=" << spec.k
        << ",seed=" << spec.seed << ",swarm=" << adaptive.swarm.swarm_size
        << ",iters=" << adaptive.swarm.max_iterations
        << ",order=" << adaptive.initial.order
        << ",sigma=" << adaptive.initial.sigma;
  }
  return out.str();
}

}  // namespace vvp::cli
