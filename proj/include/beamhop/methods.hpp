#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beamhop/ao.hpp"
#include "beamhop/baselines.hpp"
#include "beamhop/metrics.hpp"
#include "beamhop/scenario.hpp"

namespace beamhop {

enum class Method { b_a, b_l2a, random, round_robin, greedy, genetic };

/// Accepts the CLI spellings `b-a`, `b-l2a`, `random`, `round-robin`,
/// `greedy` and `genetic`. Throws ValidationError otherwise.
Method parse_method(const std::string& name);
std::string method_name(Method m);
const std::vector<Method>& all_methods();

struct MethodSettings {
  AoConfig ao;
  GeneticConfig genetic;
  GreedyOrientation greedy = GreedyOrientation::most_devices_per_beam;
  /// Seed for the random and genetic generators and the inner solvers' start.
  std::uint64_t seed = 1;
};

struct MethodOutcome {
  BeamHoppingPattern x;
  SuccessReport report;
  double ms = 0.0;
  std::optional<AoTrace> trace;
  std::vector<std::vector<SolverIteration>> inner_traces;
};

/// Builds a pattern with the chosen method and scores it with the success
/// lower bound.
MethodOutcome run_method(const Scenario& s, Method method, const MethodSettings& settings = {});

} // namespace beamhop
