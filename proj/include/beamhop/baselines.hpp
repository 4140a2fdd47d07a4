#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "beamhop/metrics.hpp"
#include "beamhop/scenario.hpp"

namespace beamhop {

/// Each slot draws n_b cells uniformly with replacement; repeated draws
/// collapse into one illumination. Some cells may stay dark.
BeamHoppingPattern random_pattern(int n_cells, int n_slot, int n_b, std::uint64_t seed);
BeamHoppingPattern random_pattern(const Scenario& s, std::uint64_t seed);

/// Slot t lights cells (t * n_b + k) mod n_cells for k = 0 .. n_b - 1.
BeamHoppingPattern round_robin_pattern(int n_cells, int n_slot, int n_b);
BeamHoppingPattern round_robin_pattern(const Scenario& s);

enum class GreedyOrientation {
  most_devices_per_beam,   ///< serve the largest N_i / (a_i + 1) first
  fewest_devices_per_beam, ///< literal reading: smallest N_i / (a_i + 1) first
};

/// Per slot, serves the n_b cells ranked first by N_i / (a_i + 1), where a_i
/// counts the slots already given to cell i. Ties go to the lowest index.
BeamHoppingPattern greedy_pattern(const Eigen::VectorXd& demands, int n_slot, int n_b,
                                  GreedyOrientation orientation = GreedyOrientation::most_devices_per_beam);
BeamHoppingPattern greedy_pattern(const Scenario& s,
                                  GreedyOrientation orientation = GreedyOrientation::most_devices_per_beam);

struct GeneticConfig {
  int population = 100;
  int generations = 250;
  double crossover_rate = 0.9;
  /// Per-bit flip probability; 1 / (n_cells * n_slot) when unset.
  std::optional<double> mutation_rate;
  int elitism = 2;
  int tournament = 3;
  std::uint64_t seed = 1;
  /// Worker threads for fitness evaluation; results do not depend on it.
  int threads = 1;
};

struct GeneticResult {
  BeamHoppingPattern x;
  double fitness = 0.0;  ///< min_i p_suc_low of x
  std::vector<double> best_per_generation;  ///< entry 0 is the initial population
};

/// Genetic search over feasible patterns with fitness min_i p_suc_low.
/// Tournament selection, uniform slot-column crossover, bit-flip mutation and
/// elitism; every offspring is repaired before evaluation.
GeneticResult genetic_pattern(const Scenario& s, const GeneticConfig& config = {});

} // namespace beamhop
