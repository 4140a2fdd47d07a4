#include "beamhop/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "beamhop/ao.hpp"
#include "beamhop/errors.hpp"
#include "parallel.hpp"

namespace beamhop {

namespace {

void check_dims(int n_cells, int n_slot, int n_b) {
  if (n_cells < 1 || n_slot < 1 || n_b < 1 || n_b > n_cells) {
    throw DomainError("pattern dimensions need n_cells, n_slot >= 1 and 1 <= n_b <= n_cells");
  }
}

} // namespace

BeamHoppingPattern random_pattern(int n_cells, int n_slot, int n_b, std::uint64_t seed) {
  check_dims(n_cells, n_slot, n_b);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n_cells - 1);
  BeamHoppingPattern x(n_cells, n_slot);
  for (int t = 0; t < n_slot; ++t) {
    for (int k = 0; k < n_b; ++k) {
      x.set(pick(rng), t, true);
    }
  }
  return x;
}

BeamHoppingPattern random_pattern(const Scenario& s, std::uint64_t seed) {
  return random_pattern(s.n_cells(), s.n_slot(), s.n_b(), seed);
}

BeamHoppingPattern round_robin_pattern(int n_cells, int n_slot, int n_b) {
  check_dims(n_cells, n_slot, n_b);
  BeamHoppingPattern x(n_cells, n_slot);
  for (int t = 0; t < n_slot; ++t) {
    for (int k = 0; k < n_b; ++k) {
      x.set(static_cast<int>((static_cast<long long>(t) * n_b + k) % n_cells), t, true);
    }
  }
  return x;
}

BeamHoppingPattern round_robin_pattern(const Scenario& s) {
  return round_robin_pattern(s.n_cells(), s.n_slot(), s.n_b());
}

BeamHoppingPattern greedy_pattern(const Eigen::VectorXd& demands, int n_slot, int n_b,
                                  GreedyOrientation orientation) {
  const int n_cells = static_cast<int>(demands.size());
  check_dims(n_cells, n_slot, n_b);
  BeamHoppingPattern x(n_cells, n_slot);
  std::vector<int> served(static_cast<std::size_t>(n_cells), 0);
  std::vector<int> order(static_cast<std::size_t>(n_cells));
  std::vector<double> ratio(static_cast<std::size_t>(n_cells));
  const bool most = orientation == GreedyOrientation::most_devices_per_beam;
  for (int t = 0; t < n_slot; ++t) {
    for (int i = 0; i < n_cells; ++i) {
      ratio[i] = demands(i) / (served[i] + 1.0);
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return most ? ratio[a] > ratio[b] : ratio[a] < ratio[b]; });
    for (int k = 0; k < n_b; ++k) {
      x.set(order[k], t, true);
      ++served[order[k]];
    }
  }
  return x;
}

BeamHoppingPattern greedy_pattern(const Scenario& s, GreedyOrientation orientation) {
  return greedy_pattern(s.demands(), s.n_slot(), s.n_b(), orientation);
}

GeneticResult genetic_pattern(const Scenario& s, const GeneticConfig& config) {
  if (config.population < 2 || config.generations < 0 || config.tournament < 1 || config.elitism < 0 ||
      config.elitism > config.population) {
    throw DomainError("genetic: invalid population, generation, tournament or elitism setting");
  }
  if (config.crossover_rate < 0.0 || config.crossover_rate > 1.0 ||
      (config.mutation_rate && (*config.mutation_rate < 0.0 || *config.mutation_rate > 1.0))) {
    throw DomainError("genetic: rates must lie in [0, 1]");
  }
  const int n_c = s.n_cells();
  const int n_slot = s.n_slot();
  const int pop_size = config.population;
  const double mutation = config.mutation_rate.value_or(1.0 / (static_cast<double>(n_c) * n_slot));
  std::mt19937_64 rng(config.seed);

  using Genome = Eigen::MatrixXi;
  auto fix = [&](const Genome& g) {
    const Eigen::VectorXd score = success_lower_bound(s, BeamHoppingPattern(g)).p_suc_low;
    return repair_pattern(g, s.n_b(), score).matrix();
  };

  std::vector<Genome> pop(static_cast<std::size_t>(pop_size));
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(pop_size));
  for (auto& sd : seeds) {
    sd = rng();
  }
  std::vector<double> fit(static_cast<std::size_t>(pop_size));
  parallel_for(pop_size, config.threads, [&](int k) {
    pop[k] = fix(random_pattern(s, seeds[k]).matrix());
    fit[k] = success_lower_bound(s, BeamHoppingPattern(pop[k])).min;
  });

  GeneticResult result;
  auto best_index = [&] {
    return static_cast<int>(std::max_element(fit.begin(), fit.end()) - fit.begin());
  };
  result.best_per_generation.push_back(fit[best_index()]);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> member(0, pop_size - 1);
  auto tournament = [&] {
    int winner = member(rng);
    for (int r = 1; r < config.tournament; ++r) {
      const int c = member(rng);
      if (fit[c] > fit[winner]) {
        winner = c;
      }
    }
    return winner;
  };

  const long long genes = static_cast<long long>(n_c) * n_slot;
  std::vector<Genome> next(static_cast<std::size_t>(pop_size));
  std::vector<int> order(static_cast<std::size_t>(pop_size));
  std::vector<char> fresh(static_cast<std::size_t>(pop_size));
  std::vector<double> next_fit(static_cast<std::size_t>(pop_size));
  for (int gen = 0; gen < config.generations; ++gen) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fit[a] > fit[b]; });
    for (int e = 0; e < config.elitism; ++e) {
      next[e] = pop[order[e]];
      next_fit[e] = fit[order[e]];
      fresh[e] = 0;
    }
    for (int k = config.elitism; k < pop_size; ++k) {
      Genome child = pop[tournament()];
      const Genome& other = pop[tournament()];
      if (unit(rng) < config.crossover_rate) {
        for (int t = 0; t < n_slot; ++t) {
          if (unit(rng) < 0.5) {
            child.col(t) = other.col(t);
          }
        }
      }
      if (mutation >= 1.0) {
        child = child.unaryExpr([](int v) { return 1 - v; });
      } else if (mutation > 0.0) {
        std::geometric_distribution<long long> gap(mutation);
        for (long long pos = gap(rng); pos < genes; pos += gap(rng) + 1) {
          const int i = static_cast<int>(pos % n_c);
          const int t = static_cast<int>(pos / n_c);
          child(i, t) = 1 - child(i, t);
        }
      }
      next[k] = std::move(child);
      fresh[k] = 1;
    }
    parallel_for(pop_size, config.threads, [&](int k) {
      if (fresh[k]) {
        next[k] = fix(next[k]);
        next_fit[k] = success_lower_bound(s, BeamHoppingPattern(next[k])).min;
      }
    });
    pop.swap(next);
    fit.swap(next_fit);
    result.best_per_generation.push_back(fit[best_index()]);
  }
  const int b = best_index();
  result.x = BeamHoppingPattern(pop[b]);
  result.fitness = fit[b];
  return result;
}

} // namespace beamhop
