#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamhop/metrics.hpp"
#include "beamhop/scenario.hpp"

namespace beamhop {

struct McConfig {
  long long trials = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Trials per independently seeded block. Results depend on the seed and
  /// the block size, never on the thread count.
  int block_size = 4096;
  bool record_slot_stats = false;
};

struct McResult {
  long long trials = 0;
  std::vector<long long> attempted;
  std::vector<long long> collision_free;
  std::vector<long long> decoded;
  Eigen::VectorXd p_a;       ///< collision_free / attempted
  Eigen::VectorXd p_a_se;
  Eigen::VectorXd p_d;       ///< decoded / collision_free
  Eigen::VectorXd p_d_se;
  Eigen::VectorXd p_suc;     ///< decoded / attempted
  Eigen::VectorXd p_suc_se;
  std::vector<std::uint8_t> undefined;  ///< no attempts in any trial
  /// Attempts per (cell, slot); filled when record_slot_stats is set.
  std::optional<Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>> slot_attempts;

  int n_cells() const { return static_cast<int>(attempted.size()); }
};

/// Monte-Carlo run of the grant-free access process. Each trial activates
/// every device with its cell's probability; active devices pick one of the
/// cell's lit slots and one resource block uniformly. A transmission is
/// collision-free when no same-cell device shares its (slot, RB) and decodes
/// when the summed interference from other lit cells on that (slot, RB) stays
/// below g_ii / gamma_th - 1 / rho.
///
/// Standard errors treat each trial as a cluster (ratio estimator), since
/// transmissions within one trial share interferers; a Wilson interval
/// replaces it when fewer than five successes or failures were seen.
/// Throws DomainError when some cell is never illuminated.
McResult simulate(const Scenario& s, const BeamHoppingPattern& x, const McConfig& config = {});

/// Copies p_suc and its standard error into the report's MC columns.
void attach_mc(SuccessReport& report, const McResult& mc);

inline constexpr const char* kMcSchema = "beamhop-mc/1";

/// `cell_id,attempted,collision_free,decoded,p_a_mc,p_a_se,p_d_mc,p_d_se,p_suc_mc,p_suc_se`
std::string mc_to_csv(const Scenario& s, const McResult& mc);

} // namespace beamhop
