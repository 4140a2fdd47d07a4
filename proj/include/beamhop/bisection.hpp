#pragma once

#include <Eigen/Dense>

#include "beamhop/metrics.hpp"
#include "beamhop/scenario.hpp"

namespace beamhop {

/// Floor applied to the decoding bound before logarithms are taken.
inline constexpr double kProbabilityFloor = 1e-12;

struct BisectionConfig {
  int max_iter = 100;
  /// Stop once the bracket is narrower than this.
  double tolerance = 1e-12;
  /// Hand leftover beam-slots (ceiling slack) to the weakest cells.
  bool fill_leftover = true;
};

struct BisectionResult {
  BeamAllocation b;      ///< returned allocation (after leftover fill if enabled)
  BeamAllocation b_raw;  ///< allocation induced by xi_lower alone
  double xi_lower = 0.0;
  double xi_upper = 0.0;
  double initial_upper = 0.0;
  int iterations = 0;
};

/// Smallest real b meeting P_a(b) * p_d_low >= xi. Returns +infinity when
/// xi >= p_d_low and 0 for single-device cells.
double f_bar(double xi, double alpha, double n, int n_r, double p_d_low);

/// b_i = min(max(ceil(f_bar_i(xi)), 1), n_slot) for every cell.
BeamAllocation allocation_for(double xi, const Scenario& s, const Eigen::VectorXd& p_d_low);

/// P_a(b_i) * p_d_low_i per cell (p_d_low floored as in the bisection).
Eigen::VectorXd weighted_collision_avoidance(const Scenario& s, const Eigen::VectorXd& p_d_low,
                                             const BeamAllocation& b);

/// Max-min weighted collision avoidance over integer allocations.
/// Throws InfeasibleError when N_c > n_slot * n_b.
BisectionResult bisect(const Scenario& s, const Eigen::VectorXd& p_d_low, const BisectionConfig& config = {});

/// Empirical check of the single-step condition at the converged bracket:
/// sum f(xi_upper) - sum f(xi_lower) <= 1.
bool step_condition_holds(const Scenario& s, const Eigen::VectorXd& p_d_low, const BisectionResult& r);

} // namespace beamhop
