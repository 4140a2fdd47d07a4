#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamhop/admm.hpp"
#include "beamhop/bisection.hpp"
#include "beamhop/l2box.hpp"
#include "beamhop/metrics.hpp"
#include "beamhop/scenario.hpp"

namespace beamhop {

enum class InnerSolver { admm, l2box };

enum class RepairPolicy {
  held_fixed, ///< p_suc computed once before the slot sweep
  refresh,    ///< p_suc re-evaluated after every single edit
};

struct AoConfig {
  int n_ao = 5;
  InnerSolver solver = InnerSolver::l2box;
  AdmmConfig admm;
  L2BoxConfig l2box;
  BisectionConfig bisection;
  RepairPolicy repair = RepairPolicy::held_fixed;
  /// Seed the inner penalty from the scenario's demand spread unless the
  /// inner config already fixes it.
  bool demand_scaled_rho = true;
  /// From the second round on, start the inner solver at the previous
  /// repaired pattern instead of the configured start point.
  bool warm_start = true;
};

struct AoIteration {
  int iter = 0;
  BeamAllocation b;
  double min_psuc = 0.0;
  double mean_psuc = 0.0;
  double residual1 = 0.0;
  double residual2 = 0.0;
  double ms = 0.0;
};

inline constexpr const char* kAoTraceSchema = "beamhop-ao-trace/1";

struct AoTrace {
  std::vector<AoIteration> iterations;
  /// `iter,min_psuc,mean_psuc,residual1,residual2,ms`
  std::string to_csv() const;
};

struct AoStart {
  Eigen::MatrixXd x_fractional;
  Eigen::VectorXd p_d_low;
};

/// Uniform-illumination decoding bound plus the matching fractional pattern.
/// Throws InfeasibleError naming the first cell with g_ii rho <= gamma_th.
AoStart initialize(const Scenario& s);

/// Slot-wise repair with fixed scores: under-full slots gain the unlit cells
/// with the lowest score, over-full slots drop the lit cells with the highest.
/// A final pass gives every dark cell one slot taken from the highest-scoring
/// cell that has at least two. Ties go to the lowest cell index.
/// Requires n_cells <= n_slot * n_b and n_b <= n_cells.
BeamHoppingPattern repair_pattern(const Eigen::MatrixXi& x, int n_b, const Eigen::VectorXd& score);

/// Repair scored by the success lower bound. With RepairPolicy::refresh the
/// bound is recomputed from the partially repaired pattern after each edit.
BeamHoppingPattern repair(const Eigen::MatrixXi& x, const Scenario& s, const Eigen::VectorXd& p_suc_low,
                          RepairPolicy policy = RepairPolicy::held_fixed);

struct AoResult {
  BeamHoppingPattern x;
  BeamAllocation b;  ///< row sums of x
  SuccessReport report;
  AoTrace trace;
  int best_iteration = 0;
  std::vector<std::vector<SolverIteration>> inner_traces;
};

/// Alternates bisection and the inner ADMM solver for n_ao rounds, repairing
/// after each inner solve, and returns the iterate with the largest minimum
/// success bound (earliest on ties).
AoResult optimize(const Scenario& s, const AoConfig& config = {});

} // namespace beamhop
