#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "beamhop/admm.hpp"
#include "beamhop/sylvester.hpp"

namespace beamhop {

enum class SylvesterPath {
  structured,      ///< shared eigendecomposition of G with Sherman-Morrison
  bartels_stewart, ///< rank-one Bartels-Stewart on A each iteration
};

struct L2BoxConfig {
  int iterations = 300;
  double gamma = 1.0;
  std::optional<double> rho_initial;  ///< default_rho1 of equal demands when unset
  double rho_growth = 1.01;
  double rho_cap = 3.6;
  /// Explicit starting X; overrides `start`.
  std::optional<Eigen::MatrixXd> x0;
  StartPoint start = StartPoint::perturbed;
  std::uint64_t seed = 1;     ///< used by StartPoint::perturbed
  double start_noise = 0.25;  ///< used by StartPoint::perturbed
  SylvesterPath path = SylvesterPath::structured;
  /// See AdmmConfig::keep_best_feasible.
  bool keep_best_feasible = true;
  bool record_trace = true;
};

struct L2BoxState {
  Eigen::MatrixXd x, z1, z2, y1, y2;
  Eigen::VectorXd y3;  ///< per-slot dual, length n_slot
  Eigen::VectorXd y4;  ///< per-cell dual, length n_c
  double rho1 = 0.0;
  double rho2 = 0.0;
  double rho3 = 0.0;
  double gamma = 1.0;
  int iteration = 0;

  /// Zero duals, X = x0, penalties all equal to rho.
  static L2BoxState start(const Eigen::MatrixXd& x0, double rho, double gamma = 1.0);
};

/// Elementwise clamp to [0, 1].
Eigen::MatrixXd project_box(const Eigen::MatrixXd& m);

/// Projection onto the sphere centred at 1/2 * 1 1^T with radius sqrt(mn)/2.
/// A point exactly at the centre maps along +1 at (0,0) and -1/(mn-1) elsewhere.
Eigen::MatrixXd project_sphere(const Eigen::MatrixXd& m);

/// The X-update as a Sylvester equation:
///   A = 2G + (rho1 + rho2) I + rho3 1 1^T,  B = rho3 1 1^T,
///   C = rho1 Z1 + rho2 Z2 - Y1 - Y2 + rho3 n_b 1 1^T + rho3 b 1^T - 1 y3^T - y4 1^T.
SylvesterProblem sylvester_system(const L2BoxState& state, const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                                  int n_b);

/// Solves the X-update through the rank-one Bartels-Stewart variant.
Eigen::MatrixXd x_update_sylvester(const L2BoxState& state, const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                                   int n_b);

/// Runs one full iteration (Z1, Z2, X, duals; penalties are left alone).
/// Returns the Sylvester residual of the X-update. `solver` may be null, in
/// which case the Bartels-Stewart path is used.
double l2box_iteration(L2BoxState& state, const Eigen::MatrixXd& g, const Eigen::VectorXd& b, int n_b,
                       const StructuredSylvesterSolver* solver = nullptr);

struct L2BoxResult {
  Eigen::MatrixXi x_binary;
  Eigen::MatrixXd x_relaxed;
  std::vector<SolverIteration> trace;
  double residual1 = 0.0;
  double residual2 = 0.0;
  double max_sylvester_residual_ratio = 0.0; ///< max over iterations of residual / ||C||_F
  int incumbent_iteration = 0;  ///< 0 when the final X was rounded
};

/// l2-box ADMM: binary constraint as box intersect sphere, sum constraints by
/// penalty, X-update by Sylvester solve. Output is round(X).
L2BoxResult solve_l2box(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, int n_b, const L2BoxConfig& config = {});

} // namespace beamhop
