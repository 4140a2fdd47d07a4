#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace beamhop {

/// One row of a solver convergence trace.
struct SolverIteration {
  int iter = 0;
  double objective = 0.0;           ///< sum_t x_t^T G x_t at the current X
  double residual1 = 0.0;           ///< ||X - Z1||_F
  double residual2 = 0.0;           ///< ||X - Z2||_F
  double rho1 = 0.0;
  double rho2 = 0.0;
  double sylvester_residual = 0.0;  ///< ||AX + XB - C||_F / ||C||_F; NaN for the plain ADMM
};

inline constexpr const char* kSolverTraceSchema = "beamhop-solver-trace/1";

/// `iter,objective,residual1,residual2,rho1,rho2,sylvester_residual`
std::string solver_trace_to_csv(const std::vector<SolverIteration>& trace);

/// Starting point of the inner solvers.
enum class StartPoint {
  uniform,   ///< every entry of row i equals b_i / n_slot
  staggered, ///< feasible binary pattern filling cells cyclically across slots
  blended,   ///< average of the two
  perturbed, ///< uniform plus seeded i.i.d. noise in [-noise, noise]
};

/// Smallest penalty start from which geometric growth reaches the cap
/// within the iteration budget: cap / growth^iterations.
double reachable_rho_floor(int iterations, double growth, double cap);

/// Penalty start rho1 = 0.1 * min(N) / max(N) + floor.
double default_rho1(const Eigen::VectorXd& demands, double floor);

struct AdmmConfig {
  int iterations = 300;
  double gamma = 1.0;
  std::optional<double> rho1_initial;  ///< default_rho1 of equal demands when unset
  double rho2_ratio = 2.2;
  double rho_growth = 1.01;
  double rho_cap = 3.6;
  /// Explicit starting X; overrides `start`.
  std::optional<Eigen::MatrixXd> x0;
  StartPoint start = StartPoint::perturbed;
  std::uint64_t seed = 1;     ///< used by StartPoint::perturbed
  double start_noise = 0.25;  ///< used by StartPoint::perturbed
  /// Return the best rounded iterate that meets both sum constraints instead
  /// of rounding the last X.
  bool keep_best_feasible = true;
  bool record_trace = true;
};

struct AdmmState {
  Eigen::MatrixXd x, z1, z2, y1, y2;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double gamma = 1.0;
  int iteration = 0;
};

/// Elementwise rounding to {0, 1}; 0.5 goes to 1.
Eigen::MatrixXd project_binary(const Eigen::MatrixXd& m);

/// Euclidean projection onto {X : column sums = n_b, row sums = b}.
/// Throws DomainError when sum(b) != n_slot * n_b.
Eigen::MatrixXd project_affine(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, int n_b);

/// X = (2G + (rho1 + rho2) I)^{-1} (rho1 Z1 + rho2 Z2 - Y1 - Y2).
Eigen::MatrixXd x_update(const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2, const Eigen::MatrixXd& y1,
                         const Eigen::MatrixXd& y2, const Eigen::MatrixXd& g, double rho1, double rho2);

/// Uniform fractional start: every entry of row i equals b_i / n_slot.
Eigen::MatrixXd uniform_start(const Eigen::VectorXd& b, int n_slot);

/// Binary pattern with row sums b and column sums n_b: cell i takes the next
/// b_i positions of the slot-major sequence 0, 1, ..., n_slot - 1, 0, 1, ...
/// Requires sum(b) == n_slot * n_b and b_i <= n_slot.
Eigen::MatrixXd staggered_start(const Eigen::VectorXd& b, int n_slot, int n_b);

/// Uniform start plus i.i.d. U(-noise, noise) entries drawn from `seed`.
Eigen::MatrixXd perturbed_start(const Eigen::VectorXd& b, int n_slot, double noise, std::uint64_t seed);

Eigen::MatrixXd start_point(StartPoint kind, const Eigen::VectorXd& b, int n_slot, int n_b, std::uint64_t seed = 1,
                            double noise = 0.25);

struct AdmmResult {
  Eigen::MatrixXi x_binary;
  Eigen::MatrixXd x_relaxed;
  std::vector<SolverIteration> trace;
  double residual1 = 0.0;
  double residual2 = 0.0;
  /// Iteration whose rounding was returned; 0 means the final X was rounded.
  int incumbent_iteration = 0;
};

/// True when a 0/1 matrix has row sums b and column sums n_b.
bool meets_sum_constraints(const Eigen::MatrixXd& x, const Eigen::VectorXd& b, int n_b);

/// Best feasible rounding seen so far, ranked by sum_t x_t^T G x_t.
class Incumbent {
public:
  Incumbent(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, int n_b) : g_(g), b_(b), n_b_(n_b) {}
  /// Rounds `x`; keeps it when feasible and strictly better.
  void offer(const Eigen::MatrixXd& x, int iteration);
  bool empty() const { return iteration_ == 0; }
  int iteration() const { return iteration_; }
  const Eigen::MatrixXd& x() const { return x_; }

private:
  const Eigen::MatrixXd& g_;
  const Eigen::VectorXd& b_;
  int n_b_;
  Eigen::MatrixXd x_;
  double objective_ = 0.0;
  int iteration_ = 0;
};

/// Binary-projection ADMM for min sum_t x_t^T G x_t subject to binary X with
/// row sums b and column sums n_b. Unless an iterate rounded to a feasible
/// pattern was kept, the output may violate the sum constraints; repair is
/// left to the caller.
AdmmResult solve_admm(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, int n_b, const AdmmConfig& config = {});

} // namespace beamhop
