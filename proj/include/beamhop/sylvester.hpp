#pragma once

#include <Eigen/Dense>

namespace beamhop {

/// The matrix equation A X + X B = C with A (m x m), B (n x n), C (m x n).
struct SylvesterProblem {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd c;
};

/// Relative eigen-gap below which A and -B are considered to share a
/// spectrum point: min |lambda_i(A) + mu_j(B)| / max(||A||, ||B||).
inline constexpr double kSylvesterGapTolerance = 1e-12;
inline constexpr int kKroneckerMaxUnknowns = 400;

/// Bartels-Stewart. Symmetric A and B take the eigendecomposition route
/// (their real Schur forms are diagonal); anything else goes through the
/// real Schur form with quasi-triangular back-substitution.
/// Throws SingularError when A and -B share an eigenvalue.
Eigen::MatrixXd solve_bartels_stewart(const SylvesterProblem& problem);

/// Always uses the general real-Schur path.
Eigen::MatrixXd solve_bartels_stewart_schur(const SylvesterProblem& problem);

/// Solver for B = beta * 1 1^T with symmetric A. B's Schur basis has a single
/// non-zero eigenvalue beta * n along the constant direction, so the solve
/// reduces to two shifted symmetric solves sharing one eigendecomposition of A.
Eigen::MatrixXd solve_sylvester_rank_one(const Eigen::MatrixXd& a, double beta, const Eigen::MatrixXd& c);

/// Solves (2G + sigma I + beta 1 1^T) X + X (beta 1 1^T) = C for symmetric
/// PSD G. One eigendecomposition of G is shared by every (sigma, beta), and
/// the rank-one term on the left is absorbed by Sherman-Morrison, so each
/// solve costs O(m^2 n).
class StructuredSylvesterSolver {
public:
  explicit StructuredSylvesterSolver(const Eigen::MatrixXd& g);

  Eigen::MatrixXd solve(double sigma, double beta, const Eigen::MatrixXd& c) const;

  int size() const { return static_cast<int>(lambda_.size()); }

private:
  Eigen::MatrixXd apply_inverse(double shift, double beta, const Eigen::MatrixXd& r) const;

  Eigen::MatrixXd v_;
  Eigen::VectorXd lambda_;
  Eigen::VectorXd v_ones_;
  double scale_ = 1.0;
};

/// Dense solve of (I kron A + B^T kron I) vec(X) = vec(C). Test oracle only;
/// throws SizeError past kKroneckerMaxUnknowns unknowns.
Eigen::MatrixXd solve_kronecker_oracle(const SylvesterProblem& problem);

/// ||A X + X B - C||_F
double sylvester_residual(const SylvesterProblem& problem, const Eigen::MatrixXd& x);

} // namespace beamhop
