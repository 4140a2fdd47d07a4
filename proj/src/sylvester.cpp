#include "beamhop/sylvester.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "beamhop/errors.hpp"

namespace beamhop {

namespace {

void check_shapes(const SylvesterProblem& p) {
  if (p.a.rows() != p.a.cols() || p.b.rows() != p.b.cols()) {
    throw DomainError("Sylvester: A and B must be square");
  }
  if (p.c.rows() != p.a.rows() || p.c.cols() != p.b.rows()) {
    throw DomainError("Sylvester: C must be rows(A) x rows(B)");
  }
}

bool is_symmetric(const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

double spectral_scale(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double s = std::max(a.norm(), b.norm());
  return s > 0.0 ? s : 1.0;
}

template <typename VA, typename VB>
void check_gap(const VA& eig_a, const VB& eig_b, double scale) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eig_a.size(); ++i) {
    for (Eigen::Index j = 0; j < eig_b.size(); ++j) {
      gap = std::min(gap, std::abs(eig_a(i) + eig_b(j)));
    }
  }
  if (gap <= kSylvesterGapTolerance * scale) {
    throw SingularError("Sylvester: A and -B share an eigenvalue");
  }
}

// Diagonal block boundaries of a quasi-upper-triangular matrix.
std::vector<std::pair<Eigen::Index, Eigen::Index>> diagonal_blocks(const Eigen::MatrixXd& t) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
  const Eigen::Index n = t.rows();
  for (Eigen::Index i = 0; i < n;) {
    const Eigen::Index size = (i + 1 < n && t(i + 1, i) != 0.0) ? 2 : 1;
    blocks.emplace_back(i, size);
    i += size;
  }
  return blocks;
}

Eigen::MatrixXd solve_symmetric(const SylvesterProblem& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(p.a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(p.b);
  check_gap(ea.eigenvalues(), eb.eigenvalues(), spectral_scale(p.a, p.b));
  const Eigen::MatrixXd& u = ea.eigenvectors();
  const Eigen::MatrixXd& v = eb.eigenvectors();
  Eigen::MatrixXd y = u.transpose() * p.c * v;
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      y(i, j) /= ea.eigenvalues()(i) + eb.eigenvalues()(j);
    }
  }
  return u * y * v.transpose();
}

} // namespace

Eigen::MatrixXd solve_bartels_stewart_schur(const SylvesterProblem& p) {
  check_shapes(p);
  Eigen::RealSchur<Eigen::MatrixXd> sa(p.a);
  Eigen::RealSchur<Eigen::MatrixXd> sb(p.b);
  if (sa.info() != Eigen::Success || sb.info() != Eigen::Success) {
    throw SingularError("Sylvester: Schur decomposition did not converge");
  }
  {
    Eigen::EigenSolver<Eigen::MatrixXd> ea(p.a, false);
    Eigen::EigenSolver<Eigen::MatrixXd> eb(p.b, false);
    check_gap(ea.eigenvalues(), eb.eigenvalues(), spectral_scale(p.a, p.b));
  }
  const Eigen::MatrixXd& t = sa.matrixT();
  const Eigen::MatrixXd& s = sb.matrixT();
  const Eigen::MatrixXd& u = sa.matrixU();
  const Eigen::MatrixXd& v = sb.matrixU();

  const Eigen::MatrixXd f = u.transpose() * p.c * v;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(f.rows(), f.cols());
  const auto row_blocks = diagonal_blocks(t);
  const auto col_blocks = diagonal_blocks(s);

  for (const auto& [k0, q] : col_blocks) {
    for (auto it = row_blocks.rbegin(); it != row_blocks.rend(); ++it) {
      const auto [i0, pr] = *it;
      const Eigen::Index below = t.rows() - (i0 + pr);
      Eigen::MatrixXd rhs = f.block(i0, k0, pr, q);
      if (below > 0) {
        rhs -= t.block(i0, i0 + pr, pr, below) * y.block(i0 + pr, k0, below, q);
      }
      if (k0 > 0) {
        rhs -= y.block(i0, 0, pr, k0) * s.block(0, k0, k0, q);
      }
      // (I_q kron T_ii + S_kk^T kron I_p) vec(Y_ik) = vec(rhs)
      const Eigen::Index m = pr * q;
      Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(m, m);
      const Eigen::MatrixXd tii = t.block(i0, i0, pr, pr);
      const Eigen::MatrixXd skk = s.block(k0, k0, q, q);
      for (Eigen::Index c = 0; c < q; ++c) {
        sys.block(c * pr, c * pr, pr, pr) += tii;
        for (Eigen::Index r = 0; r < q; ++r) {
          sys.block(c * pr, r * pr, pr, pr) += skk(r, c) * Eigen::MatrixXd::Identity(pr, pr);
        }
      }
      const Eigen::VectorXd vec_rhs = Eigen::Map<const Eigen::VectorXd>(rhs.data(), m);
      const Eigen::VectorXd sol = sys.fullPivLu().solve(vec_rhs);
      y.block(i0, k0, pr, q) = Eigen::Map<const Eigen::MatrixXd>(sol.data(), pr, q);
    }
  }
  return u * y * v.transpose();
}

Eigen::MatrixXd solve_bartels_stewart(const SylvesterProblem& p) {
  check_shapes(p);
  if (is_symmetric(p.a) && is_symmetric(p.b)) {
    return solve_symmetric(p);
  }
  return solve_bartels_stewart_schur(p);
}

Eigen::MatrixXd solve_sylvester_rank_one(const Eigen::MatrixXd& a, double beta, const Eigen::MatrixXd& c) {
  if (a.rows() != a.cols() || c.rows() != a.rows()) {
    throw DomainError("Sylvester: shape mismatch");
  }
  const Eigen::Index n = c.cols();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a);
  const Eigen::VectorXd& lam = ea.eigenvalues();
  const double top = beta * static_cast<double>(n);
  const double scale = std::max(a.norm(), std::abs(top) > 0.0 ? std::abs(top) : 1.0);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  mu(0) = top;
  check_gap(lam, mu, scale);

  // Split C's rows into the constant direction and its complement.
  const Eigen::VectorXd row_mean = c.rowwise().mean();
  const Eigen::MatrixXd c_perp = c.colwise() - row_mean;
  const Eigen::MatrixXd& u = ea.eigenvectors();
  const Eigen::VectorXd m_par = (u.transpose() * row_mean).cwiseQuotient((lam.array() + top).matrix());
  const Eigen::MatrixXd m_perp = lam.cwiseInverse().asDiagonal() * (u.transpose() * c_perp);
  return (u * m_perp).colwise() + u * m_par;
}

StructuredSylvesterSolver::StructuredSylvesterSolver(const Eigen::MatrixXd& g) {
  if (g.rows() != g.cols()) {
    throw DomainError("Sylvester: G must be square");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(g);
  v_ = eg.eigenvectors();
  lambda_ = eg.eigenvalues();
  v_ones_ = v_.transpose() * Eigen::VectorXd::Ones(g.rows());
  scale_ = std::max(1.0, g.norm());
}

// (V diag(2 lambda + shift) V^T + beta 1 1^T)^{-1} r
Eigen::MatrixXd StructuredSylvesterSolver::apply_inverse(double shift, double beta, const Eigen::MatrixXd& r) const {
  const Eigen::VectorXd d = (2.0 * lambda_.array() + shift).matrix();
  if (d.minCoeff() <= kSylvesterGapTolerance * std::max(scale_, std::abs(shift))) {
    throw SingularError("Sylvester: shifted operator is not positive definite");
  }
  const Eigen::VectorXd dinv = d.cwiseInverse();
  Eigen::MatrixXd out = v_ * (dinv.asDiagonal() * (v_.transpose() * r));
  if (beta != 0.0) {
    const Eigen::VectorXd w = v_ * dinv.cwiseProduct(v_ones_);
    const double denom = 1.0 + beta * w.sum();
    const Eigen::RowVectorXd col_totals = out.colwise().sum();
    out -= (beta / denom) * w * col_totals;
  }
  return out;
}

Eigen::MatrixXd StructuredSylvesterSolver::solve(double sigma, double beta, const Eigen::MatrixXd& c) const {
  if (c.rows() != lambda_.size()) {
    throw DomainError("Sylvester: C row count does not match G");
  }
  const double n = static_cast<double>(c.cols());
  const Eigen::VectorXd row_mean = c.rowwise().mean();
  const Eigen::MatrixXd c_perp = c.colwise() - row_mean;
  const Eigen::MatrixXd x_perp = apply_inverse(sigma, beta, c_perp);
  const Eigen::VectorXd x_par = apply_inverse(sigma + beta * n, beta, row_mean);
  return x_perp.colwise() + x_par;
}

Eigen::MatrixXd solve_kronecker_oracle(const SylvesterProblem& p) {
  check_shapes(p);
  const Eigen::Index m = p.a.rows();
  const Eigen::Index n = p.b.rows();
  if (m * n > kKroneckerMaxUnknowns) {
    throw SizeError("Kronecker oracle limited to 400 unknowns");
  }
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m * n, m * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k.block(j * m, j * m, m, m) += p.a;
    for (Eigen::Index i = 0; i < n; ++i) {
      k.block(j * m, i * m, m, m).diagonal().array() += p.b(i, j);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  if (!lu.isInvertible()) {
    throw SingularError("Kronecker system is singular");
  }
  const Eigen::VectorXd vec_c = Eigen::Map<const Eigen::VectorXd>(p.c.data(), m * n);
  const Eigen::VectorXd x = lu.solve(vec_c);
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), m, n);
}

double sylvester_residual(const SylvesterProblem& p, const Eigen::MatrixXd& x) {
  return (p.a * x + x * p.b - p.c).norm();
}

} // namespace beamhop
