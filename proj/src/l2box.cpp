#include "beamhop/l2box.hpp"

#include <algorithm>
#include <cmath>

#include "beamhop/errors.hpp"
#include "beamhop/metrics.hpp"

namespace beamhop {

L2BoxState L2BoxState::start(const Eigen::MatrixXd& x0, double rho, double gamma) {
  L2BoxState st;
  st.x = x0;
  st.z1 = x0;
  st.z2 = x0;
  st.y1 = Eigen::MatrixXd::Zero(x0.rows(), x0.cols());
  st.y2 = Eigen::MatrixXd::Zero(x0.rows(), x0.cols());
  st.y3 = Eigen::VectorXd::Zero(x0.cols());
  st.y4 = Eigen::VectorXd::Zero(x0.rows());
  st.rho1 = st.rho2 = st.rho3 = rho;
  st.gamma = gamma;
  return st;
}

Eigen::MatrixXd project_box(const Eigen::MatrixXd& m) { return m.cwiseMax(0.0).cwiseMin(1.0); }

Eigen::MatrixXd project_sphere(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.size();
  const double radius = std::sqrt(static_cast<double>(n)) / 2.0;
  Eigen::MatrixXd d = m.array() - 0.5;
  const double norm = d.norm();
  if (norm == 0.0) {
    if (n == 1) {
      d(0, 0) = 1.0;
    } else {
      d.setConstant(-1.0 / static_cast<double>(n - 1));
      d(0, 0) = 1.0;
    }
    return (d * (radius / d.norm())).array() + 0.5;
  }
  return (d * (radius / norm)).array() + 0.5;
}

SylvesterProblem sylvester_system(const L2BoxState& st, const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                                  int n_b) {
  const Eigen::Index n_slot = st.x.cols();
  SylvesterProblem p;
  p.a = 2.0 * g;
  p.a.diagonal().array() += st.rho1 + st.rho2;
  p.a.array() += st.rho3;
  p.b = Eigen::MatrixXd::Constant(n_slot, n_slot, st.rho3);
  p.c = st.rho1 * st.z1 + st.rho2 * st.z2 - st.y1 - st.y2;
  p.c.array() += st.rho3 * n_b;
  p.c.colwise() += st.rho3 * b;
  p.c.rowwise() -= st.y3.transpose();
  p.c.colwise() -= st.y4;
  return p;
}

Eigen::MatrixXd x_update_sylvester(const L2BoxState& st, const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                                   int n_b) {
  const SylvesterProblem p = sylvester_system(st, g, b, n_b);
  return solve_sylvester_rank_one(p.a, st.rho3, p.c);
}

double l2box_iteration(L2BoxState& st, const Eigen::MatrixXd& g, const Eigen::VectorXd& b, int n_b,
                       const StructuredSylvesterSolver* solver) {
  st.z1 = project_box(st.x + st.y1 / st.rho1);
  st.z2 = project_sphere(st.x + st.y2 / st.rho2);
  const SylvesterProblem p = sylvester_system(st, g, b, n_b);
  st.x = solver ? solver->solve(st.rho1 + st.rho2, st.rho3, p.c) : solve_sylvester_rank_one(p.a, st.rho3, p.c);
  const double residual = sylvester_residual(p, st.x);

  st.y1 += st.gamma * st.rho1 * (st.x - st.z1);
  st.y2 += st.gamma * st.rho2 * (st.x - st.z2);
  const Eigen::VectorXd col_gap = st.x.colwise().sum().transpose().array() - static_cast<double>(n_b);
  const Eigen::VectorXd row_gap = st.x.rowwise().sum() - b;
  st.y3 += st.gamma * st.rho3 * col_gap;
  st.y4 += st.gamma * st.rho3 * row_gap;
  ++st.iteration;
  return residual / std::max(p.c.norm(), 1e-300);
}

L2BoxResult solve_l2box(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, int n_b, const L2BoxConfig& config) {
  const Eigen::Index n_c = g.rows();
  if (g.cols() != n_c || b.size() != n_c) {
    throw DomainError("solve_l2box: G and b dimensions disagree");
  }
  if (n_c == 0 || n_b < 1) {
    throw DomainError("solve_l2box: empty problem");
  }
  const int n_slot = static_cast<int>(std::lround(b.sum() / n_b));
  const Eigen::MatrixXd x0 = config.x0 ? *config.x0 : start_point(config.start, b, n_slot, n_b, config.seed, config.start_noise);
  if (x0.rows() != n_c || x0.cols() != n_slot) {
    throw DomainError("solve_l2box: x0 has the wrong shape");
  }
  const double rho0 = config.rho_initial.value_or(
      default_rho1(Eigen::VectorXd::Ones(1), reachable_rho_floor(config.iterations, config.rho_growth, config.rho_cap)));
  L2BoxState st = L2BoxState::start(x0, rho0, config.gamma);

  std::optional<StructuredSylvesterSolver> solver;
  if (config.path == SylvesterPath::structured) {
    solver.emplace(g);
  }
  Incumbent incumbent(g, b, n_b);
  L2BoxResult res;
  for (int k = 0; k < config.iterations; ++k) {
    const double ratio = l2box_iteration(st, g, b, n_b, solver ? &*solver : nullptr);
    res.max_sylvester_residual_ratio = std::max(res.max_sylvester_residual_ratio, ratio);
    if (config.keep_best_feasible) {
      incumbent.offer(st.x, st.iteration);
    }
    res.residual1 = (st.x - st.z1).norm();
    res.residual2 = (st.x - st.z2).norm();
    if (config.record_trace) {
      res.trace.push_back({st.iteration, pattern_objective(g, st.x), res.residual1, res.residual2, st.rho1,
                           st.rho2, ratio});
    }
    const double next = std::min(st.rho1 * config.rho_growth, config.rho_cap);
    st.rho1 = st.rho2 = st.rho3 = next;
  }
  res.x_relaxed = st.x;
  if (incumbent.empty()) {
    res.x_binary = project_binary(st.x).cast<int>();
  } else {
    res.x_binary = incumbent.x().cast<int>();
    res.incumbent_iteration = incumbent.iteration();
  }
  return res;
}

} // namespace beamhop
