#include "beamhop/admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "beamhop/errors.hpp"
#include "beamhop/metrics.hpp"
#include "beamhop/sylvester.hpp"
#include "format.hpp"

namespace beamhop {

std::string solver_trace_to_csv(const std::vector<SolverIteration>& trace) {
  std::ostringstream out;
  out << "# schema: " << kSolverTraceSchema << "\n";
  out << "iter,objective,residual1,residual2,rho1,rho2,sylvester_residual\n";
  for (const auto& r : trace) {
    out << r.iter << ',' << fmt_double(r.objective) << ',' << fmt_double(r.residual1) << ','
        << fmt_double(r.residual2) << ',' << fmt_double(r.rho1) << ',' << fmt_double(r.rho2) << ','
        << fmt_double(r.sylvester_residual) << '\n';
  }
  return out.str();
}

double reachable_rho_floor(int iterations, double growth, double cap) {
  return cap / std::pow(growth, std::max(iterations, 0));
}

double default_rho1(const Eigen::VectorXd& demands, double floor) {
  if (demands.size() == 0 || demands.maxCoeff() <= 0.0) {
    return 0.1 + floor;
  }
  return 0.1 * demands.minCoeff() / demands.maxCoeff() + floor;
}

Eigen::MatrixXd project_binary(const Eigen::MatrixXd& m) {
  return m.unaryExpr([](double v) { return v >= 0.5 ? 1.0 : 0.0; });
}

bool meets_sum_constraints(const Eigen::MatrixXd& x, const Eigen::VectorXd& b, int n_b) {
  if (x.rows() != b.size()) {
    return false;
  }
  for (Eigen::Index t = 0; t < x.cols(); ++t) {
    if (std::lround(x.col(t).sum()) != n_b) {
      return false;
    }
  }
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (std::lround(x.row(i).sum()) != std::lround(b(i))) {
      return false;
    }
  }
  return true;
}

void Incumbent::offer(const Eigen::MatrixXd& x, int iteration) {
  Eigen::MatrixXd r = project_binary(x);
  if (!meets_sum_constraints(r, b_, n_b_)) {
    return;
  }
  const double f = pattern_objective(g_, r);
  if (iteration_ == 0 || f < objective_) {
    x_ = std::move(r);
    objective_ = f;
    iteration_ = iteration;
  }
}

Eigen::MatrixXd project_affine(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, int n_b) {
  const Eigen::Index n_c = m.rows();
  const Eigen::Index n_slot = m.cols();
  if (b.size() != n_c) {
    throw DomainError("project_affine: b has the wrong length");
  }
  const double target = static_cast<double>(n_slot) * n_b;
  if (std::abs(b.sum() - target) > 1e-9 * std::max(1.0, target)) {
    throw DomainError("project_affine: sum(b) must equal n_slot * n_b");
  }
  // Z = M + u 1^T + 1 v^T with the gauge fixed by sum(u) = 0.
  const Eigen::VectorXd r = m.rowwise().sum();
  const Eigen::RowVectorXd c = m.colwise().sum();
  const double total = m.sum();
  const Eigen::RowVectorXd v = (Eigen::RowVectorXd::Constant(n_slot, n_b) - c) / static_cast<double>(n_c);
  const double v_sum = (b.sum() - total) / static_cast<double>(n_c);
  const Eigen::VectorXd u = (b - r - Eigen::VectorXd::Constant(n_c, v_sum)) / static_cast<double>(n_slot);
  Eigen::MatrixXd z = m;
  z.colwise() += u;
  z.rowwise() += v;
  return z;
}

Eigen::MatrixXd x_update(const Eigen::MatrixXd& z1, const Eigen::MatrixXd& z2, const Eigen::MatrixXd& y1,
                         const Eigen::MatrixXd& y2, const Eigen::MatrixXd& g, double rho1, double rho2) {
  const StructuredSylvesterSolver solver(g);
  return solver.solve(rho1 + rho2, 0.0, rho1 * z1 + rho2 * z2 - y1 - y2);
}

Eigen::MatrixXd uniform_start(const Eigen::VectorXd& b, int n_slot) {
  Eigen::MatrixXd x(b.size(), n_slot);
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    x.row(i).setConstant(b(i) / n_slot);
  }
  return x;
}

Eigen::MatrixXd staggered_start(const Eigen::VectorXd& b, int n_slot, int n_b) {
  const double target = static_cast<double>(n_slot) * n_b;
  if (std::abs(b.sum() - target) > 1e-9 * std::max(1.0, target)) {
    throw DomainError("staggered_start: sum(b) must equal n_slot * n_b");
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(b.size(), n_slot);
  long long pos = 0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const long long count = std::llround(b(i));
    if (count > n_slot) {
      throw DomainError("staggered_start: b_i exceeds n_slot");
    }
    for (long long k = 0; k < count; ++k, ++pos) {
      x(i, static_cast<Eigen::Index>(pos % n_slot)) = 1.0;
    }
  }
  return x;
}

Eigen::MatrixXd perturbed_start(const Eigen::VectorXd& b, int n_slot, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-noise, noise);
  Eigen::MatrixXd x = uniform_start(b, n_slot);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      x(i, j) += dist(rng);
    }
  }
  return x;
}

Eigen::MatrixXd start_point(StartPoint kind, const Eigen::VectorXd& b, int n_slot, int n_b, std::uint64_t seed,
                            double noise) {
  switch (kind) {
  case StartPoint::uniform:
    return uniform_start(b, n_slot);
  case StartPoint::staggered:
    return staggered_start(b, n_slot, n_b);
  case StartPoint::blended:
    return 0.5 * (uniform_start(b, n_slot) + staggered_start(b, n_slot, n_b));
  case StartPoint::perturbed:
    return perturbed_start(b, n_slot, noise, seed);
  }
  throw InternalError("unhandled start point");
}

AdmmResult solve_admm(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, int n_b, const AdmmConfig& config) {
  const Eigen::Index n_c = g.rows();
  if (g.cols() != n_c || b.size() != n_c) {
    throw DomainError("solve_admm: G and b dimensions disagree");
  }
  if (n_c == 0 || n_b < 1) {
    throw DomainError("solve_admm: empty problem");
  }
  const int n_slot = static_cast<int>(std::lround(b.sum() / n_b));

  AdmmState st;
  st.x = config.x0 ? *config.x0 : start_point(config.start, b, n_slot, n_b, config.seed, config.start_noise);
  if (st.x.rows() != n_c || st.x.cols() != n_slot) {
    throw DomainError("solve_admm: x0 has the wrong shape");
  }
  st.y1 = Eigen::MatrixXd::Zero(n_c, n_slot);
  st.y2 = Eigen::MatrixXd::Zero(n_c, n_slot);
  st.rho1 = config.rho1_initial.value_or(
      default_rho1(Eigen::VectorXd::Ones(1), reachable_rho_floor(config.iterations, config.rho_growth, config.rho_cap)));
  st.rho2 = config.rho2_ratio * st.rho1;
  st.gamma = config.gamma;

  const StructuredSylvesterSolver solver(g);
  Incumbent incumbent(g, b, n_b);
  AdmmResult res;
  for (int k = 0; k < config.iterations; ++k) {
    st.z1 = project_binary(st.x + st.y1 / st.rho1);
    st.z2 = project_affine(st.x + st.y2 / st.rho2, b, n_b);
    st.x = solver.solve(st.rho1 + st.rho2, 0.0, st.rho1 * st.z1 + st.rho2 * st.z2 - st.y1 - st.y2);
    st.y1 += st.gamma * st.rho1 * (st.x - st.z1);
    st.y2 += st.gamma * st.rho2 * (st.x - st.z2);
    st.iteration = k + 1;
    if (config.keep_best_feasible) {
      incumbent.offer(st.x, st.iteration);
    }

    res.residual1 = (st.x - st.z1).norm();
    res.residual2 = (st.x - st.z2).norm();
    if (config.record_trace) {
      res.trace.push_back({st.iteration, pattern_objective(g, st.x), res.residual1, res.residual2, st.rho1,
                           st.rho2, std::numeric_limits<double>::quiet_NaN()});
    }
    st.rho1 = std::min(st.rho1 * config.rho_growth, config.rho_cap);
    st.rho2 = std::min(st.rho2 * config.rho_growth, config.rho_cap);
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
