#include "beamhop/ao.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <sstream>

#include "beamhop/errors.hpp"
#include "format.hpp"

namespace beamhop {

std::string AoTrace::to_csv() const {
  std::ostringstream out;
  out << "# schema: " << kAoTraceSchema << "\n";
  out << "iter,min_psuc,mean_psuc,residual1,residual2,ms\n";
  for (const auto& it : iterations) {
    out << it.iter << ',' << fmt_double(it.min_psuc) << ',' << fmt_double(it.mean_psuc) << ','
        << fmt_double(it.residual1) << ',' << fmt_double(it.residual2) << ',' << fmt_double(it.ms) << '\n';
  }
  return out.str();
}

AoStart initialize(const Scenario& s) {
  for (int i = 0; i < s.n_cells(); ++i) {
    if (s.decoding_margin(i) <= 0.0) {
      throw InfeasibleError("cell " + std::to_string(s.cell(i).id) +
                            " cannot be decoded: g_ii * rho does not exceed gamma_th");
    }
  }
  AoStart start;
  start.p_d_low = uniform_decoding_lower_bound(s).cwiseMax(0.0).cwiseMin(1.0);
  BisectionConfig cfg;
  const BisectionResult br = bisect(s, start.p_d_low, cfg);
  start.x_fractional = uniform_start(br.b.cast<double>(), s.n_slot());
  return start;
}

namespace {

using Scorer = std::function<Eigen::VectorXd(const Eigen::MatrixXi&)>;

BeamHoppingPattern repair_with(Eigen::MatrixXi x, int n_b, const Scorer& score_of, bool refresh) {
  const int n_c = static_cast<int>(x.rows());
  const int n_slot = static_cast<int>(x.cols());
  if (n_b > n_c || static_cast<long long>(n_slot) * n_b < n_c) {
    throw InfeasibleError("repair needs n_cells <= n_slot * n_b and n_b <= n_cells");
  }
  x = x.unaryExpr([](int v) { return v != 0 ? 1 : 0; });
  Eigen::VectorXd score = score_of(x);

  auto pick = [&](int t, int want_lit, bool highest) {
    int best = -1;
    for (int i = 0; i < n_c; ++i) {
      if (x(i, t) != want_lit) {
        continue;
      }
      if (best < 0 || (highest ? score(i) > score(best) : score(i) < score(best))) {
        best = i;
      }
    }
    return best;
  };

  for (int t = 0; t < n_slot; ++t) {
    int c = x.col(t).sum();
    while (c < n_b) {
      x(pick(t, 0, false), t) = 1;
      ++c;
      if (refresh) {
        score = score_of(x);
      }
    }
    while (c > n_b) {
      x(pick(t, 1, true), t) = 0;
      --c;
      if (refresh) {
        score = score_of(x);
      }
    }
  }

  for (int i = 0; i < n_c; ++i) {
    if (x.row(i).sum() > 0) {
      continue;
    }
    const Eigen::VectorXi rows = x.rowwise().sum();
    int donor = -1;
    for (int j = 0; j < n_c; ++j) {
      if (rows(j) >= 2 && (donor < 0 || score(j) > score(donor))) {
        donor = j;
      }
    }
    if (donor < 0) {
      throw InternalError("repair found no donor cell");
    }
    int slot = 0;
    while (x(donor, slot) == 0) {
      ++slot;
    }
    x(donor, slot) = 0;
    x(i, slot) = 1;
    if (refresh) {
      score = score_of(x);
    }
  }
  return BeamHoppingPattern(std::move(x));
}

} // namespace

BeamHoppingPattern repair_pattern(const Eigen::MatrixXi& x, int n_b, const Eigen::VectorXd& score) {
  if (score.size() != x.rows()) {
    throw DomainError("repair: score length does not match the pattern");
  }
  return repair_with(x, n_b, [&](const Eigen::MatrixXi&) { return score; }, false);
}

BeamHoppingPattern repair(const Eigen::MatrixXi& x, const Scenario& s, const Eigen::VectorXd& p_suc_low,
                          RepairPolicy policy) {
  if (x.rows() != s.n_cells() || x.cols() != s.n_slot()) {
    throw DomainError("repair: pattern dimensions do not match the scenario");
  }
  if (policy == RepairPolicy::held_fixed) {
    return repair_pattern(x, s.n_b(), p_suc_low);
  }
  bool first = true;
  const Scorer score_of = [&](const Eigen::MatrixXi& current) -> Eigen::VectorXd {
    if (first) {
      first = false;
      return p_suc_low;
    }
    return success_lower_bound(s, BeamHoppingPattern(current)).p_suc_low;
  };
  return repair_with(x, s.n_b(), score_of, true);
}

AoResult optimize(const Scenario& s, const AoConfig& config) {
  if (config.n_ao < 1) {
    throw DomainError("n_ao must be at least 1");
  }
  if (s.n_cells() > s.capacity()) {
    throw InfeasibleError("infeasible: " + std::to_string(s.n_cells()) + " cells exceed " +
                          std::to_string(s.capacity()) + " beam-slots");
  }
  using clock = std::chrono::steady_clock;
  Eigen::VectorXd p_d = initialize(s).p_d_low;

  AdmmConfig admm = config.admm;
  L2BoxConfig l2box = config.l2box;
  if (config.demand_scaled_rho) {
    if (!admm.rho1_initial) {
      admm.rho1_initial =
          default_rho1(s.demands(), reachable_rho_floor(admm.iterations, admm.rho_growth, admm.rho_cap));
    }
    if (!l2box.rho_initial) {
      l2box.rho_initial =
          default_rho1(s.demands(), reachable_rho_floor(l2box.iterations, l2box.rho_growth, l2box.rho_cap));
    }
  }

  AoResult best;
  bool have_best = false;
  std::optional<Eigen::MatrixXd> previous;
  for (int k = 1; k <= config.n_ao; ++k) {
    const auto t0 = clock::now();
    const BisectionResult br = bisect(s, p_d, config.bisection);
    const QuadraticForm q = quadratic_matrix(s, br.b);
    const Eigen::VectorXd b = br.b.cast<double>();

    Eigen::MatrixXi xb;
    double r1 = 0.0;
    double r2 = 0.0;
    std::vector<SolverIteration> inner;
    if (config.warm_start && previous) {
      admm.x0 = previous;
      l2box.x0 = previous;
    }
    if (config.solver == InnerSolver::admm) {
      AdmmResult res = solve_admm(q.g, b, s.n_b(), admm);
      xb = std::move(res.x_binary);
      r1 = res.residual1;
      r2 = res.residual2;
      inner = std::move(res.trace);
    } else {
      L2BoxResult res = solve_l2box(q.g, b, s.n_b(), l2box);
      xb = std::move(res.x_binary);
      r1 = res.residual1;
      r2 = res.residual2;
      inner = std::move(res.trace);
    }

    const Eigen::VectorXd p_suc = success_lower_bound(s, xb.cast<double>(), br.b).p_suc_low;
    BeamHoppingPattern pattern = repair(xb, s, p_suc, config.repair);
    SuccessReport report = success_lower_bound(s, pattern);
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    best.trace.iterations.push_back({k, br.b, report.min, report.mean, r1, r2, ms});
    best.inner_traces.push_back(std::move(inner));
    p_d = decoding_success_lower_bound(s, pattern).clamped;
    previous = pattern.as_real();
    if (!have_best || report.min > best.report.min) {
      have_best = true;
      best.b = pattern.row_sums();
      best.x = std::move(pattern);
      best.report = std::move(report);
      best.best_iteration = k;
    }
  }
  return best;
}

} // namespace beamhop
