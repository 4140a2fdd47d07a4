#include "beamhop/bisection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamhop/errors.hpp"

namespace beamhop {

namespace {

double floored(double p) { return std::clamp(p, kProbabilityFloor, 1.0); }

// P_a without the domain check: a saturated base yields zero.
double collision_or_zero(double alpha, double n, int n_r, int b) {
  const double q = alpha / (static_cast<double>(n_r) * b);
  if (n <= 1.0) {
    return 1.0;
  }
  if (q >= 1.0) {
    return 0.0;
  }
  return std::exp((n - 1.0) * std::log1p(-q));
}

} // namespace

double f_bar(double xi, double alpha, double n, int n_r, double p_d_low) {
  if (xi >= p_d_low) {
    return std::numeric_limits<double>::infinity();
  }
  if (n <= 1.0) {
    return 0.0;
  }
  const double ratio = xi > 0.0 ? std::exp((std::log(xi) - std::log(p_d_low)) / (n - 1.0)) : 0.0;
  return alpha / ((1.0 - ratio) * n_r);
}

BeamAllocation allocation_for(double xi, const Scenario& s, const Eigen::VectorXd& p_d_low) {
  const int n = s.n_cells();
  BeamAllocation b(n);
  const double cap = s.n_slot();
  for (int i = 0; i < n; ++i) {
    const double f = f_bar(xi, s.cell(i).activation, s.cell(i).demand, s.n_r(), floored(p_d_low(i)));
    const double v = std::min(std::max(std::ceil(f), 1.0), cap);
    b(i) = static_cast<int>(v);
  }
  return b;
}

Eigen::VectorXd weighted_collision_avoidance(const Scenario& s, const Eigen::VectorXd& p_d_low,
                                             const BeamAllocation& b) {
  Eigen::VectorXd w(s.n_cells());
  for (int i = 0; i < s.n_cells(); ++i) {
    w(i) = collision_or_zero(s.cell(i).activation, s.cell(i).demand, s.n_r(), b(i)) * floored(p_d_low(i));
  }
  return w;
}

BisectionResult bisect(const Scenario& s, const Eigen::VectorXd& p_d_low, const BisectionConfig& config) {
  const int n = s.n_cells();
  if (p_d_low.size() != n) {
    throw DomainError("p_d_low size does not match the scenario");
  }
  if (n > s.capacity()) {
    throw InfeasibleError("infeasible: " + std::to_string(n) + " cells exceed " +
                          std::to_string(s.capacity()) + " beam-slots");
  }
  const long long cap = s.capacity();

  BisectionResult r;
  r.xi_lower = 0.0;
  r.xi_upper = p_d_low.unaryExpr([](double p) { return floored(p); }).minCoeff();
  r.initial_upper = r.xi_upper;
  for (int k = 0; k < config.max_iter; ++k) {
    if (r.xi_upper - r.xi_lower < config.tolerance) {
      break;
    }
    const double mid = 0.5 * (r.xi_lower + r.xi_upper);
    const BeamAllocation b = allocation_for(mid, s, p_d_low);
    if (b.cast<long long>().sum() <= cap) {
      r.xi_lower = mid;
    } else {
      r.xi_upper = mid;
    }
    ++r.iterations;
  }
  r.b_raw = allocation_for(r.xi_lower, s, p_d_low);
  r.b = r.b_raw;

  if (config.fill_leftover) {
    long long total = r.b.cast<long long>().sum();
    Eigen::VectorXd w = weighted_collision_avoidance(s, p_d_low, r.b);
    while (total < cap) {
      int best = -1;
      for (int i = 0; i < n; ++i) {
        if (r.b(i) < s.n_slot() && (best < 0 || w(i) < w(best))) {
          best = i;
        }
      }
      if (best < 0) {
        break;
      }
      ++r.b(best);
      w(best) = collision_or_zero(s.cell(best).activation, s.cell(best).demand, s.n_r(), r.b(best)) *
                floored(p_d_low(best));
      ++total;
    }
  }
  return r;
}

bool step_condition_holds(const Scenario& s, const Eigen::VectorXd& p_d_low, const BisectionResult& r) {
  const long long lo = allocation_for(r.xi_lower, s, p_d_low).cast<long long>().sum();
  const long long hi = allocation_for(r.xi_upper, s, p_d_low).cast<long long>().sum();
  return hi - lo <= 1;
}

} // namespace beamhop
