#include "beamhop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beamhop/errors.hpp"
#include "format.hpp"

namespace beamhop {

// ---- BeamHoppingPattern ----------------------------------------------------

BeamHoppingPattern::BeamHoppingPattern(int n_cells, int n_slot)
    : x_(Eigen::MatrixXi::Zero(n_cells, n_slot)) {}

BeamHoppingPattern::BeamHoppingPattern(Eigen::MatrixXi x) : x_(std::move(x)) {
  if (((x_.array() != 0) && (x_.array() != 1)).any()) {
    throw DomainError("beam-hopping pattern entries must be 0 or 1");
  }
}

bool BeamHoppingPattern::capacity_ok(int n_b) const {
  return x_.cols() == 0 || x_.colwise().sum().maxCoeff() <= n_b;
}

bool BeamHoppingPattern::coverage_ok() const {
  return x_.rows() == 0 || x_.rowwise().sum().minCoeff() >= 1;
}

bool BeamHoppingPattern::operator==(const BeamHoppingPattern& other) const {
  return x_.rows() == other.x_.rows() && x_.cols() == other.x_.cols() && x_ == other.x_;
}

bool allocation_valid(const BeamAllocation& b, int n_slot, int n_b) {
  if (b.size() == 0) {
    return false;
  }
  return b.minCoeff() >= 1 && b.maxCoeff() <= n_slot &&
         static_cast<long long>(b.sum()) <= static_cast<long long>(n_slot) * n_b;
}

// ---- collision / decoding --------------------------------------------------

double collision_avoidance(double alpha, double n, int n_r, int b) {
  if (b < 1 || n_r < 1) {
    throw DomainError("collision avoidance needs b >= 1 and n_r >= 1");
  }
  const double q = alpha / (static_cast<double>(n_r) * b);
  if (q >= 1.0) {
    throw DomainError("alpha / (n_r b) must be < 1");
  }
  if (n <= 1.0) {
    return 1.0;
  }
  return std::exp((n - 1.0) * std::log1p(-q));
}

DecodingBound decoding_success_lower_bound(const Scenario& s, const Eigen::MatrixXd& x,
                                           const Eigen::VectorXd& b) {
  const int n = s.n_cells();
  if (x.rows() != n || b.size() != n) {
    throw DomainError("pattern / allocation size does not match the scenario");
  }
  if (b.minCoeff() < 1.0) {
    throw DomainError("decoding bound needs every b_i >= 1");
  }
  const Eigen::VectorXd load = s.demands().cwiseProduct(s.activations()).cwiseQuotient(b);
  const Eigen::MatrixXd overlap = x * x.transpose();
  const double n_r = s.n_r();

  DecodingBound out;
  out.raw.resize(n);
  out.infeasible.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const double margin = s.decoding_margin(i);
    if (margin <= 0.0) {
      out.raw(i) = 0.0;
      out.infeasible[static_cast<std::size_t>(i)] = 1;
      continue;
    }
    double interference = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) {
        interference += overlap(i, j) * s.gain(i, j) * load(j);
      }
    }
    out.raw(i) = 1.0 - interference / (b(i) * n_r * margin);
  }
  out.clamped = out.raw.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

DecodingBound decoding_success_lower_bound(const Scenario& s, const BeamHoppingPattern& x) {
  if (!x.coverage_ok()) {
    throw DomainError("decoding bound needs every cell illuminated at least once");
  }
  return decoding_success_lower_bound(s, x.as_real(), x.row_sums().cast<double>());
}

Eigen::VectorXd uniform_decoding_lower_bound(const Scenario& s) {
  const int n = s.n_cells();
  const Eigen::VectorXd load = s.demands().cwiseProduct(s.activations());
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const double margin = s.decoding_margin(i);
    if (margin <= 0.0) {
      throw DomainError("cell " + std::to_string(i) + " is decoding-infeasible (g_ii rho <= gamma_th)");
    }
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) {
        sum += s.gain(i, j) * load(j);
      }
    }
    out(i) = 1.0 - sum / (s.n_slot() * s.n_r() * margin);
  }
  return out;
}

namespace {

struct Interferer {
  double gain;
  std::vector<double> pmf;
};

std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  double choose = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      choose = choose * (n - k + 1) / k;
    }
    pmf[static_cast<std::size_t>(k)] = choose * std::pow(p, k) * std::pow(1.0 - p, n - k);
  }
  return pmf;
}

// P[sum_j k_j g_j < margin]; gains are positive so partial sums only grow.
double probability_below(const std::vector<Interferer>& terms, std::size_t idx, double partial,
                         double margin) {
  if (idx == terms.size()) {
    return partial < margin ? 1.0 : 0.0;
  }
  const Interferer& t = terms[idx];
  double total = 0.0;
  for (std::size_t k = 0; k < t.pmf.size(); ++k) {
    const double value = partial + static_cast<double>(k) * t.gain;
    if (value >= margin) {
      break;
    }
    total += t.pmf[k] * probability_below(terms, idx + 1, value, margin);
  }
  return total;
}

int device_count(double demand) { return std::max(1, static_cast<int>(std::lround(demand))); }

} // namespace

double decoding_success_exact_small(const Scenario& s, const BeamHoppingPattern& x, int cell) {
  const int n = s.n_cells();
  if (n > kExactMaxCells) {
    throw SizeError("exact decoding probability supports at most 6 cells");
  }
  if (x.n_cells() != n) {
    throw DomainError("pattern size does not match the scenario");
  }
  if (cell < 0 || cell >= n) {
    throw DomainError("cell index out of range");
  }
  for (int j = 0; j < n; ++j) {
    if (device_count(s.cell(j).demand) > kExactMaxDevices) {
      throw SizeError("exact decoding probability supports at most 30 devices per cell");
    }
  }
  const Eigen::VectorXi b = x.row_sums();
  if (b(cell) == 0) {
    throw DomainError("cell is never illuminated");
  }
  const double margin = s.decoding_margin(cell);
  if (margin <= 0.0) {
    return 0.0;
  }
  double acc = 0.0;
  for (int t = 0; t < x.n_slot(); ++t) {
    if (!x.lit(cell, t)) {
      continue;
    }
    std::vector<Interferer> terms;
    for (int j = 0; j < n; ++j) {
      if (j == cell || !x.lit(j, t)) {
        continue;
      }
      const double p = s.cell(j).activation / (static_cast<double>(s.n_r()) * b(j));
      terms.push_back({s.gain(cell, j), binomial_pmf(device_count(s.cell(j).demand), p)});
    }
    acc += probability_below(terms, 0, 0.0, margin);
  }
  return acc / b(cell);
}

// ---- success report --------------------------------------------------------

int SuccessReport::argmin() const {
  Eigen::Index idx = 0;
  p_suc_low.minCoeff(&idx);
  return static_cast<int>(idx);
}

namespace {

void finish(SuccessReport& r) {
  r.p_suc_low = r.p_a.cwiseProduct(r.p_d_low);
  for (std::size_t i = 0; i < r.unilluminated.size(); ++i) {
    if (r.unilluminated[i]) {
      r.p_suc_low(static_cast<Eigen::Index>(i)) = 0.0;
    }
  }
  r.min = r.p_suc_low.minCoeff();
  r.mean = r.p_suc_low.mean();
}

} // namespace

SuccessReport success_lower_bound(const Scenario& s, const Eigen::MatrixXd& x, const BeamAllocation& b) {
  const int n = s.n_cells();
  if (b.size() != n) {
    throw DomainError("allocation size does not match the scenario");
  }
  const DecodingBound d = decoding_success_lower_bound(s, x, b.cast<double>());
  SuccessReport r;
  r.p_a.resize(n);
  for (int i = 0; i < n; ++i) {
    r.p_a(i) = collision_avoidance(s.cell(i).activation, s.cell(i).demand, s.n_r(), b(i));
  }
  r.p_d_low_raw = d.raw;
  r.p_d_low = d.clamped;
  r.decoding_infeasible = d.infeasible;
  r.unilluminated.assign(static_cast<std::size_t>(n), 0);
  finish(r);
  return r;
}

SuccessReport success_lower_bound(const Scenario& s, const BeamHoppingPattern& x) {
  const int n = s.n_cells();
  if (x.n_cells() != n || x.n_slot() != s.n_slot()) {
    throw DomainError("pattern dimensions do not match the scenario");
  }
  const Eigen::VectorXi rows = x.row_sums();
  // Unlit cells contribute nothing as interferers; give them a unit count so
  // the shared formula stays defined and zero them afterwards.
  const Eigen::VectorXi b = rows.cwiseMax(1);
  SuccessReport r = success_lower_bound(s, x.as_real(), b);
  for (int i = 0; i < n; ++i) {
    if (rows(i) == 0) {
      r.unilluminated[static_cast<std::size_t>(i)] = 1;
      r.p_a(i) = 0.0;
    }
  }
  finish(r);
  return r;
}

std::string report_to_csv(const SuccessReport& r) {
  std::ostringstream out;
  out << "# schema: " << kReportSchema << '\n';
  const bool mc = r.p_suc_mc.has_value() && r.mc_stderr.has_value();
  out << "cell_id,p_a,p_d_low_raw,p_d_low,p_suc_low" << (mc ? ",p_suc_mc,mc_stderr" : "") << '\n';
  for (int i = 0; i < r.n_cells(); ++i) {
    out << i << ',' << fmt_double(r.p_a(i)) << ',' << fmt_double(r.p_d_low_raw(i)) << ','
        << fmt_double(r.p_d_low(i)) << ',' << fmt_double(r.p_suc_low(i));
    if (mc) {
      out << ',' << fmt_double((*r.p_suc_mc)(i)) << ',' << fmt_double((*r.mc_stderr)(i));
    }
    out << '\n';
  }
  out << "# min," << fmt_double(r.min) << '\n';
  out << "# mean," << fmt_double(r.mean) << '\n';
  auto list = [](const std::vector<std::uint8_t>& flags) {
    std::string s;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (flags[i]) {
        s += (s.empty() ? "" : ";") + std::to_string(i);
      }
    }
    return s;
  };
  if (const auto u = list(r.unilluminated); !u.empty()) {
    out << "# unilluminated," << u << '\n';
  }
  if (const auto d = list(r.decoding_infeasible); !d.empty()) {
    out << "# decoding_infeasible," << d << '\n';
  }
  return out.str();
}

// ---- quadratic form --------------------------------------------------------

QuadraticForm quadratic_matrix(const Scenario& s, const BeamAllocation& b) {
  const int n = s.n_cells();
  if (b.size() != n || b.minCoeff() < 1) {
    throw DomainError("quadratic matrix needs b_i >= 1 for every cell");
  }
  QuadraticForm q;
  q.g_tilde = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double margin = s.decoding_margin(i);
    if (margin <= 0.0) {
      throw DomainError("cell " + std::to_string(i) + " is decoding-infeasible (g_ii rho <= gamma_th)");
    }
    const double p_a = collision_avoidance(s.cell(i).activation, s.cell(i).demand, s.n_r(), b(i));
    for (int j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      q.g_tilde(i, j) = p_a * s.gain(i, j) * s.cell(j).demand * s.cell(j).activation /
                        (static_cast<double>(b(i)) * b(j) * s.n_r() * margin);
    }
  }
  const Eigen::MatrixXd g_bar = 0.5 * (q.g_tilde + q.g_tilde.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g_bar, Eigen::EigenvaluesOnly);
  q.lambda_min = eig.eigenvalues()(0);
  const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  q.shift = -q.lambda_min + 1e-12 * scale;
  q.g = g_bar;
  q.g.diagonal().array() += q.shift;
  return q;
}

double pattern_objective(const Eigen::MatrixXd& g, const Eigen::MatrixXd& x) {
  return x.cwiseProduct(g * x).sum();
}

} // namespace beamhop
