#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamhop/scenario.hpp"

namespace beamhop {

/// Binary N_c x N_slot illumination matrix; entry (i, t) = 1 when cell i is
/// illuminated in slot t.
class BeamHoppingPattern {
public:
  BeamHoppingPattern() = default;
  BeamHoppingPattern(int n_cells, int n_slot);
  /// Throws DomainError if any entry is not 0 or 1.
  explicit BeamHoppingPattern(Eigen::MatrixXi x);

  int n_cells() const { return static_cast<int>(x_.rows()); }
  int n_slot() const { return static_cast<int>(x_.cols()); }

  int operator()(int i, int t) const { return x_(i, t); }
  bool lit(int i, int t) const { return x_(i, t) != 0; }
  void set(int i, int t, bool on) { x_(i, t) = on ? 1 : 0; }

  const Eigen::MatrixXi& matrix() const { return x_; }
  Eigen::MatrixXd as_real() const { return x_.cast<double>(); }

  Eigen::VectorXi row_sums() const { return x_.rowwise().sum(); }
  Eigen::VectorXi col_sums() const { return x_.colwise().sum().transpose(); }

  /// Per-slot beam limit: every column sum <= n_b.
  bool capacity_ok(int n_b) const;
  /// Every cell illuminated at least once.
  bool coverage_ok() const;
  bool feasible(int n_b) const { return capacity_ok(n_b) && coverage_ok(); }

  bool operator==(const BeamHoppingPattern& other) const;

private:
  Eigen::MatrixXi x_;
};

/// Per-cell count of illuminated slots.
using BeamAllocation = Eigen::VectorXi;

/// Checks 1 <= b_i <= n_slot and sum(b) <= n_slot * n_b.
bool allocation_valid(const BeamAllocation& b, int n_slot, int n_b);

/// P_a = (1 - alpha / (n_r b))^(n - 1). Throws DomainError when b < 1 or the
/// base would be non-positive.
double collision_avoidance(double alpha, double n, int n_r, int b);

/// Markov-inequality lower bound on decoding success, per cell.
struct DecodingBound {
  Eigen::VectorXd raw;      ///< may be negative under heavy interference
  Eigen::VectorXd clamped;  ///< raw clamped to [0, 1]
  std::vector<std::uint8_t> infeasible; ///< g_ii rho <= gamma_th: cannot decode at all
};

/// Bound with explicit per-cell illumination counts `b` (the AO form, where b
/// need not equal the row sums of a fractional x). Requires b_i >= 1.
DecodingBound decoding_success_lower_bound(const Scenario& s, const Eigen::MatrixXd& x,
                                           const Eigen::VectorXd& b);

/// Bound with b taken as row sums; requires every cell illuminated.
DecodingBound decoding_success_lower_bound(const Scenario& s, const BeamHoppingPattern& x);

/// Closed form of the bound at the uniform fractional pattern x_i^t = b_i / N_slot.
Eigen::VectorXd uniform_decoding_lower_bound(const Scenario& s);

inline constexpr int kExactMaxCells = 6;
inline constexpr int kExactMaxDevices = 30;

/// Exact decoding success probability of `cell` by summing over the joint
/// binomial interferer counts on the tagged (slot, RB). Device counts are
/// rounded to the nearest integer >= 1. Throws SizeError beyond
/// kExactMaxCells cells or kExactMaxDevices devices in any cell.
double decoding_success_exact_small(const Scenario& s, const BeamHoppingPattern& x, int cell);

struct SuccessReport {
  Eigen::VectorXd p_a;
  Eigen::VectorXd p_d_low_raw;
  Eigen::VectorXd p_d_low;
  Eigen::VectorXd p_suc_low;
  std::vector<std::uint8_t> decoding_infeasible;
  std::vector<std::uint8_t> unilluminated;
  double min = 0.0;
  double mean = 0.0;
  std::optional<Eigen::VectorXd> p_suc_mc;
  std::optional<Eigen::VectorXd> mc_stderr;

  int n_cells() const { return static_cast<int>(p_suc_low.size()); }
  int argmin() const;
};

/// Lower bound P_a(b_i) * clamp(P_d_low) with b = row sums. Cells that are
/// never illuminated are flagged and reported with P_suc = 0.
SuccessReport success_lower_bound(const Scenario& s, const BeamHoppingPattern& x);

/// Same with an explicit allocation b (b need not match the row sums of x).
SuccessReport success_lower_bound(const Scenario& s, const Eigen::MatrixXd& x, const BeamAllocation& b);

inline constexpr const char* kReportSchema = "beamhop-report/1";

/// `cell_id,p_a,p_d_low_raw,p_d_low,p_suc_low[,p_suc_mc,mc_stderr]` with a
/// schema line on top and min/mean/flag comment lines at the end.
std::string report_to_csv(const SuccessReport& report);

/// Quadratic form of the summed decoding bound for a fixed allocation.
struct QuadraticForm {
  Eigen::MatrixXd g_tilde;  ///< zero diagonal, not symmetric in general
  Eigen::MatrixXd g;        ///< symmetrised and shifted to be PSD
  double lambda_min = 0.0;  ///< smallest eigenvalue of (g_tilde + g_tilde^T) / 2
  double shift = 0.0;       ///< total diagonal shift added: -lambda_min + safety
};

/// Builds G_tilde and its PSD shift G. Throws DomainError if any cell is
/// decoding-infeasible or b_i < 1.
QuadraticForm quadratic_matrix(const Scenario& s, const BeamAllocation& b);

/// sum_t x_t^T G x_t for the columns x_t of `x`.
double pattern_objective(const Eigen::MatrixXd& g, const Eigen::MatrixXd& x);

} // namespace beamhop
