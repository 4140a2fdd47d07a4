#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beamhop/methods.hpp"
#include "beamhop/scenario.hpp"

namespace beamhop {

struct SweepConfig {
  /// Per-position scenarios reuse this template; only the nadir changes.
  GeneratorConfig base = GeneratorConfig::desk();
  /// Region centre and anchor of the fixed tiling; defaults to base.satellite.nadir.
  std::optional<GeoPoint> region_center;
  double lat_half_span_deg = 2.0;
  double lon_half_span_deg = 2.0;
  int positions = 100;
  std::uint64_t seed = 1;
  std::vector<Method> methods = all_methods();
  MethodSettings settings;
  int threads = 1;
};

struct SweepSample {
  int position = 0;
  GeoPoint nadir;
  Method method = Method::b_a;
  double min_psuc = 0.0;
  double mean_psuc = 0.0;
  std::vector<double> sorted_psuc;  ///< ascending per-cell lower bounds
  double ms = 0.0;
};

struct SweepFailure {
  int position = 0;
  std::string message;
};

struct SweepResult {
  std::vector<SweepSample> samples;  ///< ordered by (position, method)
  std::vector<SweepFailure> failures;
  std::vector<Method> methods;
};

/// Uniform nadir in the lat/lon box around the region centre. Position k is
/// drawn from its own stream, so subsets of a sweep agree with the full run.
GeoPoint sample_nadir(const SweepConfig& config, int position);

/// Runs every method at every sampled position. A position whose scenario or
/// any method throws is skipped and recorded in `failures`.
SweepResult run_sweep(const SweepConfig& config);

/// Prefix means of the ascending values: entry k is the mean of the k + 1 worst.
std::vector<double> cumulative_fraction(const std::vector<double>& sorted_ascending);

/// Empirical quantile (type 7, linear interpolation) of unsorted values.
double quantile(std::vector<double> values, double q);

inline constexpr const char* kSweepSamplesSchema = "beamhop-sweep-samples/1";
inline constexpr const char* kSweepCdfSchema = "beamhop-sweep-cdf/1";
inline constexpr const char* kSweepFractionSchema = "beamhop-sweep-fraction/1";

/// `position,lat,lon,method,min_psuc,mean_psuc,ms`
std::string sweep_samples_csv(const SweepResult& result);
/// `method,min_psuc,cdf`: empirical CDF of the minimum bound per method.
std::string sweep_cdf_csv(const SweepResult& result);
/// `method,fraction,mean_psuc`: cumulative-fraction curve averaged over positions.
std::string sweep_fraction_csv(const SweepResult& result);

/// Samples of one method, in position order.
std::vector<SweepSample> samples_for(const SweepResult& result, Method method);

} // namespace beamhop
