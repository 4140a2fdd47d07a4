#include "beamhop/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "beamhop/errors.hpp"
#include "format.hpp"
#include "parallel.hpp"

namespace beamhop {

GeoPoint sample_nadir(const SweepConfig& config, int position) {
  const GeoPoint center = config.region_center.value_or(config.base.satellite.nadir);
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(position), 0x9a7du};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> lat(-config.lat_half_span_deg, config.lat_half_span_deg);
  std::uniform_real_distribution<double> lon(-config.lon_half_span_deg, config.lon_half_span_deg);
  const double dlat = lat(rng);
  const double dlon = lon(rng);
  return {center.lat_deg + dlat, center.lon_deg + dlon};
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.positions < 1) {
    throw ValidationError("sweep needs at least one position");
  }
  if (config.methods.empty()) {
    throw ValidationError("sweep needs at least one method");
  }
  const GeoPoint center = config.region_center.value_or(config.base.satellite.nadir);
  struct Slot {
    std::vector<SweepSample> samples;
    std::optional<std::string> error;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(config.positions));

  parallel_for(config.positions, config.threads, [&](int k) {
    Slot& slot = slots[k];
    try {
      GeneratorConfig gen = config.base;
      gen.anchor = center;
      gen.satellite.nadir = sample_nadir(config, k);
      const Scenario s = generate_scenario(gen);
      MethodSettings settings = config.settings;
      settings.seed = config.settings.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k + 1));
      for (const Method m : config.methods) {
        const MethodOutcome out = run_method(s, m, settings);
        SweepSample sample;
        sample.position = k;
        sample.nadir = gen.satellite.nadir;
        sample.method = m;
        sample.min_psuc = out.report.min;
        sample.mean_psuc = out.report.mean;
        sample.sorted_psuc.assign(out.report.p_suc_low.data(),
                                  out.report.p_suc_low.data() + out.report.p_suc_low.size());
        std::sort(sample.sorted_psuc.begin(), sample.sorted_psuc.end());
        sample.ms = out.ms;
        slot.samples.push_back(std::move(sample));
      }
    } catch (const std::exception& e) {
      slot.samples.clear();
      slot.error = e.what();
    }
  });

  SweepResult result;
  result.methods = config.methods;
  for (int k = 0; k < config.positions; ++k) {
    Slot& slot = slots[k];
    if (slot.error) {
      result.failures.push_back({k, *slot.error});
      continue;
    }
    for (auto& s : slot.samples) {
      result.samples.push_back(std::move(s));
    }
  }
  return result;
}

std::vector<double> cumulative_fraction(const std::vector<double>& sorted_ascending) {
  std::vector<double> out;
  out.reserve(sorted_ascending.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < sorted_ascending.size(); ++k) {
    acc += sorted_ascending[k];
    out.push_back(acc / static_cast<double>(k + 1));
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw DomainError("quantile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SweepSample> samples_for(const SweepResult& result, Method method) {
  std::vector<SweepSample> out;
  for (const auto& s : result.samples) {
    if (s.method == method) {
      out.push_back(s);
    }
  }
  return out;
}

std::string sweep_samples_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "# schema: " << kSweepSamplesSchema << "\n";
  out << "# failed_positions," << result.failures.size() << "\n";
  out << "position,lat,lon,method,min_psuc,mean_psuc,ms\n";
  for (const auto& s : result.samples) {
    out << s.position << ',' << fmt_double(s.nadir.lat_deg) << ',' << fmt_double(s.nadir.lon_deg) << ','
        << method_name(s.method) << ',' << fmt_double(s.min_psuc) << ',' << fmt_double(s.mean_psuc) << ','
        << fmt_double(s.ms) << '\n';
  }
  return out.str();
}

std::string sweep_cdf_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "# schema: " << kSweepCdfSchema << "\n";
  out << "method,min_psuc,cdf\n";
  for (const Method m : result.methods) {
    std::vector<double> mins;
    for (const auto& s : samples_for(result, m)) {
      mins.push_back(s.min_psuc);
    }
    std::sort(mins.begin(), mins.end());
    for (std::size_t k = 0; k < mins.size(); ++k) {
      out << method_name(m) << ',' << fmt_double(mins[k]) << ','
          << fmt_double(static_cast<double>(k + 1) / static_cast<double>(mins.size())) << '\n';
    }
  }
  return out.str();
}

std::string sweep_fraction_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "# schema: " << kSweepFractionSchema << "\n";
  out << "method,fraction,mean_psuc\n";
  for (const Method m : result.methods) {
    const auto samples = samples_for(result, m);
    if (samples.empty()) {
      continue;
    }
    const std::size_t n = samples.front().sorted_psuc.size();
    std::vector<double> avg(n, 0.0);
    for (const auto& s : samples) {
      const auto curve = cumulative_fraction(s.sorted_psuc);
      for (std::size_t k = 0; k < n; ++k) {
        avg[k] += curve[k];
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      out << method_name(m) << ',' << fmt_double(static_cast<double>(k + 1) / static_cast<double>(n)) << ','
          << fmt_double(avg[k] / static_cast<double>(samples.size())) << '\n';
    }
  }
  return out.str();
}

} // namespace beamhop
