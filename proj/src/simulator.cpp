#include "beamhop/simulator.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "beamhop/errors.hpp"
#include "format.hpp"
#include "parallel.hpp"

namespace beamhop {

namespace {

// Per-cell sums over trials: totals and the second moments needed for the
// cluster variance of each ratio.
struct Tally {
  long long att = 0, cf = 0, dec = 0;
  long long att2 = 0, cf2 = 0, dec2 = 0;
  long long cf_att = 0, dec_cf = 0, dec_att = 0;

  void add_trial(long long a, long long c, long long d) {
    att += a;
    cf += c;
    dec += d;
    att2 += a * a;
    cf2 += c * c;
    dec2 += d * d;
    cf_att += c * a;
    dec_cf += d * c;
    dec_att += d * a;
  }

  void merge(const Tally& o) {
    att += o.att;
    cf += o.cf;
    dec += o.dec;
    att2 += o.att2;
    cf2 += o.cf2;
    dec2 += o.dec2;
    cf_att += o.cf_att;
    dec_cf += o.dec_cf;
    dec_att += o.dec_att;
  }
};

struct Block {
  std::vector<Tally> tally;
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> slot_attempts;
};

int device_count(double demand) { return std::max(1, static_cast<int>(std::lround(demand))); }

// Wilson 95% half-width divided by 1.96, as a standard-error surrogate.
double wilson_se(double successes, double n) {
  constexpr double z = 1.959963984540054;
  const double p = successes / n;
  const double denom = 1.0 + z * z / n;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return half / z;
}

// Ratio sum(num) / sum(den) with trials as clusters.
void estimate(long long num, long long den, long long num2, long long num_den, long long den2, long long trials,
              double& rate, double& se) {
  if (den == 0) {
    rate = std::numeric_limits<double>::quiet_NaN();
    se = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const double n = static_cast<double>(num);
  const double d = static_cast<double>(den);
  rate = n / d;
  if (num < 5 || den - num < 5 || trials < 2) {
    se = wilson_se(n, d);
    return;
  }
  const double ss = static_cast<double>(num2) - 2.0 * rate * static_cast<double>(num_den) +
                    rate * rate * static_cast<double>(den2);
  const double k = static_cast<double>(trials);
  se = std::sqrt(std::max(ss, 0.0) * k / (k - 1.0)) / d;
}

} // namespace

McResult simulate(const Scenario& s, const BeamHoppingPattern& x, const McConfig& config) {
  const int n_c = s.n_cells();
  const int n_slot = s.n_slot();
  const int n_r = s.n_r();
  if (x.n_cells() != n_c || x.n_slot() != n_slot) {
    throw DomainError("pattern dimensions do not match the scenario");
  }
  if (config.trials < 1 || config.block_size < 1) {
    throw DomainError("trials and block size must be positive");
  }
  std::vector<std::vector<int>> lit_slots(static_cast<std::size_t>(n_c));
  for (int i = 0; i < n_c; ++i) {
    for (int t = 0; t < n_slot; ++t) {
      if (x.lit(i, t)) {
        lit_slots[i].push_back(t);
      }
    }
    if (lit_slots[i].empty()) {
      throw DomainError("cell " + std::to_string(s.cell(i).id) + " is never illuminated");
    }
  }
  std::vector<int> devices(static_cast<std::size_t>(n_c));
  std::vector<double> margin(static_cast<std::size_t>(n_c));
  for (int i = 0; i < n_c; ++i) {
    devices[i] = device_count(s.cell(i).demand);
    margin[i] = s.decoding_margin(i);
  }

  const long long n_blocks = (config.trials + config.block_size - 1) / config.block_size;
  std::vector<Block> blocks(static_cast<std::size_t>(n_blocks));

  parallel_for(static_cast<int>(n_blocks), config.threads, [&](int blk) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(blk), 0x5eedu};
    std::mt19937_64 rng(seq);
    Block& out = blocks[blk];
    out.tally.assign(static_cast<std::size_t>(n_c), Tally{});
    if (config.record_slot_stats) {
      out.slot_attempts.setZero(n_c, n_slot);
    }
    // occupancy[(i * n_slot + t) * n_r + rb]
    std::vector<int> occupancy(static_cast<std::size_t>(n_c) * n_slot * n_r, 0);
    std::vector<std::vector<int>> sent(static_cast<std::size_t>(n_c));  // (t * n_r + rb) per transmission
    std::vector<std::binomial_distribution<int>> active;
    for (int i = 0; i < n_c; ++i) {
      active.emplace_back(devices[i], s.cell(i).activation);
    }
    std::uniform_int_distribution<int> pick_rb(0, n_r - 1);

    const long long first = static_cast<long long>(blk) * config.block_size;
    const long long last = std::min(config.trials, first + config.block_size);
    for (long long trial = first; trial < last; ++trial) {
      for (int i = 0; i < n_c; ++i) {
        sent[i].clear();
        const int k = active[i](rng);
        const int b = static_cast<int>(lit_slots[i].size());
        std::uniform_int_distribution<int> pick_slot(0, b - 1);
        for (int d = 0; d < k; ++d) {
          const int t = lit_slots[i][pick_slot(rng)];
          const int key = t * n_r + pick_rb(rng);
          sent[i].push_back(key);
          ++occupancy[static_cast<std::size_t>(i) * n_slot * n_r + key];
        }
      }
      for (int i = 0; i < n_c; ++i) {
        long long cf = 0;
        long long dec = 0;
        for (const int key : sent[i]) {
          if (occupancy[static_cast<std::size_t>(i) * n_slot * n_r + key] != 1) {
            continue;
          }
          ++cf;
          double interference = 0.0;
          for (int j = 0; j < n_c; ++j) {
            if (j != i) {
              interference += occupancy[static_cast<std::size_t>(j) * n_slot * n_r + key] * s.gain(i, j);
            }
          }
          if (interference < margin[i]) {
            ++dec;
          }
        }
        const long long att = static_cast<long long>(sent[i].size());
        out.tally[i].add_trial(att, cf, dec);
        if (config.record_slot_stats) {
          for (const int key : sent[i]) {
            ++out.slot_attempts(i, key / n_r);
          }
        }
      }
      for (int i = 0; i < n_c; ++i) {
        for (const int key : sent[i]) {
          occupancy[static_cast<std::size_t>(i) * n_slot * n_r + key] = 0;
        }
      }
    }
  });

  std::vector<Tally> total(static_cast<std::size_t>(n_c));
  McResult r;
  r.trials = config.trials;
  if (config.record_slot_stats) {
    r.slot_attempts = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_c, n_slot);
  }
  for (const Block& blk : blocks) {
    for (int i = 0; i < n_c; ++i) {
      total[i].merge(blk.tally[i]);
    }
    if (config.record_slot_stats) {
      *r.slot_attempts += blk.slot_attempts;
    }
  }

  r.p_a.resize(n_c);
  r.p_a_se.resize(n_c);
  r.p_d.resize(n_c);
  r.p_d_se.resize(n_c);
  r.p_suc.resize(n_c);
  r.p_suc_se.resize(n_c);
  for (int i = 0; i < n_c; ++i) {
    const Tally& t = total[i];
    r.attempted.push_back(t.att);
    r.collision_free.push_back(t.cf);
    r.decoded.push_back(t.dec);
    r.undefined.push_back(t.att == 0 ? 1 : 0);
    estimate(t.cf, t.att, t.cf2, t.cf_att, t.att2, r.trials, r.p_a(i), r.p_a_se(i));
    estimate(t.dec, t.cf, t.dec2, t.dec_cf, t.cf2, r.trials, r.p_d(i), r.p_d_se(i));
    estimate(t.dec, t.att, t.dec2, t.dec_att, t.att2, r.trials, r.p_suc(i), r.p_suc_se(i));
  }
  return r;
}

void attach_mc(SuccessReport& report, const McResult& mc) {
  if (mc.n_cells() != report.n_cells()) {
    throw DomainError("Monte-Carlo result does not match the report");
  }
  report.p_suc_mc = mc.p_suc;
  report.mc_stderr = mc.p_suc_se;
}

std::string mc_to_csv(const Scenario& s, const McResult& mc) {
  std::ostringstream out;
  out << "# schema: " << kMcSchema << "\n";
  out << "# trials," << mc.trials << "\n";
  out << "cell_id,attempted,collision_free,decoded,p_a_mc,p_a_se,p_d_mc,p_d_se,p_suc_mc,p_suc_se\n";
  for (int i = 0; i < mc.n_cells(); ++i) {
    out << s.cell(i).id << ',' << mc.attempted[i] << ',' << mc.collision_free[i] << ',' << mc.decoded[i] << ','
        << fmt_double(mc.p_a(i)) << ',' << fmt_double(mc.p_a_se(i)) << ',' << fmt_double(mc.p_d(i)) << ','
        << fmt_double(mc.p_d_se(i)) << ',' << fmt_double(mc.p_suc(i)) << ',' << fmt_double(mc.p_suc_se(i))
        << '\n';
  }
  return out.str();
}

} // namespace beamhop
