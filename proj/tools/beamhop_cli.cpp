// Command-line front end: scenario generation, optimization, evaluation and
// benchmark sweeps. Exit codes: 0 ok, 1 usage or bad input, 2 infeasible,
// 3 internal error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "beamhop/errors.hpp"
#include "beamhop/methods.hpp"
#include "beamhop/pattern_io.hpp"
#include "beamhop/scenario.hpp"
#include "beamhop/simulator.hpp"
#include "beamhop/sweep.hpp"

namespace fs = std::filesystem;
using namespace beamhop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;

constexpr const char* kOutputDirEnv = "BEAMHOP_OUTPUT_DIR";

fs::path default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

fs::path resolve_output(const std::string& explicit_path, const std::string& out_dir, const char* file_name) {
  if (!explicit_path.empty()) {
    return explicit_path;
  }
  return (out_dir.empty() ? default_output_dir() : fs::path(out_dir)) / file_name;
}

void write_output(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
  }
  write_text_file(path.string(), content);
}

// ---- generator flags, shared by `generate` and `sweep` ----------------------

struct GeneratorFlags {
  std::string scale;
  std::optional<int> n_cells, n_b, n_slot, n_r;
  std::optional<double> alpha, n_avg, beta, eta, gamma_th_db, lat, lon, altitude_km, cell_radius_km;
  std::optional<std::uint64_t> seed;
  std::string populations;

  void add_to(CLI::App& app, const std::string& seed_flag) {
    app.add_option("--scale", scale, "Parameter preset (generate: reference, sweep: desk)")->check(CLI::IsMember({"reference", "desk"}));
    app.add_option("--n-cells", n_cells, "Number of serving cells")->check(CLI::PositiveNumber);
    app.add_option("--n-b", n_b, "Beams per slot")->check(CLI::PositiveNumber);
    app.add_option("--n-slot", n_slot, "Slots per beam-hopping window")->check(CLI::PositiveNumber);
    app.add_option("--n-r", n_r, "Resource blocks per slot")->check(CLI::PositiveNumber);
    app.add_option("--alpha", alpha, "Device activation probability")->check(CLI::Range(0.0, 1.0));
    app.add_option("--n-avg", n_avg, "Average devices per cell")->check(CLI::PositiveNumber);
    app.add_option("--beta", beta, "Population weighting exponent");
    app.add_option("--eta", eta, "Population share of the demand model")->check(CLI::Range(0.0, 1.0));
    app.add_option("--gamma-th-db", gamma_th_db, "Decoding SINR threshold in dB");
    app.add_option("--lat", lat, "Satellite nadir latitude in degrees")->check(CLI::Range(-90.0, 90.0));
    app.add_option("--lon", lon, "Satellite nadir longitude in degrees")->check(CLI::Range(-180.0, 180.0));
    app.add_option("--altitude-km", altitude_km, "Satellite altitude")->check(CLI::PositiveNumber);
    app.add_option("--cell-radius-km", cell_radius_km, "Hexagonal cell radius")->check(CLI::PositiveNumber);
    app.add_option(seed_flag, seed, "Seed of the synthetic population field");
    app.add_option("--populations", populations, "CSV of cell_id,population overriding the synthetic field")
        ->check(CLI::ExistingFile);
  }

  GeneratorConfig build(const std::string& default_scale) const {
    const std::string& preset = scale.empty() ? default_scale : scale;
    GeneratorConfig c = preset == "desk" ? GeneratorConfig::desk() : GeneratorConfig::reference();
    auto set = [](auto& field, const auto& value) {
      if (value) {
        field = *value;
      }
    };
    set(c.n_cells, n_cells);
    set(c.n_b, n_b);
    set(c.n_slot, n_slot);
    set(c.link.n_r, n_r);
    set(c.alpha, alpha);
    set(c.n_avg, n_avg);
    set(c.beta, beta);
    set(c.eta, eta);
    set(c.link.gamma_th_db, gamma_th_db);
    set(c.satellite.nadir.lat_deg, lat);
    set(c.satellite.nadir.lon_deg, lon);
    set(c.satellite.altitude_km, altitude_km);
    set(c.cell_radius_km, cell_radius_km);
    set(c.seed, seed);
    if (c.n_b > c.n_cells) {
      throw ValidationError("--n-b (" + std::to_string(c.n_b) + ") exceeds --n-cells (" +
                            std::to_string(c.n_cells) + ")");
    }
    if (!populations.empty()) {
      c.populations = load_populations_csv(populations, c.n_cells);
    }
    return c;
  }
};

// ---- method flags, shared by `optimize` and `sweep` -------------------------

struct MethodFlags {
  std::uint64_t seed = 1;
  int n_ao = 5;
  int iterations = 300;
  std::string repair = "held-fixed";
  std::string greedy = "most-devices";
  int population = 100;
  int generations = 250;
  int threads = 1;

  void add_to(CLI::App& app) {
    app.add_option("--seed", seed, "Seed of randomized methods and of the inner solver start");
    app.add_option("--n-ao", n_ao, "Alternating-optimization rounds")->check(CLI::PositiveNumber);
    app.add_option("--iterations", iterations, "Inner ADMM iterations")->check(CLI::PositiveNumber);
    app.add_option("--repair", repair, "Repair scoring")->check(CLI::IsMember({"held-fixed", "refresh"}));
    app.add_option("--greedy-orientation", greedy, "Greedy ratio ordering")
        ->check(CLI::IsMember({"most-devices", "fewest-devices"}));
    app.add_option("--population", population, "Genetic population size")->check(CLI::PositiveNumber);
    app.add_option("--generations", generations, "Genetic generations")->check(CLI::NonNegativeNumber);
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  }

  MethodSettings build() const {
    MethodSettings m;
    m.seed = seed;
    m.ao.n_ao = n_ao;
    m.ao.admm.iterations = iterations;
    m.ao.l2box.iterations = iterations;
    m.ao.repair = repair == "refresh" ? RepairPolicy::refresh : RepairPolicy::held_fixed;
    m.greedy = greedy == "fewest-devices" ? GreedyOrientation::fewest_devices_per_beam
                                          : GreedyOrientation::most_devices_per_beam;
    m.genetic.population = population;
    m.genetic.generations = generations;
    m.genetic.threads = threads;
    return m;
  }
};

// ---- subcommands -----------------------------------------------------------

struct GenerateArgs {
  GeneratorFlags gen;
  std::string out;
  std::string out_dir;
  bool no_gains = false;
};

int cmd_generate(const GenerateArgs& a) {
  const GeneratorConfig cfg = a.gen.build("reference");
  const Scenario s = generate_scenario(cfg);
  if (s.n_cells() > s.capacity()) {
    std::cerr << "warning: " << s.n_cells() << " cells exceed " << s.capacity()
              << " beam-slots; no feasible pattern exists\n";
  }
  const fs::path path = resolve_output(a.out, a.out_dir, "scenario.json");
  write_output(path, scenario_to_json(s, !a.no_gains));
  std::cout << "scenario: " << path.string() << " (" << s.n_cells() << " cells, N_b=" << s.n_b()
            << ", N_slot=" << s.n_slot() << ")\n";
  return kExitOk;
}

struct OptimizeArgs {
  std::string scenario;
  std::string method;
  MethodFlags flags;
  std::string out_dir;
  std::string pattern;
  std::string trace;
  std::string solver_trace;
  bool no_timing = false;
};

int cmd_optimize(const OptimizeArgs& a) {
  const Method method = parse_method(a.method);
  const Scenario s = load_scenario(a.scenario);
  if (s.n_cells() > s.capacity()) {
    throw InfeasibleError("infeasible scenario: " + std::to_string(s.n_cells()) + " cells exceed N_slot*N_b = " +
                          std::to_string(s.capacity()) + " beam-slots");
  }
  MethodOutcome out = run_method(s, method, a.flags.build());

  const fs::path pattern_path = resolve_output(a.pattern, a.out_dir, "pattern.txt");
  write_output(pattern_path, pattern_to_text(out.x));
  std::cout << "pattern: " << pattern_path.string() << '\n';
  if (out.trace) {
    if (a.no_timing) {
      for (auto& it : out.trace->iterations) {
        it.ms = 0.0;
      }
    }
    const fs::path trace_path = resolve_output(a.trace, a.out_dir, "ao_trace.csv");
    write_output(trace_path, out.trace->to_csv());
    std::cout << "trace: " << trace_path.string() << '\n';
    if (!a.solver_trace.empty() && !out.inner_traces.empty()) {
      std::string csv;
      for (std::size_t k = 0; k < out.inner_traces.size(); ++k) {
        std::string part = solver_trace_to_csv(out.inner_traces[k]);
        if (k > 0) {
          // Drop the schema and header lines of every block after the first.
          part = part.substr(part.find('\n', part.find('\n') + 1) + 1);
        }
        csv += part;
      }
      write_output(a.solver_trace, csv);
      std::cout << "solver trace: " << a.solver_trace << '\n';
    }
  }
  std::cout << "method " << method_name(method) << ": min p_suc " << out.report.min << ", mean p_suc "
            << out.report.mean;
  if (!a.no_timing) {
    std::cout << ", " << out.ms << " ms";
  }
  std::cout << '\n';
  if (!out.x.feasible(s.n_b())) {
    std::cerr << "error: emitted pattern violates the per-slot or per-cell constraints\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

struct EvaluateArgs {
  std::string scenario;
  std::string pattern;
  long long mc = 0;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const Scenario s = load_scenario(a.scenario);
  const BeamHoppingPattern x = load_pattern(a.pattern);
  if (x.n_cells() != s.n_cells() || x.n_slot() != s.n_slot()) {
    throw DomainError("pattern is " + std::to_string(x.n_cells()) + "x" + std::to_string(x.n_slot()) +
                      " but the scenario needs " + std::to_string(s.n_cells()) + "x" + std::to_string(s.n_slot()));
  }
  SuccessReport report = success_lower_bound(s, x);
  if (a.mc > 0) {
    McConfig mc;
    mc.trials = a.mc;
    mc.seed = a.seed;
    mc.threads = a.threads;
    if (!x.coverage_ok()) {
      throw InfeasibleError("Monte-Carlo needs every cell illuminated at least once");
    }
    attach_mc(report, simulate(s, x, mc));
  }
  const std::string csv = report_to_csv(report);
  if (a.out.empty() || a.out == "-") {
    std::cout << csv;
  } else {
    write_output(a.out, csv);
  }
  return kExitOk;
}

struct SweepArgs {
  GeneratorFlags gen;
  MethodFlags flags;
  int positions = 100;
  std::uint64_t position_seed = 1;
  std::vector<std::string> methods;
  double lat_span = 2.0;
  double lon_span = 2.0;
  std::string out_dir;
};

int cmd_sweep(const SweepArgs& a) {
  SweepConfig cfg;
  cfg.base = a.gen.build("desk");
  cfg.positions = a.positions;
  cfg.seed = a.position_seed;
  cfg.lat_half_span_deg = a.lat_span;
  cfg.lon_half_span_deg = a.lon_span;
  cfg.settings = a.flags.build();
  cfg.threads = a.flags.threads;
  if (!a.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : a.methods) {
      cfg.methods.push_back(parse_method(m));
    }
  }
  const SweepResult r = run_sweep(cfg);
  const fs::path dir = a.out_dir.empty() ? default_output_dir() : fs::path(a.out_dir);
  write_output(dir / "sweep_samples.csv", sweep_samples_csv(r));
  write_output(dir / "sweep_cdf.csv", sweep_cdf_csv(r));
  write_output(dir / "sweep_fraction.csv", sweep_fraction_csv(r));
  for (const auto& f : r.failures) {
    std::cerr << "position " << f.position << " skipped: " << f.message << '\n';
  }
  const int done = cfg.positions - static_cast<int>(r.failures.size());
  std::cout << "sweep: " << done << " of " << cfg.positions << " positions, " << r.failures.size()
            << " failed; output in " << dir.string() << '\n';
  return done > 0 ? kExitOk : kExitInfeasible;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beam-hopping pattern optimizer for grant-free random access"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "beamhop 1.0.0");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a scenario file");
  gen.gen.add_to(*g, "--seed");
  g->add_option("-o,--out", gen.out, "Scenario path (default <out-dir>/scenario.json)");
  g->add_option("--out-dir", gen.out_dir, std::string("Output directory (default $") + kOutputDirEnv + " or .)");
  g->add_flag("--no-gains", gen.no_gains, "Omit the gain matrix; it is recomputed on load");

  OptimizeArgs opt;
  auto* o = app.add_subcommand("optimize", "Build a beam-hopping pattern for a scenario");
  o->add_option("-s,--scenario", opt.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  o->add_option("-m,--method", opt.method, "b-a, b-l2a, random, round-robin, greedy or genetic")->required();
  opt.flags.add_to(*o);
  o->add_option("--out-dir", opt.out_dir, std::string("Output directory (default $") + kOutputDirEnv + " or .)");
  o->add_option("--pattern", opt.pattern, "Pattern path (default <out-dir>/pattern.txt)");
  o->add_option("--trace", opt.trace, "Alternating-optimization trace path (default <out-dir>/ao_trace.csv)");
  o->add_option("--solver-trace", opt.solver_trace, "Also write the inner solver traces here");
  o->add_flag("--no-timing", opt.no_timing, "Write zero wall times so repeated runs are byte-identical");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score a pattern; optionally with Monte-Carlo");
  e->add_option("-s,--scenario", ev.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  e->add_option("-p,--pattern", ev.pattern, "Pattern file")->required()->check(CLI::ExistingFile);
  e->add_option("--mc", ev.mc, "Monte-Carlo trials (0 disables)")->check(CLI::NonNegativeNumber);
  e->add_option("--seed", ev.seed, "Monte-Carlo seed");
  e->add_option("--threads", ev.threads, "Monte-Carlo worker threads")->check(CLI::PositiveNumber);
  e->add_option("-o,--out", ev.out, "Report path (default stdout)");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Benchmark methods over sampled satellite positions");
  sw.gen.add_to(*w, "--population-seed");
  w->add_option("--positions", sw.positions, "Number of satellite positions")->check(CLI::PositiveNumber);
  w->add_option("--position-seed", sw.position_seed, "Seed of the position sampler");
  w->add_option("--methods", sw.methods, "Methods to run (default all)")->delimiter(',');
  w->add_option("--lat-span", sw.lat_span, "Half-width of the latitude box in degrees")->check(CLI::PositiveNumber);
  w->add_option("--lon-span", sw.lon_span, "Half-width of the longitude box in degrees")->check(CLI::PositiveNumber);
  w->add_option("--out-dir", sw.out_dir, std::string("Output directory (default $") + kOutputDirEnv + " or .)");
  sw.flags.add_to(*w);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) {
      return cmd_generate(gen);
    }
    if (*o) {
      return cmd_optimize(opt);
    }
    if (*e) {
      return cmd_evaluate(ev);
    }
    return cmd_sweep(sw);
  } catch (const InfeasibleError& err) {
    std::cerr << "infeasible: " << err.what() << '\n';
    return kExitInfeasible;
  } catch (const InternalError& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return kExitInternal;
  } catch (const SingularError& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return kExitInternal;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return kExitInternal;
  }
}
