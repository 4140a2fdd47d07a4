#include "beamhop/methods.hpp"

#include <chrono>

#include "beamhop/errors.hpp"

namespace beamhop {

Method parse_method(const std::string& name) {
  for (const Method m : all_methods()) {
    if (method_name(m) == name) {
      return m;
    }
  }
  throw ValidationError("unknown method '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
  case Method::b_a:
    return "b-a";
  case Method::b_l2a:
    return "b-l2a";
  case Method::random:
    return "random";
  case Method::round_robin:
    return "round-robin";
  case Method::greedy:
    return "greedy";
  case Method::genetic:
    return "genetic";
  }
  throw InternalError("unhandled method");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::b_a,         Method::b_l2a,  Method::random,
                                           Method::round_robin, Method::greedy, Method::genetic};
  return methods;
}

MethodOutcome run_method(const Scenario& s, Method method, const MethodSettings& settings) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  MethodOutcome out;
  switch (method) {
  case Method::b_a:
  case Method::b_l2a: {
    AoConfig cfg = settings.ao;
    cfg.solver = method == Method::b_a ? InnerSolver::admm : InnerSolver::l2box;
    cfg.admm.seed = settings.seed;
    cfg.l2box.seed = settings.seed;
    AoResult r = optimize(s, cfg);
    out.x = std::move(r.x);
    out.trace = std::move(r.trace);
    out.inner_traces = std::move(r.inner_traces);
    break;
  }
  case Method::random:
    out.x = random_pattern(s, settings.seed);
    break;
  case Method::round_robin:
    out.x = round_robin_pattern(s);
    break;
  case Method::greedy:
    out.x = greedy_pattern(s, settings.greedy);
    break;
  case Method::genetic: {
    GeneticConfig cfg = settings.genetic;
    cfg.seed = settings.seed;
    out.x = genetic_pattern(s, cfg).x;
    break;
  }
  }
  out.ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  out.report = success_lower_bound(s, out.x);
  return out;
}

} // namespace beamhop
