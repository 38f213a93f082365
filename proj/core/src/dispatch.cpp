#include "csched/dispatch.hpp"

#include "csched/error.hpp"
#include "csched/exact.hpp"
#include "csched/heuristics.hpp"
#include "csched/oracle.hpp"

namespace csched {

std::string_view to_string(Technique technique) noexcept {
  switch (technique) {
    case Technique::milp: return "milp";
    case Technique::brute: return "brute";
    case Technique::heft: return "heft";
    case Technique::olb: return "olb";
    case Technique::ga: return "ga";
    case Technique::sa: return "sa";
    case Technique::pso: return "pso";
    case Technique::aco: return "aco";
  }
  return "?";
}

Technique parse_technique(std::string_view name) {
  for (auto t : kAllTechniques) {
    if (to_string(t) == name) return t;
  }
  throw Error(Errc::invalid_argument, "unknown technique '" + std::string(name) + "'");
}

bool is_metaheuristic(Technique technique) noexcept {
  return technique == Technique::ga || technique == Technique::sa || technique == Technique::pso ||
         technique == Technique::aco;
}

SolveResult run_technique(const Problem& problem, Technique technique, const RunOptions& options) {
  auto mh = options.mh;
  if (options.time_budget) mh.time_budget = options.time_budget;
  switch (technique) {
    case Technique::milp: return solve_exact(problem, SolveConfig{options.time_budget});
    case Technique::heft: return solve_heft(problem);
    case Technique::olb: return solve_olb(problem);
    case Technique::ga: return solve_ga(problem, mh);
    case Technique::sa: return solve_sa(problem, mh);
    case Technique::pso: return solve_pso(problem, mh);
    case Technique::aco: return solve_aco(problem, mh);
    case Technique::brute: break;
  }
  throw Error(Errc::invalid_argument, "brute force needs the instance, not a compiled problem");
}

SolveResult run_technique(const Instance& instance, const Workflow& workflow, Technique technique,
                          const RunOptions& options) {
  if (technique == Technique::brute) return brute_force_optimum(instance, workflow);
  return run_technique(Problem(instance, workflow), technique, options);
}

}  // namespace csched
