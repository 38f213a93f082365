#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "csched/metaheur.hpp"
#include "csched/solve.hpp"

namespace csched {

enum class Technique { milp, brute, heft, olb, ga, sa, pso, aco };

inline constexpr Technique kAllTechniques[] = {Technique::milp, Technique::brute, Technique::heft,
                                               Technique::olb,  Technique::ga,    Technique::sa,
                                               Technique::pso,  Technique::aco};

std::string_view to_string(Technique technique) noexcept;
// Throws Error(invalid_argument) for unknown names.
Technique parse_technique(std::string_view name);
bool is_metaheuristic(Technique technique) noexcept;

struct RunOptions {
  MhParams mh;
  // Applies to milp and the metaheuristics; overrides mh.time_budget.
  std::optional<double> time_budget;
};

SolveResult run_technique(const Problem& problem, Technique technique, const RunOptions& options = {});
SolveResult run_technique(const Instance& instance, const Workflow& workflow, Technique technique,
                          const RunOptions& options = {});

}  // namespace csched
