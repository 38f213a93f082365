#pragma once

#include <optional>
#include <vector>

#include "csched/solve.hpp"

namespace csched {

struct SolveConfig {
  // Soft wall-clock budget in seconds, checked between branch expansions.
  std::optional<double> time_budget;
};

// Depth-first branch-and-bound over task -> node choices. Tasks are fixed in
// the problem's topological order and nodes tried by ascending id, so the
// first optimum found is the lexicographically smallest one; later
// candidates replace the incumbent only when strictly better.
SolveResult solve_exact(const Problem& problem, const SolveConfig& config = {});
SolveResult solve_exact(const Instance& instance, const Workflow& workflow, const SolveConfig& config = {});

// Task index -> node index, or nothing for unassigned tasks.
using PartialAssignment = std::vector<std::optional<std::size_t>>;

// Admissible bound on the objective of any completion. The assigned tasks
// must be closed under predecessors. Assigned tasks contribute their exact
// timing and usage; unassigned ones their cheapest usage and shortest
// duration over eligible nodes, with transfers and capacity waits ignored.
double lower_bound(const Problem& problem, const PartialAssignment& partial);

}  // namespace csched
