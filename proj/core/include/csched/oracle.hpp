#pragma once

#include "csched/model.hpp"
#include "csched/solve.hpp"

namespace csched {

// Largest node_count^task_count the enumeration accepts.
inline constexpr double kBruteForceLimit = 1e6;

// Reference optimum by exhaustive enumeration. Shares only the model
// formulas with the rest of the library: its topological order, feasibility
// filter and timing recursion are written independently of the engine and
// the branch-and-bound, so agreement between the two is evidence rather
// than a tautology. Ties keep the lexicographically smallest assignment by
// (topological task order, node id). Throws Error(too_large) past the guard.
SolveResult brute_force_optimum(const Instance& instance, const Workflow& workflow);

}  // namespace csched
