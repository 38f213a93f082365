#pragma once

#include <vector>

#include "csched/solve.hpp"

namespace csched {

// Upward rank per task index: mean eligible-node duration plus the longest
// path of mean transfer cost + successor rank towards the exit tasks.
std::vector<double> upward_ranks(const Problem& problem);

// Mean of 1 / rate over ordered pairs of distinct nodes (0 for one node).
double mean_inverse_rate(const Problem& problem);

// Heterogeneous Earliest Finish Time restricted to eligible nodes. Tasks are
// taken by descending upward rank among those whose predecessors are
// placed; each goes to the node with the smallest earliest finish time.
// The returned schedule is re-timed by the shared engine.
SolveResult solve_heft(const Problem& problem);

// Opportunistic Load Balancing: in topological order, each task goes to the
// eligible node on which it could start soonest, ignoring execution time.
SolveResult solve_olb(const Problem& problem);

}  // namespace csched
