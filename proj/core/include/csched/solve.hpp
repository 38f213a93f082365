#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "csched/engine.hpp"

namespace csched {

enum class SolveStatus { optimal, feasible, timeout, infeasible };

std::string_view to_string(SolveStatus status) noexcept;

struct SolveResult {
  std::string technique;
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Schedule> schedule;
  Assignment assignment;
  double objective = std::numeric_limits<double>::infinity();
  std::uint64_t explored_nodes = 0;
  double wall_time = 0.0;
  // Human-readable reason for infeasible/timeout outcomes.
  std::string detail;
  // Incumbent fitness after each iteration; metaheuristics only.
  std::vector<double> convergence;

  bool has_schedule() const noexcept { return schedule.has_value(); }
  double makespan() const { return schedule ? schedule->makespan : std::numeric_limits<double>::infinity(); }
};

// Returns the first task (by topological order) without any eligible node,
// or nothing when every task has somewhere to go.
std::optional<std::size_t> first_unplaceable_task(const Problem& problem);

}  // namespace csched
