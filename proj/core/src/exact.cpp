#include "csched/exact.hpp"

#include <algorithm>
#include <chrono>

#include "csched/error.hpp"

namespace csched {
namespace {

using Clock = std::chrono::steady_clock;

struct TaskMinima {
  std::vector<double> duration;
  std::vector<double> usage;
};

TaskMinima task_minima(const Problem& problem) {
  TaskMinima minima;
  minima.duration.assign(problem.task_count(), 0.0);
  minima.usage.assign(problem.task_count(), 0.0);
  for (std::size_t j = 0; j < problem.task_count(); ++j) {
    auto nodes = problem.eligible_nodes(j);
    if (nodes.empty()) continue;
    double d = kUnlimited;
    double u = kUnlimited;
    for (auto i : nodes) {
      d = std::min(d, problem.duration(j, i));
      u = std::min(u, problem.usage(j, i));
    }
    minima.duration[j] = d;
    minima.usage[j] = u;
  }
  return minima;
}

// Longest path through the unplaced tasks, seeded by the finish times of
// placed ones; `earliest` is scratch indexed by task.
double critical_path_bound(const Problem& problem, const ScheduleBuilder& builder,
                           const std::vector<double>& min_duration, std::size_t from_position,
                           std::vector<double>& earliest) {
  double bound = builder.makespan();
  const auto order = problem.order();
  for (std::size_t k = from_position; k < order.size(); ++k) {
    const auto j = order[k];
    if (builder.placed(j)) continue;
    double start = problem.submission_time();
    for (const auto& edge : problem.predecessors(j)) {
      const double done = builder.placed(edge.task) ? builder.finish(edge.task)
                                                    : earliest[edge.task] + min_duration[edge.task];
      start = std::max(start, done);
    }
    earliest[j] = start;
    bound = std::max(bound, start + min_duration[j]);
  }
  return bound;
}

class BranchAndBound {
 public:
  BranchAndBound(const Problem& problem, const SolveConfig& config)
      : problem_(problem),
        builder_(problem),
        minima_(task_minima(problem)),
        current_(problem.task_count(), 0),
        earliest_(problem.task_count(), 0.0),
        aggregate_cores_(problem.node_count(), 0.0),
        aggregate_memory_(problem.node_count(), 0.0) {
    const auto order = problem.order();
    remaining_min_usage_.assign(order.size() + 1, 0.0);
    for (std::size_t k = order.size(); k-- > 0;) {
      remaining_min_usage_[k] = remaining_min_usage_[k + 1] + minima_.usage[order[k]];
    }
    if (config.time_budget) {
      deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(*config.time_budget));
    }
  }

  void run() { descend(0); }

  bool timed_out() const noexcept { return timed_out_; }
  std::uint64_t explored() const noexcept { return explored_; }
  const std::optional<Schedule>& best() const noexcept { return best_; }
  const Assignment& best_assignment() const noexcept { return best_assignment_; }

 private:
  bool fits_aggregate(std::size_t j, std::size_t i) const {
    if (problem_.capacity_mode() != CapacityMode::aggregate) return true;
    const auto& node = problem_.node(i);
    return aggregate_cores_[i] + static_cast<double>(problem_.task(j).cores) <= static_cast<double>(node.cores) &&
           aggregate_memory_[i] + problem_.task(j).memory <= node.memory;
  }

  void descend(std::size_t depth) {
    const auto order = problem_.order();
    if (depth == order.size()) {
      auto schedule = builder_.to_schedule();
      if (!best_ || schedule.objective < best_->objective) {
        best_ = std::move(schedule);
        best_assignment_ = current_;
      }
      return;
    }

    const auto j = order[depth];
    for (auto i : problem_.eligible_nodes(j)) {
      if (timed_out_) return;
      if (!fits_aggregate(j, i)) continue;

      if ((++explored_ & 0x3ffU) == 0 && deadline_ && Clock::now() >= *deadline_) {
        timed_out_ = true;
        return;
      }

      builder_.place(j, i);
      current_[j] = i;
      const double usage = problem_.usage(j, i);
      assigned_usage_ += usage;
      aggregate_cores_[i] += static_cast<double>(problem_.task(j).cores);
      aggregate_memory_[i] += problem_.task(j).memory;

      const double makespan_bound =
          critical_path_bound(problem_, builder_, minima_.duration, depth + 1, earliest_);
      const double bound = problem_.alpha() * (assigned_usage_ + remaining_min_usage_[depth + 1]) +
                           problem_.beta() * makespan_bound;
      if (!best_ || bound < best_->objective) descend(depth + 1);

      aggregate_memory_[i] -= problem_.task(j).memory;
      aggregate_cores_[i] -= static_cast<double>(problem_.task(j).cores);
      assigned_usage_ -= usage;
      builder_.undo();
    }
  }

  const Problem& problem_;
  ScheduleBuilder builder_;
  TaskMinima minima_;
  std::vector<double> remaining_min_usage_;
  Assignment current_;
  std::vector<double> earliest_;
  std::vector<double> aggregate_cores_;
  std::vector<double> aggregate_memory_;
  double assigned_usage_ = 0.0;
  std::optional<Clock::time_point> deadline_;
  std::optional<Schedule> best_;
  Assignment best_assignment_;
  std::uint64_t explored_ = 0;
  bool timed_out_ = false;
};

}  // namespace

SolveResult solve_exact(const Problem& problem, const SolveConfig& config) {
  if (config.time_budget && !(*config.time_budget > 0.0)) {
    throw Error(Errc::invalid_argument, "time budget must be positive");
  }
  const auto started = Clock::now();
  SolveResult result;
  result.technique = "milp";

  if (auto j = first_unplaceable_task(problem)) {
    result.status = SolveStatus::infeasible;
    result.detail = "task '" + problem.task(*j).id + "' has no feature-feasible node";
    result.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
    return result;
  }

  BranchAndBound search(problem, config);
  search.run();

  result.explored_nodes = search.explored();
  if (search.best()) {
    result.schedule = search.best();
    result.assignment = search.best_assignment();
    result.objective = result.schedule->objective;
  }
  if (search.timed_out()) {
    result.status = SolveStatus::timeout;
    result.detail = "time budget exhausted before optimality was proven";
  } else if (search.best()) {
    result.status = SolveStatus::optimal;
  } else {
    result.status = SolveStatus::infeasible;
    result.detail = "no assignment satisfies the capacity constraints";
  }
  result.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
  return result;
}

SolveResult solve_exact(const Instance& instance, const Workflow& workflow, const SolveConfig& config) {
  return solve_exact(Problem(instance, workflow), config);
}

double lower_bound(const Problem& problem, const PartialAssignment& partial) {
  if (partial.size() != problem.task_count()) {
    throw Error(Errc::invalid_argument, "partial assignment size differs from task count");
  }
  const auto minima = task_minima(problem);
  ScheduleBuilder builder(problem);
  double usage = 0.0;
  for (auto j : problem.order()) {
    if (!partial[j]) {
      usage += minima.usage[j];
      continue;
    }
    for (const auto& edge : problem.predecessors(j)) {
      if (!partial[edge.task]) {
        throw Error(Errc::invalid_argument, "task '" + problem.task(j).id +
                                                "' is assigned before its predecessor '" +
                                                problem.task(edge.task).id + "'");
      }
    }
    const auto i = *partial[j];
    if (i >= problem.node_count()) throw Error(Errc::invalid_argument, "partial assignment names a missing node");
    builder.place(j, i);
    usage += problem.usage(j, i);
  }
  std::vector<double> earliest(problem.task_count(), 0.0);
  const double makespan = critical_path_bound(problem, builder, minima.duration, 0, earliest);
  return problem.alpha() * usage + problem.beta() * makespan;
}

}  // namespace csched
