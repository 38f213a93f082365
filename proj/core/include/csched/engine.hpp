#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "csched/model.hpp"

namespace csched {

// Dense task -> node map, indexed by task position in the workflow and
// holding node positions in the cluster (x_ij with exactly one 1 per row).
using Assignment = std::vector<std::size_t>;

// The same map keyed by ids, as it appears in files and reports.
using IdAssignment = std::map<std::string, std::string>;

struct ScheduleEntry {
  std::string task_id;
  std::string node_id;
  double start = 0.0;
  double finish = 0.0;
  double usage = 0.0;

  bool operator==(const ScheduleEntry&) const = default;
};

struct Schedule {
  std::string workflow_id;
  std::vector<ScheduleEntry> entries;  // workflow task order
  double makespan = 0.0;
  double total_usage = 0.0;
  double objective = 0.0;

  bool operator==(const Schedule&) const = default;
};

enum class ViolationKind { feature, capacity, dependency };

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  std::string task_id;
  ViolationKind kind = ViolationKind::feature;
  std::string detail;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const noexcept { return violations.empty(); }
  std::string summary() const;
};

/// One workflow compiled against a cluster: index-based adjacency, a fixed
/// topological order and the per-(task, node) quantities every solver needs.
/// Construction validates the instance and the workflow.
class Problem {
 public:
  struct Edge {
    std::size_t task = 0;  // the other endpoint
    double data = 0.0;     // GB shipped along the edge
  };

  Problem(const Instance& instance, const Workflow& workflow);

  std::size_t task_count() const noexcept { return workflow_.tasks.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const Task& task(std::size_t j) const { return workflow_.tasks[j]; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const Workflow& workflow() const noexcept { return workflow_; }
  std::span<const Node> nodes() const noexcept { return nodes_; }

  /// Topological order (ready ties by ascending task id). Every list-style
  /// timing pass in the library walks tasks in this order.
  std::span<const std::size_t> order() const noexcept { return order_; }
  /// Position of task j within order().
  std::size_t rank_of(std::size_t j) const { return position_[j]; }
  /// Node positions sorted by ascending node id.
  std::span<const std::size_t> nodes_by_id() const noexcept { return nodes_by_id_; }

  std::span<const Edge> predecessors(std::size_t j) const { return predecessors_[j]; }
  std::span<const Edge> successors(std::size_t j) const { return successors_[j]; }

  double duration(std::size_t j, std::size_t i) const;
  double transfer(double data, std::size_t from, std::size_t to) const;
  double rate(std::size_t from, std::size_t to) const;
  bool has_rate_matrix() const noexcept { return !rates_.empty(); }
  double usage(std::size_t j, std::size_t i) const;

  bool feature_ok(std::size_t j, std::size_t i) const;
  /// Feature-feasible and, unless capacity is off, the single task fits the
  /// node's cores, memory and storage on its own.
  bool eligible(std::size_t j, std::size_t i) const;
  /// Eligible nodes of task j in ascending id order.
  std::span<const std::size_t> eligible_nodes(std::size_t j) const { return eligible_[j]; }

  UsageMode usage_mode() const noexcept { return usage_mode_; }
  CapacityMode capacity_mode() const noexcept { return capacity_mode_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double submission_time() const noexcept { return workflow_.submission_time; }

  std::size_t task_index(std::string_view id) const;
  std::size_t node_index(std::string_view id) const;

  Assignment to_dense(const IdAssignment& ids) const;
  IdAssignment to_ids(const Assignment& assignment) const;

  /// Objective weight assigned to every violation in penalized search:
  /// 10 x (alpha * sum of per-task max usage + beta * serial makespan bound).
  double default_penalty() const;

 private:
  std::vector<Node> nodes_;
  RateMatrix rates_;
  Workflow workflow_;
  UsageMode usage_mode_;
  CapacityMode capacity_mode_;
  double alpha_;
  double beta_;
  double total_cores_ = 0.0;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> position_;
  std::vector<std::size_t> nodes_by_id_;
  std::vector<std::vector<Edge>> predecessors_;
  std::vector<std::vector<Edge>> successors_;
  std::vector<std::vector<std::size_t>> eligible_;
  std::unordered_map<std::string, std::size_t> task_lookup_;
  std::unordered_map<std::string, std::size_t> node_lookup_;
};

/// Incremental earliest-start timing. Tasks are placed one at a time, each
/// after all of its predecessors. A task starts at the latest predecessor
/// finish plus cross-node transfer (or the workflow submission time); under
/// concurrent capacity it additionally waits for the earliest window in
/// which its node has room for its core and memory request. Placements can
/// be undone in LIFO order, which is what branch-and-bound needs.
class ScheduleBuilder {
 public:
  explicit ScheduleBuilder(const Problem& problem);

  double ready_time(std::size_t j, std::size_t i) const;
  double earliest_start(std::size_t j, std::size_t i) const;
  double earliest_finish(std::size_t j, std::size_t i) const {
    return earliest_start(j, i) + problem_->duration(j, i);
  }

  void place(std::size_t j, std::size_t i);
  void undo();

  bool placed(std::size_t j) const { return node_[j] != kUnplaced; }
  std::size_t node_of(std::size_t j) const { return node_[j]; }
  double start(std::size_t j) const { return start_[j]; }
  double finish(std::size_t j) const { return finish_[j]; }
  std::size_t placed_count() const noexcept { return history_.size(); }
  double makespan() const noexcept { return makespan_; }

  /// Requires every task placed.
  Schedule to_schedule() const;

 private:
  struct Busy {
    double start;
    double finish;
    double cores;
    double memory;
  };

  static constexpr std::size_t kUnplaced = static_cast<std::size_t>(-1);

  bool fits(const std::vector<Busy>& busy, double t, double d, double cores, double memory,
            const Node& node) const;

  const Problem* problem_;
  std::vector<std::size_t> node_;
  std::vector<double> start_;
  std::vector<double> finish_;
  std::vector<std::vector<Busy>> busy_;
  std::vector<std::size_t> history_;
  std::vector<double> makespan_history_;
  double makespan_ = 0.0;
};

/// Feature and capacity checks of an assignment under the problem's
/// capacity mode. Concurrent mode flags tasks that cannot fit their node
/// even alone (anything smaller is resolved by waiting); aggregate mode
/// sums the core and memory requests of everything mapped to a node.
FeasibilityReport check_feasibility(const Problem& problem, const Assignment& assignment);
FeasibilityReport check_feasibility(const IdAssignment& assignment, const Workflow& workflow,
                                    const Instance& instance);

/// Throws Error(infeasible_assignment) carrying the report summary.
Schedule build_schedule(const Problem& problem, const Assignment& assignment);
Schedule build_schedule(const IdAssignment& assignment, const Workflow& workflow,
                        const Instance& instance);

/// Timing without the feasibility gate; used by penalized searches.
Schedule time_assignment(const Problem& problem, const Assignment& assignment);

double evaluate_objective(const Schedule& schedule, const Problem& problem);

/// Checks a timed schedule against every constraint: features, capacity,
/// dependency + transfer precedence, and makespan = max finish.
FeasibilityReport verify_schedule(const Problem& problem, const Schedule& schedule);

}  // namespace csched
