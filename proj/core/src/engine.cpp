#include "csched/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "csched/error.hpp"
#include "csched/solve.hpp"

namespace csched {

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::feature: return "feature";
    case ViolationKind::capacity: return "capacity";
    case ViolationKind::dependency: return "dependency";
  }
  return "unknown";
}

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::timeout: return "timeout";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "infeasible";
}

std::string FeasibilityReport::summary() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    if (k > 0) out << "; ";
    out << violations[k].task_id << " [" << to_string(violations[k].kind) << "] " << violations[k].detail;
  }
  return out.str();
}

std::optional<std::size_t> first_unplaceable_task(const Problem& problem) {
  for (auto j : problem.order()) {
    if (problem.eligible_nodes(j).empty()) return j;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- Problem

Problem::Problem(const Instance& instance, const Workflow& workflow)
    : nodes_(instance.nodes),
      rates_(instance.transfer_rates),
      workflow_(workflow),
      usage_mode_(instance.usage_mode),
      capacity_mode_(instance.capacity_mode),
      alpha_(instance.alpha),
      beta_(instance.beta) {
  Instance check;
  check.nodes = instance.nodes;
  check.transfer_rates = instance.transfer_rates;
  check.usage_mode = instance.usage_mode;
  check.capacity_mode = instance.capacity_mode;
  check.alpha = instance.alpha;
  check.beta = instance.beta;
  check.workflows.push_back(workflow);
  validate_instance(check);

  const auto ids = validate_workflow(workflow_);
  const auto n = workflow_.tasks.size();
  for (std::size_t j = 0; j < n; ++j) task_lookup_.emplace(workflow_.tasks[j].id, j);
  for (std::size_t i = 0; i < nodes_.size(); ++i) node_lookup_.emplace(nodes_[i].id, i);

  for (const auto& node : nodes_) total_cores_ += static_cast<double>(node.cores);
  if (usage_mode_ == UsageMode::scaled && n > 0 && total_cores_ <= 0.0) {
    throw Error(Errc::zero_total_capacity, "scaled usage needs a positive total core count");
  }

  position_.resize(n);
  order_.reserve(n);
  for (const auto& id : ids) {
    const auto j = task_index(id);
    position_[j] = order_.size();
    order_.push_back(j);
  }

  nodes_by_id_.resize(nodes_.size());
  std::iota(nodes_by_id_.begin(), nodes_by_id_.end(), std::size_t{0});
  std::stable_sort(nodes_by_id_.begin(), nodes_by_id_.end(),
                   [&](std::size_t a, std::size_t b) { return id_less(nodes_[a].id, nodes_[b].id); });

  predecessors_.resize(n);
  successors_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& task = workflow_.tasks[j];
    for (const auto& dep : task.dependencies) {
      const auto p = task_index(dep);
      auto& preds = predecessors_[j];
      if (std::any_of(preds.begin(), preds.end(), [&](const Edge& e) { return e.task == p; })) continue;
      const auto override_it = task.edge_data.find(dep);
      const double data =
          override_it != task.edge_data.end() ? override_it->second : workflow_.tasks[p].data_out;
      preds.push_back({p, data});
      successors_[p].push_back({j, data});
    }
  }

  eligible_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (auto i : nodes_by_id_) {
      if (eligible(j, i)) eligible_[j].push_back(i);
    }
  }
}

double Problem::duration(std::size_t j, std::size_t i) const {
  return compute_duration(workflow_.tasks[j], i, nodes_[i]);
}

double Problem::rate(std::size_t from, std::size_t to) const {
  if (!rates_.empty()) return rates_[from][to];
  return std::min(nodes_[from].data_transfer_rate, nodes_[to].data_transfer_rate);
}

double Problem::transfer(double data, std::size_t from, std::size_t to) const {
  if (from == to) return 0.0;
  return data / rate(from, to);
}

double Problem::usage(std::size_t j, std::size_t i) const {
  const auto request = static_cast<double>(workflow_.tasks[j].cores);
  if (usage_mode_ == UsageMode::requested) return request;
  return request * (static_cast<double>(nodes_[i].cores) / total_cores_);
}

bool Problem::feature_ok(std::size_t j, std::size_t i) const {
  return feature_feasible(workflow_.tasks[j], nodes_[i]);
}

bool Problem::eligible(std::size_t j, std::size_t i) const {
  if (!feature_ok(j, i)) return false;
  if (capacity_mode_ == CapacityMode::off) return true;
  const auto& task = workflow_.tasks[j];
  const auto& node = nodes_[i];
  return task.cores <= node.cores && task.memory <= node.memory && task.data_out <= node.storage;
}

std::size_t Problem::task_index(std::string_view id) const {
  if (auto it = task_lookup_.find(std::string(id)); it != task_lookup_.end()) return it->second;
  throw Error(Errc::invalid_argument, "unknown task '" + std::string(id) + "'");
}

std::size_t Problem::node_index(std::string_view id) const {
  if (auto it = node_lookup_.find(std::string(id)); it != node_lookup_.end()) return it->second;
  throw Error(Errc::invalid_argument, "unknown node '" + std::string(id) + "'");
}

Assignment Problem::to_dense(const IdAssignment& ids) const {
  Assignment dense(task_count());
  for (std::size_t j = 0; j < task_count(); ++j) {
    auto it = ids.find(workflow_.tasks[j].id);
    if (it == ids.end()) {
      throw Error(Errc::invalid_argument, "assignment misses task '" + workflow_.tasks[j].id + "'");
    }
    dense[j] = node_index(it->second);
  }
  return dense;
}

IdAssignment Problem::to_ids(const Assignment& assignment) const {
  IdAssignment ids;
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    ids[workflow_.tasks[j].id] = nodes_[assignment[j]].id;
  }
  return ids;
}

double Problem::default_penalty() const {
  double min_rate = kUnlimited;
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    if (rates_.empty()) {
      min_rate = std::min(min_rate, nodes_[a].data_transfer_rate);
    } else {
      for (std::size_t b = 0; b < nodes_.size(); ++b) {
        if (a != b) min_rate = std::min(min_rate, rates_[a][b]);
      }
    }
  }
  double usage_bound = 0.0;
  double time_bound = submission_time();
  for (std::size_t j = 0; j < task_count(); ++j) {
    double max_usage = 0.0;
    double max_duration = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      max_usage = std::max(max_usage, usage(j, i));
      max_duration = std::max(max_duration, duration(j, i));
    }
    usage_bound += max_usage;
    time_bound += max_duration;
    if (std::isfinite(min_rate)) {
      for (const auto& edge : predecessors_[j]) time_bound += edge.data / min_rate;
    }
  }
  const double bound = 10.0 * (alpha_ * usage_bound + beta_ * time_bound);
  return bound > 0.0 ? bound : 1.0;
}

// --------------------------------------------------------- ScheduleBuilder

ScheduleBuilder::ScheduleBuilder(const Problem& problem)
    : problem_(&problem),
      node_(problem.task_count(), kUnplaced),
      start_(problem.task_count(), 0.0),
      finish_(problem.task_count(), 0.0),
      busy_(problem.node_count()) {
  history_.reserve(problem.task_count());
  makespan_history_.reserve(problem.task_count());
}

double ScheduleBuilder::ready_time(std::size_t j, std::size_t i) const {
  double ready = problem_->submission_time();
  for (const auto& edge : problem_->predecessors(j)) {
    const double arrival = finish_[edge.task] + problem_->transfer(edge.data, node_[edge.task], i);
    ready = std::max(ready, arrival);
  }
  return ready;
}

bool ScheduleBuilder::fits(const std::vector<Busy>& busy, double t, double d, double cores,
                           double memory, const Node& node) const {
  const double end = t + d;
  auto load_ok = [&](double point) {
    double used_cores = cores;
    double used_memory = memory;
    for (const auto& b : busy) {
      if (b.start <= point && point < b.finish) {
        used_cores += b.cores;
        used_memory += b.memory;
      }
    }
    return used_cores <= static_cast<double>(node.cores) && used_memory <= node.memory;
  };
  if (!load_ok(t)) return false;
  for (const auto& b : busy) {
    if (b.start > t && b.start < end && !load_ok(b.start)) return false;
  }
  return true;
}

double ScheduleBuilder::earliest_start(std::size_t j, std::size_t i) const {
  const double ready = ready_time(j, i);
  if (problem_->capacity_mode() != CapacityMode::concurrent) return ready;
  const double d = problem_->duration(j, i);
  if (!(d > 0.0)) return ready;
  const auto& task = problem_->task(j);
  const auto& node = problem_->node(i);
  const auto cores = static_cast<double>(task.cores);
  // A task that cannot fit even alone never waits; check_feasibility
  // reports it instead.
  if (cores > static_cast<double>(node.cores) || task.memory > node.memory) return ready;

  const auto& busy = busy_[i];
  if (fits(busy, ready, d, cores, task.memory, node)) return ready;
  std::vector<double> candidates;
  candidates.reserve(busy.size());
  for (const auto& b : busy) {
    if (b.finish > ready) candidates.push_back(b.finish);
  }
  std::sort(candidates.begin(), candidates.end());
  for (double t : candidates) {
    if (fits(busy, t, d, cores, task.memory, node)) return t;
  }
  return candidates.empty() ? ready : candidates.back();
}

void ScheduleBuilder::place(std::size_t j, std::size_t i) {
  const double s = earliest_start(j, i);
  const double f = s + problem_->duration(j, i);
  node_[j] = i;
  start_[j] = s;
  finish_[j] = f;
  busy_[i].push_back({s, f, static_cast<double>(problem_->task(j).cores), problem_->task(j).memory});
  history_.push_back(j);
  makespan_history_.push_back(makespan_);
  makespan_ = std::max(makespan_, f);
}

void ScheduleBuilder::undo() {
  const auto j = history_.back();
  history_.pop_back();
  busy_[node_[j]].pop_back();
  node_[j] = kUnplaced;
  makespan_ = makespan_history_.back();
  makespan_history_.pop_back();
}

Schedule ScheduleBuilder::to_schedule() const {
  const auto& p = *problem_;
  Schedule schedule;
  schedule.workflow_id = p.workflow().id;
  schedule.entries.reserve(p.task_count());
  double makespan = 0.0;
  double usage = 0.0;
  for (std::size_t j = 0; j < p.task_count(); ++j) {
    if (!placed(j)) {
      throw Error(Errc::invalid_argument, "task '" + p.task(j).id + "' has not been placed");
    }
    const double u = p.usage(j, node_[j]);
    schedule.entries.push_back({p.task(j).id, p.node(node_[j]).id, start_[j], finish_[j], u});
    makespan = std::max(makespan, finish_[j]);
    usage += u;
  }
  schedule.makespan = makespan;
  schedule.total_usage = usage;
  schedule.objective = p.alpha() * usage + p.beta() * makespan;
  return schedule;
}

// ------------------------------------------------------------- operations

namespace {

void require_total(const Problem& problem, const Assignment& assignment) {
  if (assignment.size() != problem.task_count()) {
    throw Error(Errc::invalid_argument, "assignment covers " + std::to_string(assignment.size()) +
                                            " of " + std::to_string(problem.task_count()) + " tasks");
  }
  for (auto i : assignment) {
    if (i >= problem.node_count()) throw Error(Errc::invalid_argument, "assignment names a missing node");
  }
}

std::string fmt_amount(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

}  // namespace

FeasibilityReport check_feasibility(const Problem& problem, const Assignment& assignment) {
  require_total(problem, assignment);
  FeasibilityReport report;
  const auto mode = problem.capacity_mode();

  for (std::size_t j = 0; j < problem.task_count(); ++j) {
    const auto& task = problem.task(j);
    const auto& node = problem.node(assignment[j]);
    if (!problem.feature_ok(j, assignment[j])) {
      report.violations.push_back({task.id, ViolationKind::feature,
                                   "node '" + node.id + "' lacks a required feature"});
    }
    if (mode == CapacityMode::off) continue;
    if (task.data_out > node.storage) {
      report.violations.push_back({task.id, ViolationKind::capacity,
                                   "data " + fmt_amount(task.data_out) + " GB exceeds storage of '" +
                                       node.id + "'"});
    }
    if (mode == CapacityMode::concurrent &&
        (task.cores > node.cores || task.memory > node.memory)) {
      report.violations.push_back({task.id, ViolationKind::capacity,
                                   "request exceeds capacity of '" + node.id + "'"});
    }
  }

  if (mode == CapacityMode::aggregate) {
    std::vector<double> cores(problem.node_count(), 0.0);
    std::vector<double> memory(problem.node_count(), 0.0);
    std::vector<bool> reported(problem.node_count(), false);
    for (std::size_t j = 0; j < problem.task_count(); ++j) {
      const auto i = assignment[j];
      cores[i] += static_cast<double>(problem.task(j).cores);
      memory[i] += problem.task(j).memory;
      const auto& node = problem.node(i);
      if (!reported[i] && (cores[i] > static_cast<double>(node.cores) || memory[i] > node.memory)) {
        reported[i] = true;
        report.violations.push_back({problem.task(j).id, ViolationKind::capacity,
                                     "aggregate usage exceeds capacity of '" + node.id + "'"});
      }
    }
  }
  return report;
}

FeasibilityReport check_feasibility(const IdAssignment& assignment, const Workflow& workflow,
                                    const Instance& instance) {
  const Problem problem(instance, workflow);
  return check_feasibility(problem, problem.to_dense(assignment));
}

Schedule time_assignment(const Problem& problem, const Assignment& assignment) {
  require_total(problem, assignment);
  ScheduleBuilder builder(problem);
  for (auto j : problem.order()) builder.place(j, assignment[j]);
  return builder.to_schedule();
}

Schedule build_schedule(const Problem& problem, const Assignment& assignment) {
  const auto report = check_feasibility(problem, assignment);
  if (!report.feasible()) throw Error(Errc::infeasible_assignment, report.summary());
  return time_assignment(problem, assignment);
}

Schedule build_schedule(const IdAssignment& assignment, const Workflow& workflow,
                        const Instance& instance) {
  const Problem problem(instance, workflow);
  return build_schedule(problem, problem.to_dense(assignment));
}

double evaluate_objective(const Schedule& schedule, const Problem& problem) {
  double usage = 0.0;
  double makespan = 0.0;
  for (const auto& entry : schedule.entries) {
    const auto j = problem.task_index(entry.task_id);
    usage += problem.usage(j, problem.node_index(entry.node_id));
    makespan = std::max(makespan, entry.finish);
  }
  return problem.alpha() * usage + problem.beta() * makespan;
}

FeasibilityReport verify_schedule(const Problem& problem, const Schedule& schedule) {
  constexpr double kSlack = 1e-9;
  FeasibilityReport report;
  const auto n = problem.task_count();
  if (schedule.entries.size() != n) {
    report.violations.push_back({"", ViolationKind::dependency,
                                 "schedule has " + std::to_string(schedule.entries.size()) +
                                     " entries for " + std::to_string(n) + " tasks"});
    return report;
  }

  Assignment assignment(n);
  std::vector<const ScheduleEntry*> by_task(n, nullptr);
  for (const auto& entry : schedule.entries) {
    const auto j = problem.task_index(entry.task_id);
    if (by_task[j] != nullptr) {
      report.violations.push_back({entry.task_id, ViolationKind::dependency, "task scheduled twice"});
      return report;
    }
    by_task[j] = &entry;
    assignment[j] = problem.node_index(entry.node_id);
  }

  report = check_feasibility(problem, assignment);
  if (problem.capacity_mode() == CapacityMode::concurrent) {
    for (std::size_t i = 0; i < problem.node_count(); ++i) {
      const auto& node = problem.node(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (assignment[j] != i || !(by_task[j]->finish > by_task[j]->start)) continue;
        const double point = by_task[j]->start;
        double cores = 0.0;
        double memory = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (assignment[k] != i) continue;
          if (by_task[k]->start <= point && point < by_task[k]->finish) {
            cores += static_cast<double>(problem.task(k).cores);
            memory += problem.task(k).memory;
          }
        }
        if (cores > static_cast<double>(node.cores) || memory > node.memory) {
          report.violations.push_back({problem.task(j).id, ViolationKind::capacity,
                                       "overlapping requests exceed capacity of '" + node.id + "'"});
        }
      }
    }
  }

  double makespan = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& entry = *by_task[j];
    const double expected = problem.duration(j, assignment[j]);
    if (std::abs(entry.finish - entry.start - expected) > kSlack * std::max(1.0, expected) ||
        entry.start + kSlack < problem.submission_time()) {
      report.violations.push_back({entry.task_id, ViolationKind::dependency, "inconsistent timing"});
    }
    for (const auto& edge : problem.predecessors(j)) {
      const double earliest =
          by_task[edge.task]->finish + problem.transfer(edge.data, assignment[edge.task], assignment[j]);
      if (entry.start + kSlack * std::max(1.0, earliest) < earliest) {
        report.violations.push_back({entry.task_id, ViolationKind::dependency,
                                     "starts before predecessor '" + problem.task(edge.task).id +
                                         "' data arrives"});
      }
    }
    makespan = std::max(makespan, entry.finish);
  }
  if (std::abs(makespan - schedule.makespan) > kSlack * std::max(1.0, makespan)) {
    report.violations.push_back({"", ViolationKind::dependency, "makespan differs from max finish"});
  }
  return report;
}

}  // namespace csched
