#include "csched/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <queue>

#include "csched/error.hpp"

namespace csched {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Running per-node sums for the aggregate capacity mode.
class AggregateLedger {
 public:
  explicit AggregateLedger(const Problem& problem)
      : problem_(problem), cores_(problem.node_count(), 0.0), memory_(problem.node_count(), 0.0) {}

  bool fits(std::size_t j, std::size_t i) const {
    if (problem_.capacity_mode() != CapacityMode::aggregate) return true;
    const auto& node = problem_.node(i);
    return cores_[i] + static_cast<double>(problem_.task(j).cores) <= static_cast<double>(node.cores) &&
           memory_[i] + problem_.task(j).memory <= node.memory;
  }

  void add(std::size_t j, std::size_t i) {
    cores_[i] += static_cast<double>(problem_.task(j).cores);
    memory_[i] += problem_.task(j).memory;
  }

 private:
  const Problem& problem_;
  std::vector<double> cores_;
  std::vector<double> memory_;
};

SolveResult finish(const Problem& problem, std::string technique, const Assignment& assignment,
                   Clock::time_point started) {
  SolveResult result;
  result.technique = std::move(technique);
  result.schedule = build_schedule(problem, assignment);
  result.assignment = assignment;
  result.objective = result.schedule->objective;
  result.status = SolveStatus::feasible;
  result.wall_time = seconds_since(started);
  return result;
}

SolveResult infeasible(std::string technique, std::string detail, Clock::time_point started) {
  SolveResult result;
  result.technique = std::move(technique);
  result.status = SolveStatus::infeasible;
  result.detail = std::move(detail);
  result.wall_time = seconds_since(started);
  return result;
}

}  // namespace

double mean_inverse_rate(const Problem& problem) {
  const auto n = problem.node_count();
  if (n < 2) return 0.0;
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  if (problem.has_rate_matrix()) {
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b) sum += 1.0 / problem.rate(a, b);
      }
    }
    return sum / pairs;
  }
  // Bottleneck rule: in ascending rate order the k-th node is the slower end
  // of every pair it forms with the n-1-k faster ones.
  std::vector<double> rates;
  rates.reserve(n);
  for (const auto& node : problem.nodes()) rates.push_back(node.data_transfer_rate);
  std::sort(rates.begin(), rates.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += static_cast<double>(n - 1 - k) / rates[k];
  return 2.0 * sum / pairs;
}

std::vector<double> upward_ranks(const Problem& problem) {
  const auto n = problem.task_count();
  const double inv_rate = mean_inverse_rate(problem);
  std::vector<double> rank(n, 0.0);
  const auto order = problem.order();
  for (std::size_t k = order.size(); k-- > 0;) {
    const auto j = order[k];
    auto nodes = problem.eligible_nodes(j);
    double mean = 0.0;
    for (auto i : nodes) mean += problem.duration(j, i);
    if (!nodes.empty()) mean /= static_cast<double>(nodes.size());
    double tail = 0.0;
    for (const auto& edge : problem.successors(j)) {
      tail = std::max(tail, edge.data * inv_rate + rank[edge.task]);
    }
    rank[j] = mean + tail;
  }
  return rank;
}

SolveResult solve_heft(const Problem& problem) {
  const auto started = Clock::now();
  if (auto j = first_unplaceable_task(problem)) {
    return infeasible("heft", "task '" + problem.task(*j).id + "' has no feature-feasible node", started);
  }

  const auto n = problem.task_count();
  const auto rank = upward_ranks(problem);
  auto lower_priority = [&](std::size_t a, std::size_t b) {
    if (rank[a] != rank[b]) return rank[a] < rank[b];
    return id_less(problem.task(b).id, problem.task(a).id);
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(lower_priority)> ready(lower_priority);

  std::vector<std::size_t> waiting(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    waiting[j] = problem.predecessors(j).size();
    if (waiting[j] == 0) ready.push(j);
  }

  ScheduleBuilder builder(problem);
  AggregateLedger ledger(problem);
  Assignment assignment(n, 0);
  while (!ready.empty()) {
    const auto j = ready.top();
    ready.pop();
    std::optional<std::size_t> chosen;
    double best_finish = kUnlimited;
    for (auto i : problem.eligible_nodes(j)) {
      if (!ledger.fits(j, i)) continue;
      const double eft = builder.earliest_finish(j, i);
      if (!chosen || eft < best_finish) {
        chosen = i;
        best_finish = eft;
      }
    }
    if (!chosen) {
      return infeasible("heft", "no node has aggregate capacity left for task '" + problem.task(j).id + "'",
                        started);
    }
    builder.place(j, *chosen);
    ledger.add(j, *chosen);
    assignment[j] = *chosen;
    for (const auto& edge : problem.successors(j)) {
      if (--waiting[edge.task] == 0) ready.push(edge.task);
    }
  }
  return finish(problem, "heft", assignment, started);
}

SolveResult solve_olb(const Problem& problem) {
  const auto started = Clock::now();
  if (auto j = first_unplaceable_task(problem)) {
    return infeasible("olb", "task '" + problem.task(*j).id + "' has no feature-feasible node", started);
  }

  ScheduleBuilder builder(problem);
  AggregateLedger ledger(problem);
  Assignment assignment(problem.task_count(), 0);
  for (auto j : problem.order()) {
    std::optional<std::size_t> chosen;
    double best_start = kUnlimited;
    for (auto i : problem.eligible_nodes(j)) {
      if (!ledger.fits(j, i)) continue;
      const double start = builder.earliest_start(j, i);
      if (!chosen || start < best_start) {
        chosen = i;
        best_start = start;
      }
    }
    if (!chosen) {
      return infeasible("olb", "no node has aggregate capacity left for task '" + problem.task(j).id + "'",
                        started);
    }
    builder.place(j, *chosen);
    ledger.add(j, *chosen);
    assignment[j] = *chosen;
  }
  return finish(problem, "olb", assignment, started);
}

}  // namespace csched
