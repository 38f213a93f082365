#include "csched/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "csched/error.hpp"

namespace csched {
namespace {

struct Link {
  std::size_t from;
  double data;
};

struct Timing {
  std::vector<double> start;
  std::vector<double> finish;
};

}  // namespace

SolveResult brute_force_optimum(const Instance& instance, const Workflow& workflow) {
  const auto started = std::chrono::steady_clock::now();
  {
    Instance copy = instance;
    copy.workflows = {workflow};
    validate_instance(copy);
  }

  const auto& nodes = instance.nodes;
  const auto& tasks = workflow.tasks;
  const std::size_t n = tasks.size();
  const std::size_t m = nodes.size();

  SolveResult result;
  result.technique = "brute";

  if (n > 0 && std::pow(static_cast<double>(m), static_cast<double>(n)) > kBruteForceLimit) {
    throw Error(Errc::too_large, std::to_string(m) + "^" + std::to_string(n) + " assignments exceed the guard");
  }

  // Incoming links per task.
  std::vector<std::vector<Link>> incoming(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& dep : tasks[j].dependencies) {
      std::size_t p = n;
      for (std::size_t k = 0; k < n; ++k) {
        if (tasks[k].id == dep) p = k;
      }
      if (p == n) throw Error(Errc::unknown_dependency, "task '" + tasks[j].id + "' depends on '" + dep + "'");
      bool seen = false;
      for (const auto& link : incoming[j]) seen = seen || link.from == p;
      if (seen) continue;
      auto it = tasks[j].edge_data.find(dep);
      incoming[j].push_back({p, it != tasks[j].edge_data.end() ? it->second : tasks[p].data_out});
    }
  }

  // Topological order by repeated selection of the smallest ready id.
  std::vector<std::size_t> order;
  std::vector<bool> done(n, false);
  while (order.size() < n) {
    std::size_t pick = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (done[j]) continue;
      bool ready = true;
      for (const auto& link : incoming[j]) ready = ready && done[link.from];
      if (ready && (pick == n || id_less(tasks[j].id, tasks[pick].id))) pick = j;
    }
    if (pick == n) throw Error(Errc::cycle_detected, "workflow '" + workflow.id + "' is cyclic");
    done[pick] = true;
    order.push_back(pick);
  }

  std::vector<std::size_t> by_id(m);
  for (std::size_t i = 0; i < m; ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(), [&](auto a, auto b) { return id_less(nodes[a].id, nodes[b].id); });

  auto rate = [&](std::size_t a, std::size_t b) {
    if (!instance.transfer_rates.empty()) return instance.transfer_rates[a][b];
    return std::min(nodes[a].data_transfer_rate, nodes[b].data_transfer_rate);
  };

  auto admissible = [&](const std::vector<std::size_t>& node_of) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!feature_feasible(tasks[j], nodes[node_of[j]])) return false;
    }
    if (instance.capacity_mode == CapacityMode::off) return true;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& node = nodes[node_of[j]];
      if (tasks[j].data_out > node.storage) return false;
      if (instance.capacity_mode == CapacityMode::concurrent &&
          (tasks[j].cores > node.cores || tasks[j].memory > node.memory)) {
        return false;
      }
    }
    if (instance.capacity_mode == CapacityMode::aggregate) {
      for (std::size_t i = 0; i < m; ++i) {
        double used = 0.0;
        double memory = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (node_of[j] != i) continue;
          used += static_cast<double>(tasks[j].cores);
          memory += tasks[j].memory;
          if (used > static_cast<double>(nodes[i].cores) || memory > nodes[i].memory) return false;
        }
      }
    }
    return true;
  };

  auto timing = [&](const std::vector<std::size_t>& node_of) {
    Timing t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    std::vector<bool> timed(n, false);
    for (auto j : order) {
      const auto i = node_of[j];
      const double d = compute_duration(tasks[j], i, nodes[i]);
      double ready = workflow.submission_time;
      for (const auto& link : incoming[j]) {
        const auto pi = node_of[link.from];
        const double arrive = t.finish[link.from] + (pi == i ? 0.0 : link.data / rate(pi, i));
        if (arrive > ready) ready = arrive;
      }
      double start = ready;
      if (instance.capacity_mode == CapacityMode::concurrent && d > 0.0) {
        // Candidate starts: the ready time, then each finish on this node.
        std::vector<double> candidates{ready};
        for (std::size_t k = 0; k < n; ++k) {
          if (timed[k] && node_of[k] == i && t.finish[k] > ready) candidates.push_back(t.finish[k]);
        }
        std::sort(candidates.begin(), candidates.end());
        for (double c : candidates) {
          bool ok = true;
          std::vector<double> points{c};
          for (std::size_t k = 0; k < n; ++k) {
            if (timed[k] && node_of[k] == i && t.start[k] > c && t.start[k] < c + d) points.push_back(t.start[k]);
          }
          for (double p : points) {
            double cores = static_cast<double>(tasks[j].cores);
            double memory = tasks[j].memory;
            for (std::size_t k = 0; k < n; ++k) {
              if (timed[k] && node_of[k] == i && t.start[k] <= p && p < t.finish[k]) {
                cores += static_cast<double>(tasks[k].cores);
                memory += tasks[k].memory;
              }
            }
            if (cores > static_cast<double>(nodes[i].cores) || memory > nodes[i].memory) ok = false;
          }
          if (ok) {
            start = c;
            break;
          }
        }
      }
      t.start[j] = start;
      t.finish[j] = start + d;
      timed[j] = true;
    }
    return t;
  };

  std::vector<std::size_t> digits(n, 0);  // per topological position, index into by_id
  std::vector<std::size_t> node_of(n, 0);
  bool have_best = false;
  double best_objective = 0.0;
  Schedule best;
  std::vector<std::size_t> best_nodes;
  std::uint64_t visited = 0;

  // With tasks but no nodes there is nothing to enumerate.
  bool more = !(n > 0 && m == 0);
  while (more) {
    for (std::size_t k = 0; k < n; ++k) node_of[order[k]] = by_id[digits[k]];
    ++visited;
    if (admissible(node_of)) {
      const auto t = timing(node_of);
      double usage = 0.0;
      double makespan = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        usage += resource_usage(tasks[j], nodes[node_of[j]], nodes, instance.usage_mode);
        makespan = std::max(makespan, t.finish[j]);
      }
      const double objective = instance.alpha * usage + instance.beta * makespan;
      if (!have_best || objective < best_objective) {
        have_best = true;
        best_objective = objective;
        best_nodes = node_of;
        best = Schedule{workflow.id, {}, makespan, usage, objective};
        for (std::size_t j = 0; j < n; ++j) {
          best.entries.push_back({tasks[j].id, nodes[node_of[j]].id, t.start[j], t.finish[j],
                                  resource_usage(tasks[j], nodes[node_of[j]], nodes, instance.usage_mode)});
        }
      }
    }
    // Odometer: the last topological position varies fastest.
    more = false;
    for (std::size_t k = n; k-- > 0;) {
      if (++digits[k] < m) {
        more = true;
        break;
      }
      digits[k] = 0;
    }
  }

  result.explored_nodes = visited;
  if (have_best) {
    result.status = SolveStatus::optimal;
    result.schedule = best;
    result.assignment = best_nodes;
    result.objective = best_objective;
  } else {
    result.status = SolveStatus::infeasible;
    result.detail = "no assignment passes the feasibility filter";
  }
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace csched
