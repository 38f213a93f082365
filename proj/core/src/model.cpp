#include "csched/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "csched/error.hpp"

namespace csched {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::unknown_dependency: return "UnknownDependency";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::zero_capacity: return "ZeroCapacity";
    case Errc::zero_total_capacity: return "ZeroTotalCapacity";
    case Errc::missing_duration: return "MissingDuration";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::parse_error: return "ParseError";
    case Errc::schema_error: return "SchemaError";
    case Errc::infeasible_assignment: return "InfeasibleAssignment";
    case Errc::too_large: return "TooLarge";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

std::string_view to_string(UsageMode mode) noexcept {
  return mode == UsageMode::requested ? "requested" : "scaled";
}

std::string_view to_string(CapacityMode mode) noexcept {
  switch (mode) {
    case CapacityMode::concurrent: return "concurrent";
    case CapacityMode::aggregate: return "aggregate";
    case CapacityMode::off: return "off";
  }
  return "off";
}

UsageMode parse_usage_mode(std::string_view text) {
  if (text == "requested") return UsageMode::requested;
  if (text == "scaled") return UsageMode::scaled;
  throw Error(Errc::invalid_argument, "unknown usage mode '" + std::string(text) + "'");
}

CapacityMode parse_capacity_mode(std::string_view text) {
  if (text == "concurrent") return CapacityMode::concurrent;
  if (text == "aggregate") return CapacityMode::aggregate;
  if (text == "off") return CapacityMode::off;
  throw Error(Errc::invalid_argument, "unknown capacity mode '" + std::string(text) + "'");
}

bool id_less(std::string_view a, std::string_view b) noexcept {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ei = i;
      std::size_t ej = j;
      while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
      while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
      // Compare digit runs by value: strip leading zeros, then length, then text.
      std::size_t si = i;
      std::size_t sj = j;
      while (si + 1 < ei && a[si] == '0') ++si;
      while (sj + 1 < ej && b[sj] == '0') ++sj;
      if (ei - si != ej - sj) return ei - si < ej - sj;
      const auto ra = a.substr(si, ei - si);
      const auto rb = b.substr(sj, ej - sj);
      if (ra != rb) return ra < rb;
      if (ei - i != ej - j) return ei - i < ej - j;
      i = ei;
      j = ej;
      continue;
    }
    if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
    ++i;
    ++j;
  }
  return a.size() - i < b.size() - j;
}

void validate_instance(const Instance& instance) {
  std::unordered_set<std::string> seen;
  for (const auto& node : instance.nodes) {
    if (!seen.insert(node.id).second) {
      throw Error(Errc::duplicate_id, "node id '" + node.id + "' appears twice");
    }
    if (!(node.processing_speed > 0.0)) {
      throw Error(Errc::invalid_argument, "node '" + node.id + "' processing_speed must be > 0");
    }
    if (!(node.data_transfer_rate > 0.0)) {
      throw Error(Errc::invalid_argument, "node '" + node.id + "' data_transfer_rate must be > 0");
    }
    if (node.cores < 0 || node.memory < 0.0 || node.storage < 0.0) {
      throw Error(Errc::schema_error, "node '" + node.id + "' has a negative capacity");
    }
  }
  if (!instance.transfer_rates.empty()) {
    if (instance.transfer_rates.size() != instance.nodes.size()) {
      throw Error(Errc::invalid_argument, "transfer rate matrix must be node_count x node_count");
    }
    for (const auto& row : instance.transfer_rates) {
      if (row.size() != instance.nodes.size()) {
        throw Error(Errc::invalid_argument, "transfer rate matrix must be node_count x node_count");
      }
      for (double rate : row) {
        if (!(rate > 0.0)) throw Error(Errc::invalid_argument, "transfer rates must be > 0");
      }
    }
  }
  if (!(instance.alpha >= 0.0) || !(instance.beta >= 0.0) || !(instance.alpha + instance.beta > 0.0)) {
    throw Error(Errc::invalid_argument, "alpha and beta must be non-negative with a positive sum");
  }
  for (const auto& workflow : instance.workflows) {
    if (workflow.submission_time < 0.0) {
      throw Error(Errc::invalid_argument, "workflow '" + workflow.id + "' has negative submission time");
    }
    for (const auto& task : workflow.tasks) {
      const auto n = task.durations.size();
      if (n > 1 && n != instance.nodes.size()) {
        throw Error(Errc::invalid_argument,
                    "task '" + task.id + "' lists " + std::to_string(n) + " durations for " +
                        std::to_string(instance.nodes.size()) + " nodes");
      }
      if (task.durations.empty() && !task.work) {
        throw Error(Errc::missing_duration, "task '" + task.id + "' has neither duration nor work");
      }
    }
  }
}

std::vector<std::string> validate_workflow(const Workflow& workflow) {
  const auto n = workflow.tasks.size();
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!index.emplace(workflow.tasks[j].id, j).second) {
      throw Error(Errc::duplicate_id, "task id '" + workflow.tasks[j].id + "' appears twice in workflow '" +
                                          workflow.id + "'");
    }
  }

  std::vector<std::vector<std::size_t>> successors(n);
  std::vector<std::vector<std::size_t>> predecessors(n);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& task = workflow.tasks[j];
    for (const auto& dep : task.dependencies) {
      auto it = index.find(dep);
      if (it == index.end()) {
        throw Error(Errc::unknown_dependency,
                    "task '" + task.id + "' depends on unknown task '" + dep + "'");
      }
      if (it->second == j) {
        throw Error(Errc::cycle_detected, "task '" + task.id + "' depends on itself");
      }
      auto& preds = predecessors[j];
      if (std::find(preds.begin(), preds.end(), it->second) != preds.end()) continue;
      preds.push_back(it->second);
      successors[it->second].push_back(j);
      ++indegree[j];
    }
  }

  auto later = [&](std::size_t a, std::size_t b) {
    return id_less(workflow.tasks[b].id, workflow.tasks[a].id);
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
  for (std::size_t j = 0; j < n; ++j) {
    if (indegree[j] == 0) ready.push(j);
  }

  std::vector<std::string> order;
  order.reserve(n);
  while (!ready.empty()) {
    const auto j = ready.top();
    ready.pop();
    order.push_back(workflow.tasks[j].id);
    for (auto k : successors[j]) {
      if (--indegree[k] == 0) ready.push(k);
    }
  }

  if (order.size() != n) {
    // Walk predecessor links among the unprocessed tasks until one repeats;
    // that task lies on a cycle.
    std::size_t current = 0;
    while (indegree[current] == 0) ++current;
    std::vector<bool> visited(n, false);
    while (!visited[current]) {
      visited[current] = true;
      for (auto p : predecessors[current]) {
        if (indegree[p] > 0) {
          current = p;
          break;
        }
      }
    }
    throw Error(Errc::cycle_detected, "workflow '" + workflow.id + "' has a dependency cycle through task '" +
                                          workflow.tasks[current].id + "'");
  }
  return order;
}

namespace {

double task_request(const Task& task, Resource resource) {
  switch (resource) {
    case Resource::cores: return static_cast<double>(task.cores);
    case Resource::memory: return task.memory;
    case Resource::storage: return task.data_out;
  }
  return 0.0;
}

double node_capacity(const Node& node, Resource resource) {
  switch (resource) {
    case Resource::cores: return static_cast<double>(node.cores);
    case Resource::memory: return node.memory;
    case Resource::storage: return node.storage;
  }
  return 0.0;
}

}  // namespace

double allocation_ratio(const Task& task, const Node& node, Resource resource) {
  const double request = task_request(task, resource);
  const double capacity = node_capacity(node, resource);
  if (request == 0.0) return 0.0;
  if (capacity == 0.0) {
    throw Error(Errc::zero_capacity, "node '" + node.id + "' has zero capacity for a request of task '" +
                                         task.id + "'");
  }
  return request / capacity;
}

bool feature_feasible(const Task& task, const Node& node) {
  return std::includes(node.features.begin(), node.features.end(), task.features.begin(),
                       task.features.end());
}

double compute_duration(const Task& task, std::size_t node_index, const Node& node) {
  if (!task.durations.empty()) {
    if (task.durations.size() == 1) return task.durations.front();
    if (node_index >= task.durations.size()) {
      throw Error(Errc::invalid_argument, "task '" + task.id + "' has no duration for node index " +
                                              std::to_string(node_index));
    }
    return task.durations[node_index];
  }
  if (!task.work) {
    throw Error(Errc::missing_duration, "task '" + task.id + "' has neither duration nor work");
  }
  return *task.work / node.processing_speed;
}

double transfer_time(double data_gb, const Node& a, const Node& b) {
  if (a.id == b.id) return 0.0;
  return data_gb / std::min(a.data_transfer_rate, b.data_transfer_rate);
}

double resource_usage(const Task& task, const Node& node, std::span<const Node> all_nodes,
                      UsageMode mode) {
  const auto request = static_cast<double>(task.cores);
  if (mode == UsageMode::requested) return request;
  double total = 0.0;
  for (const auto& other : all_nodes) total += static_cast<double>(other.cores);
  if (total <= 0.0) {
    throw Error(Errc::zero_total_capacity, "scaled usage needs a positive total core count");
  }
  return request * (static_cast<double>(node.cores) / total);
}

}  // namespace csched
