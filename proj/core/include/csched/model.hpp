#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csched {

// Canonical units: seconds, GB for data and storage, GiB for memory,
// integer cores, GB/s for transfer rates, abstract work units per second
// for processing speed.

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

using FeatureSet = std::set<std::string>;

struct Node {
  std::string id;
  std::int64_t cores = 0;
  double memory = kUnlimited;
  double storage = kUnlimited;
  FeatureSet features;
  double processing_speed = 1.0;
  double data_transfer_rate = 100.0;

  bool operator==(const Node&) const = default;
};

struct Task {
  std::string id;
  std::int64_t cores = 0;
  double memory = 0.0;
  // Size of the data this task produces; shipped along every outgoing
  // edge whose consumer runs on another node.
  double data_out = 0.0;
  FeatureSet features;
  // Explicit durations in seconds. One value means the same duration on
  // every node; otherwise one value per node in cluster order. Explicit
  // durations take precedence over `work`.
  std::vector<double> durations;
  std::optional<double> work;
  std::vector<std::string> dependencies;
  // Per-predecessor override of the transferred data size.
  std::map<std::string, double> edge_data;

  bool operator==(const Task&) const = default;
};

struct Workflow {
  std::string id;
  std::vector<Task> tasks;
  double submission_time = 0.0;

  bool operator==(const Workflow&) const = default;
};

enum class UsageMode { requested, scaled };
enum class CapacityMode { concurrent, aggregate, off };
enum class Resource { cores, memory, storage };

std::string_view to_string(UsageMode mode) noexcept;
std::string_view to_string(CapacityMode mode) noexcept;
UsageMode parse_usage_mode(std::string_view text);
CapacityMode parse_capacity_mode(std::string_view text);

// Explicit pairwise transfer rates in GB/s, indexed [from][to] in cluster
// order. Empty means the bottleneck rule min(rate_a, rate_b).
using RateMatrix = std::vector<std::vector<double>>;

struct Cluster {
  std::vector<Node> nodes;
  RateMatrix transfer_rates;

  bool operator==(const Cluster&) const = default;
};

struct Instance {
  std::vector<Node> nodes;
  RateMatrix transfer_rates;
  std::vector<Workflow> workflows;
  UsageMode usage_mode = UsageMode::requested;
  CapacityMode capacity_mode = CapacityMode::concurrent;
  double alpha = 1.0;
  double beta = 1.0;
};

// Throws Error on broken invariants: non-positive speeds or rates, duplicate
// node ids, negative weights, alpha + beta == 0, malformed rate matrix,
// explicit duration lists whose length matches neither 1 nor the node count.
void validate_instance(const Instance& instance);

// Orders ids so that embedded digit runs compare numerically
// ("T2" < "T10"); otherwise plain byte order.
bool id_less(std::string_view a, std::string_view b) noexcept;

// Topological order of task ids, ready ties broken by ascending id.
// Throws cycle_detected, unknown_dependency or duplicate_id.
std::vector<std::string> validate_workflow(const Workflow& workflow);

// R_task / R_node in one dimension; callers treat > 1 as not allowed.
double allocation_ratio(const Task& task, const Node& node, Resource resource);

bool feature_feasible(const Task& task, const Node& node);

double compute_duration(const Task& task, std::size_t node_index, const Node& node);

double transfer_time(double data_gb, const Node& a, const Node& b);

double resource_usage(const Task& task, const Node& node, std::span<const Node> all_nodes,
                      UsageMode mode);

}  // namespace csched
