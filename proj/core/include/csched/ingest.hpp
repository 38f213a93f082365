#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csched/model.hpp"

namespace csched {

// Cluster file:  {"nodes": {"<id>": {"cores", "memory", "storage", "features",
//                 "processing_speed", "data_transfer_rate"}, ...},
//                 "transfer_rates": {"<from>": {"<to>": GB/s}}}   (optional)
// Workload file: {"<workflow>": {"submission_time": s (optional),
//                 "tasks": {"<id>": {"cores", "memory_required", "features",
//                 "data", "duration" | "work", "dependencies", "edge_data"}}}}
//
// Numeric fields accept a scalar or a one-element list. "duration" may be a
// scalar (same on all nodes) or one value per node in cluster order. An
// elision marker "..." outside strings is ignored along with the comma it
// leaves dangling, so documentation excerpts load as written.
Cluster parse_cluster(std::string_view text);
std::vector<Workflow> parse_workload(std::string_view text);

std::string serialize_cluster(const Cluster& cluster);
std::string serialize_workload(std::span<const Workflow> workflows);

std::string read_text_file(const std::filesystem::path& path);

enum class CommCostMode {
  none,      // no transfer cost on any edge
  explicit_weights,  // records carry (predecessor, cost) pairs
  default_constant,  // every edge costs default_dtt
};

struct StgOptions {
  std::string workflow_id = "stg";
  // When non-empty, durations become processing time / speed per node;
  // otherwise tasks carry the processing time as work.
  std::vector<double> speed_map;
  CommCostMode comm_cost_mode = CommCostMode::none;
  double default_dtt = 0.01;
  // Transfer costs in the file are seconds at this rate; edge data is
  // cost * reference_rate GB.
  double reference_rate = 1.0;
};

// Standard Task Graph Set layout: a task-count header, then one record per
// task "index time predecessor_count predecessors...", optionally followed by
// '#' comment lines. The entry and exit dummies are kept as zero-time tasks.
Workflow parse_stg(std::string_view text, const StgOptions& options = {});

struct SyntheticSpec {
  std::size_t node_count = 5;
  std::size_t task_count = 5;
  double edge_density = 0.3;
  std::size_t feature_pool_size = 4;
  double duration_min = 1.0;
  double duration_max = 10.0;
  double data_min = 0.1;
  double data_max = 5.0;
  std::uint64_t seed = 1;
};

struct SyntheticInstance {
  Cluster cluster;
  Workflow workflow;
};

// Seed-deterministic layered DAG over a random heterogeneous cluster. Every
// task copies its feature and capacity needs from a randomly drawn anchor
// node, so at least one node can always run it.
SyntheticInstance generate_synthetic(const SyntheticSpec& spec);

// 64-bit FNV-1a over the canonical serialization of cluster and workloads.
std::string instance_digest(const Cluster& cluster, std::span<const Workflow> workflows);

}  // namespace csched
