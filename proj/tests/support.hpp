#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "csched/catalog.hpp"
#include "csched/model.hpp"

namespace testing {

inline csched::Instance make_instance(const csched::Cluster& cluster, std::vector<csched::Workflow> workflows = {}) {
  csched::Instance instance;
  instance.nodes = cluster.nodes;
  instance.transfer_rates = cluster.transfer_rates;
  instance.workflows = std::move(workflows);
  return instance;
}

inline csched::Instance mri_instance() { return make_instance(csched::mri_cluster(), {csched::mri_w1(), csched::mri_w2()}); }

struct RandomCase {
  csched::Instance instance;
  csched::Workflow workflow;
};

// Small random instance: 1-3 nodes, 1-7 tasks, random features drawn from
// {A, B}, random edge density, mixed explicit and work-based durations and
// a rotating capacity/usage mode. Written independently of the library's
// synthetic generator.
inline RandomCase random_case(std::uint64_t seed, std::size_t max_nodes = 3, std::size_t max_tasks = 7) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto real = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  // Quarter-step values keep sums exact in binary floating point.
  auto quarter = [&](int lo, int hi) { return pick(lo * 4, hi * 4) / 4.0; };

  RandomCase out;
  const auto m = static_cast<std::size_t>(pick(1, static_cast<int>(max_nodes)));
  const auto n = static_cast<std::size_t>(pick(1, static_cast<int>(max_tasks)));
  for (std::size_t i = 0; i < m; ++i) {
    csched::Node node;
    node.id = "N" + std::to_string(i + 1);
    node.cores = pick(2, 16);
    node.memory = coin(0.5) ? csched::kUnlimited : quarter(4, 32);
    if (coin(0.7)) node.features.insert("A");
    if (coin(0.5)) node.features.insert("B");
    node.processing_speed = quarter(1, 4);
    node.data_transfer_rate = quarter(1, 8);
    out.instance.nodes.push_back(node);
  }
  if (coin(0.2)) {
    out.instance.transfer_rates.assign(m, std::vector<double>(m, 1.0));
    for (auto& row : out.instance.transfer_rates) {
      for (auto& r : row) r = quarter(1, 4);
    }
  }
  static constexpr csched::CapacityMode kModes[] = {csched::CapacityMode::concurrent, csched::CapacityMode::aggregate,
                                                    csched::CapacityMode::off};
  out.instance.capacity_mode = kModes[seed % 3];
  out.instance.usage_mode = seed % 4 == 3 ? csched::UsageMode::scaled : csched::UsageMode::requested;
  out.instance.alpha = coin(0.3) ? 0.0 : 1.0;
  out.instance.beta = 1.0;

  const double density = real(0.0, 0.8);
  auto& w = out.workflow;
  w.id = "R" + std::to_string(seed);
  for (std::size_t j = 0; j < n; ++j) {
    csched::Task task;
    task.id = "T" + std::to_string(j + 1);
    task.cores = pick(0, 12);
    task.memory = quarter(0, 8);
    task.data_out = quarter(0, 6);
    if (coin(0.4)) task.features.insert("A");
    if (coin(0.15)) task.features.insert("B");
    switch (pick(0, 2)) {
      case 0: task.durations = {quarter(0, 6)}; break;
      case 1:
        for (std::size_t i = 0; i < m; ++i) task.durations.push_back(quarter(0, 6));
        break;
      default: task.work = quarter(1, 8);
    }
    for (std::size_t p = 0; p < j; ++p) {
      if (coin(density)) {
        task.dependencies.push_back("T" + std::to_string(p + 1));
        if (coin(0.2)) task.edge_data[task.dependencies.back()] = quarter(0, 4);
      }
    }
    w.tasks.push_back(task);
  }
  // Shuffle declaration order so solvers cannot rely on it.
  std::shuffle(w.tasks.begin(), w.tasks.end(), rng);
  out.instance.workflows = {w};
  return out;
}

}  // namespace testing
