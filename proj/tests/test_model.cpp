#include <doctest.h>

#include <random>

#include "csched/catalog.hpp"
#include "csched/error.hpp"
#include "csched/model.hpp"
#include "support.hpp"

using namespace csched;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected csched::Error");
  return Errc::io_error;
}

const Node& node(const Cluster& c, std::size_t i) { return c.nodes[i]; }

}  // namespace

TEST_CASE("topological order of the MRI workflows") {
  CHECK(validate_workflow(mri_w1()) == std::vector<std::string>{"T1", "T2", "T3"});
  CHECK(validate_workflow(mri_w2()) == std::vector<std::string>{"T1", "T2", "T3", "T4"});
}

TEST_CASE("ready ties are broken by natural id order") {
  Workflow w{"w", {}, 0.0};
  for (const char* id : {"T10", "T2", "T1"}) w.tasks.push_back(Task{.id = id, .durations = {1.0}});
  CHECK(validate_workflow(w) == std::vector<std::string>{"T1", "T2", "T10"});
  CHECK(id_less("T2", "T10"));
  CHECK_FALSE(id_less("T10", "T2"));
  CHECK(id_less("N1", "N2"));
  CHECK(id_less("a", "b"));
  CHECK_FALSE(id_less("x", "x"));
}

TEST_CASE("workflow validation errors") {
  Workflow mutual{"w", {Task{.id = "A", .durations = {1}, .dependencies = {"B"}},
                        Task{.id = "B", .durations = {1}, .dependencies = {"A"}}}};
  CHECK(code_of([&] { validate_workflow(mutual); }) == Errc::cycle_detected);
  try {
    validate_workflow(mutual);
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK((what.find("'A'") != std::string::npos || what.find("'B'") != std::string::npos));
  }

  Workflow self{"w", {Task{.id = "A", .durations = {1}, .dependencies = {"A"}}}};
  CHECK(code_of([&] { validate_workflow(self); }) == Errc::cycle_detected);

  Workflow missing{"w", {Task{.id = "T1", .durations = {1}, .dependencies = {"T9"}}}};
  CHECK(code_of([&] { validate_workflow(missing); }) == Errc::unknown_dependency);

  Workflow dup{"w", {Task{.id = "T1", .durations = {1}}, Task{.id = "T1", .durations = {1}}}};
  CHECK(code_of([&] { validate_workflow(dup); }) == Errc::duplicate_id);

  CHECK(validate_workflow(Workflow{}).empty());
}

TEST_CASE("allocation ratio") {
  const auto c = mri_cluster();
  const auto w = mri_w1();
  CHECK(allocation_ratio(w.tasks[0], node(c, 0), Resource::cores) == 1.0);
  CHECK(allocation_ratio(w.tasks[1], node(c, 0), Resource::cores) == 1.5);
  Task idle{.id = "idle"};
  CHECK(allocation_ratio(idle, node(c, 0), Resource::cores) == 0.0);
  Node empty{.id = "E", .cores = 0};
  CHECK(allocation_ratio(idle, empty, Resource::cores) == 0.0);
  CHECK(code_of([&] { allocation_ratio(w.tasks[0], empty, Resource::cores); }) == Errc::zero_capacity);
}

TEST_CASE("feature feasibility") {
  const auto c = mri_cluster();
  const auto w = mri_w1();
  CHECK_FALSE(feature_feasible(w.tasks[1], node(c, 0)));
  CHECK(feature_feasible(w.tasks[0], node(c, 1)));
  CHECK(feature_feasible(Task{.id = "x"}, Node{.id = "bare"}));
}

TEST_CASE("durations") {
  const auto c = mri_cluster();
  const auto t1 = mri_w1().tasks[0];
  for (std::size_t i = 0; i < 3; ++i) CHECK(compute_duration(t1, i, node(c, i)) == 3.0);

  Task work{.id = "w", .work = 1024.0};
  CHECK(compute_duration(work, 0, Node{.id = "a", .processing_speed = 1024.0}) == 1.0);
  CHECK(compute_duration(work, 0, Node{.id = "a", .processing_speed = 2048.0}) == 0.5);

  Task listed{.id = "l", .durations = {1.0, 2.0, 3.0}, .work = 99.0};
  CHECK(compute_duration(listed, 2, node(c, 2)) == 3.0);

  CHECK(code_of([&] { compute_duration(Task{.id = "none"}, 0, node(c, 0)); }) == Errc::missing_duration);
}

TEST_CASE("transfer times") {
  const auto c = mri_cluster();
  CHECK(transfer_time(2.0, node(c, 0), node(c, 1)) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(transfer_time(10.0, node(c, 0), node(c, 1)) == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(transfer_time(123.0, node(c, 2), node(c, 2)) == 0.0);
  Node slow{.id = "S", .data_transfer_rate = 4.0};
  CHECK(transfer_time(8.0, node(c, 0), slow) == 2.0);
}

TEST_CASE("resource usage") {
  const auto c = mri_cluster();
  const auto w = mri_w1();
  double total = 0.0;
  for (const auto& t : w.tasks) total += resource_usage(t, node(c, 1), c.nodes, UsageMode::requested);
  CHECK(total == 32.0);

  const std::vector<Node> single{Node{.id = "only", .cores = 7}};
  CHECK(resource_usage(w.tasks[1], single[0], single, UsageMode::scaled) == 12.0);
  CHECK(resource_usage(w.tasks[1], node(c, 1), c.nodes, UsageMode::scaled) == 12.0 * (48.0 / 2628.0));

  const std::vector<Node> dead{Node{.id = "z", .cores = 0}};
  CHECK(code_of([&] { resource_usage(w.tasks[1], dead[0], dead, UsageMode::scaled); }) == Errc::zero_total_capacity);
}

TEST_CASE("mode names round-trip") {
  for (auto m : {UsageMode::requested, UsageMode::scaled}) CHECK(parse_usage_mode(to_string(m)) == m);
  for (auto m : {CapacityMode::concurrent, CapacityMode::aggregate, CapacityMode::off}) {
    CHECK(parse_capacity_mode(to_string(m)) == m);
  }
  CHECK(code_of([] { parse_capacity_mode("sometimes"); }) == Errc::invalid_argument);
}

TEST_CASE("instance validation") {
  auto base = testing::mri_instance();
  validate_instance(base);

  auto bad_speed = base;
  bad_speed.nodes[0].processing_speed = 0.0;
  CHECK(code_of([&] { validate_instance(bad_speed); }) == Errc::invalid_argument);

  auto dup = base;
  dup.nodes[1].id = "N1";
  CHECK(code_of([&] { validate_instance(dup); }) == Errc::duplicate_id);

  auto weights = base;
  weights.alpha = 0.0;
  weights.beta = 0.0;
  CHECK(code_of([&] { validate_instance(weights); }) == Errc::invalid_argument);

  auto list = base;
  list.workflows[0].tasks[0].durations = {1.0, 2.0};
  CHECK(code_of([&] { validate_instance(list); }) == Errc::invalid_argument);

  auto none = base;
  none.workflows[0].tasks[0].durations.clear();
  CHECK(code_of([&] { validate_instance(none); }) == Errc::missing_duration);
}

// ---------------------------------------------------------------- properties

TEST_CASE("cycle detection agrees with a reachability oracle") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 500; ++round) {
    const int n = std::uniform_int_distribution<int>(1, 10)(rng);
    const double p = std::uniform_real_distribution<double>(0.0, 0.35)(rng);
    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    Workflow w{"g", {}, 0.0};
    for (int j = 0; j < n; ++j) {
      Task t{.id = "T" + std::to_string(j), .durations = {1.0}};
      for (int k = 0; k < n; ++k) {
        if (k != j && std::bernoulli_distribution(p)(rng)) {
          t.dependencies.push_back("T" + std::to_string(k));
          edge[k][j] = true;
        }
      }
      w.tasks.push_back(t);
    }
    // Transitive closure; a cycle exists iff some node reaches itself.
    auto reach = edge;
    for (int k = 0; k < n; ++k) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (reach[a][k] && reach[k][b]) reach[a][b] = true;
        }
      }
    }
    bool cyclic = false;
    for (int a = 0; a < n; ++a) cyclic = cyclic || reach[a][a];

    bool rejected = false;
    try {
      const auto order = validate_workflow(w);
      CHECK(order.size() == static_cast<std::size_t>(n));
      std::vector<int> pos(n);
      for (int k = 0; k < n; ++k) pos[std::stoi(order[k].substr(1))] = k;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (edge[a][b]) CHECK(pos[a] < pos[b]);
        }
      }
    } catch (const Error& e) {
      CHECK(e.code() == Errc::cycle_detected);
      rejected = true;
    }
    CHECK(rejected == cyclic);
  }
}

TEST_CASE("transfer symmetry, duration homogeneity, ratio linearity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 200.0);
  for (int k = 0; k < 200; ++k) {
    Node a{.id = "a", .cores = 16, .memory = u(rng), .processing_speed = u(rng), .data_transfer_rate = u(rng)};
    Node b{.id = "b", .cores = 8, .processing_speed = u(rng), .data_transfer_rate = u(rng)};
    const double data = u(rng);
    CHECK(transfer_time(data, a, b) == transfer_time(data, b, a));
    CHECK(transfer_time(data, a, a) == 0.0);

    Task t{.id = "t", .cores = 3, .memory = 2.5, .work = u(rng)};
    Node fast = a;
    fast.processing_speed *= 2.0;
    CHECK(compute_duration(t, 0, fast) == compute_duration(t, 0, a) / 2.0);

    Task triple = t;
    triple.cores *= 3;
    triple.memory *= 3.0;
    CHECK(allocation_ratio(triple, a, Resource::cores) == doctest::Approx(3.0 * allocation_ratio(t, a, Resource::cores)));
    CHECK(allocation_ratio(triple, a, Resource::memory) ==
          doctest::Approx(3.0 * allocation_ratio(t, a, Resource::memory)));

    const std::vector<Node> nodes{a, b};
    CHECK(resource_usage(t, a, nodes, UsageMode::requested) == resource_usage(t, b, nodes, UsageMode::requested));
  }
}
