#include "csched/catalog.hpp"

namespace csched {
namespace {

Task make_task(std::string id, std::int64_t cores, FeatureSet features, double data, double duration,
               std::vector<std::string> deps = {}) {
  Task t;
  t.id = std::move(id);
  t.cores = cores;
  t.features = std::move(features);
  t.data_out = data;
  t.durations = {duration};
  t.dependencies = std::move(deps);
  return t;
}

Node make_node(std::string id, std::int64_t cores, double storage, FeatureSet features) {
  Node n;
  n.id = std::move(id);
  n.cores = cores;
  n.storage = storage;
  n.features = std::move(features);
  n.processing_speed = 1.0;
  n.data_transfer_rate = 100.0;
  return n;
}

}  // namespace

const char* const kStgNoComm =
    "9\n"
    "0 0 0\n"
    "1 4 1 0\n"
    "2 3 1 0\n"
    "3 5 1 0\n"
    "4 2 1 1\n"
    "5 6 2 1 2\n"
    "6 3 1 3\n"
    "7 4 2 4 5\n"
    "8 2 2 5 6\n"
    "9 5 1 6\n"
    "10 0 3 7 8 9\n";

const char* const kStgExplicitComm =
    "10\n"
    "0 0 0\n"
    "1 3 1 0 0\n"
    "2 4 1 0 0\n"
    "3 2 1 0 0\n"
    "4 5 2 1 2 2 1\n"
    "5 3 1 2 3\n"
    "6 4 2 2 1 3 2\n"
    "7 2 1 4 1\n"
    "8 6 2 5 2 6 1\n"
    "9 3 1 6 2\n"
    "10 2 3 7 1 8 2 9 1\n"
    "11 0 1 10 0\n";

const char* const kStgDense =
    "9\n"
    "0 0 0\n"
    "1 3 1 0\n"
    "2 4 1 0\n"
    "3 2 1 0\n"
    "4 5 3 1 2 3\n"
    "5 3 3 1 2 3\n"
    "6 4 3 1 2 3\n"
    "7 2 3 4 5 6\n"
    "8 6 3 4 5 6\n"
    "9 3 3 4 5 6\n"
    "10 0 3 7 8 9\n";

Cluster mri_cluster() {
  Cluster c;
  c.nodes.push_back(make_node("N1", 8, 500.0, {"F1"}));
  c.nodes.push_back(make_node("N2", 48, 20000.0, {"F1", "F2"}));
  c.nodes.push_back(make_node("N3", 2572, 210000.0, {"F1", "F2", "F3"}));
  return c;
}

Workflow mri_w1() {
  Workflow w;
  w.id = "W1";
  w.tasks.push_back(make_task("T1", 8, {"F1"}, 2.0, 3.0));
  w.tasks.push_back(make_task("T2", 12, {"F1", "F2"}, 5.0, 5.0, {"T1"}));
  w.tasks.push_back(make_task("T3", 12, {"F1", "F2"}, 8.0, 2.0, {"T2"}));
  return w;
}

Workflow mri_w2() {
  Workflow w;
  w.id = "W2";
  w.tasks.push_back(make_task("T1", 8, {"F1"}, 2.0, 3.0));
  w.tasks.push_back(make_task("T2", 12, {"F1", "F2"}, 5.0, 5.0, {"T1"}));
  w.tasks.push_back(make_task("T3", 32, {"F1", "F2"}, 5.0, 2.0, {"T1"}));
  w.tasks.push_back(make_task("T4", 12, {"F1", "F2"}, 10.0, 2.0, {"T2", "T3"}));
  return w;
}

Workflow as_work_based(Workflow workflow) {
  for (auto& task : workflow.tasks) {
    if (task.durations.size() == 1) {
      task.work = task.durations.front();
      task.durations.clear();
    }
  }
  return workflow;
}

Cluster scale_speeds(Cluster cluster, double factor) {
  for (auto& node : cluster.nodes) node.processing_speed *= factor;
  return cluster;
}

Cluster stg_cluster() {
  Cluster c;
  const double speeds[] = {1.0, 1.5, 2.0};
  for (int i = 0; i < 3; ++i) {
    Node n;
    n.id = "N" + std::to_string(i + 1);
    n.cores = 1;
    n.processing_speed = speeds[i];
    n.data_transfer_rate = 1.0;
    c.nodes.push_back(std::move(n));
  }
  return c;
}

std::vector<QualityCase> quality_cases() {
  std::vector<QualityCase> cases;
  cases.push_back({"W1_Se_3Nx3T", mri_cluster(), as_work_based(mri_w1()), false});
  cases.push_back({"W2_Pa_3Nx4T", mri_cluster(), as_work_based(mri_w2()), false});

  auto random_case = [&](std::string label, std::size_t tasks, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.node_count = 3;
    spec.task_count = tasks;
    spec.edge_density = 0.5;
    spec.seed = seed;
    auto generated = generate_synthetic(spec);
    generated.workflow.id = label;
    cases.push_back({std::move(label), std::move(generated.cluster), std::move(generated.workflow), true});
  };
  random_case("W3_Ra_3Nx5T", 5, 3);
  random_case("W4_Ra_3Nx10T", 10, 4);

  auto stg_case = [&](std::string label, const char* text, CommCostMode mode) {
    StgOptions options;
    options.workflow_id = label;
    options.comm_cost_mode = mode;
    cases.push_back({label, stg_cluster(), parse_stg(text, options), false});
  };
  stg_case("W5_STGS1_3Nx11T", kStgNoComm, CommCostMode::none);
  stg_case("W6_STGS2_3Nx12T", kStgExplicitComm, CommCostMode::explicit_weights);
  stg_case("W7_STGS3_3Nx11T", kStgDense, CommCostMode::default_constant);
  return cases;
}

}  // namespace csched
