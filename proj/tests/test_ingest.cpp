#include <doctest.h>

#include <cmath>

#include "csched/catalog.hpp"
#include "csched/engine.hpp"
#include "csched/error.hpp"
#include "csched/ingest.hpp"
#include "support.hpp"

using namespace csched;

namespace {

std::string data_file(const std::string& name) { return read_text_file(std::string(CSCHED_DATA_DIR) + "/" + name); }

Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected csched::Error");
  return Error(Errc::io_error, "unreachable");
}

}  // namespace

TEST_CASE("cluster figure parses as printed") {
  const auto c = parse_cluster(data_file("figure_cluster.json"));
  REQUIRE(c.nodes.size() == 2);
  const auto& n1 = c.nodes[0];
  CHECK(n1.id == "Node1");
  CHECK(n1.cores == 4);
  CHECK(n1.memory == 1024.0);
  CHECK(n1.features == FeatureSet{"F1"});
  CHECK(n1.processing_speed == 1024.0);
  CHECK(n1.data_transfer_rate == 100.0);
  const auto& n2 = c.nodes[1];
  CHECK(n2.cores == 12);
  CHECK(n2.processing_speed == 1.0);
  CHECK(n2.data_transfer_rate == 100.0);
  CHECK(std::isinf(n2.memory));
}

TEST_CASE("workload figure parses as printed") {
  const auto ws = parse_workload(data_file("figure_workload.json"));
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].id == "Workflow 1");
  REQUIRE(ws[0].tasks.size() == 1);
  const auto& t = ws[0].tasks[0];
  CHECK(t.id == "T1");
  CHECK(t.cores == 4);
  CHECK(t.memory == 1024.0);
  CHECK(t.features == FeatureSet{"F1"});
  CHECK(t.data_out == 1024.0);
  CHECK(t.durations == std::vector<double>{10.0});
  CHECK(t.dependencies.empty());
}

TEST_CASE("schema and parse errors") {
  auto e = error_of([] { parse_cluster(R"({"nodes": {"Node1": {"cores": -1}}})"); });
  CHECK(e.code() == Errc::schema_error);
  CHECK(std::string(e.what()).find("nodes.Node1.cores") != std::string::npos);

  e = error_of([] { parse_cluster("{\n  \"nodes\": {\n    \"A\": {\"cores\": 4,, }\n}"); });
  CHECK(e.code() == Errc::parse_error);
  CHECK(std::string(e.what()).find("line ") != std::string::npos);

  e = error_of([] { parse_cluster(R"({"nodes": {"A": {"cores": 4, "features": [1]}}})"); });
  CHECK(e.code() == Errc::schema_error);

  e = error_of([] { parse_workload(R"({"W": {"tasks": {"T1": {"duration": 1, "dependencies": ["T9"]}}}})"); });
  CHECK(e.code() == Errc::unknown_dependency);

  e = error_of([] {
    parse_workload(R"({"W": {"tasks": {"A": {"duration": 1, "dependencies": ["B"]},
                                        "B": {"duration": 1, "dependencies": ["A"]}}}})");
  });
  CHECK(e.code() == Errc::cycle_detected);

  e = error_of([] { parse_workload(R"({"W": {"tasks": {"A": {"cores": 1}}}})"); });
  CHECK(e.code() == Errc::schema_error);

  CHECK(parse_cluster(R"({"nodes": {}})").nodes.empty());
}

TEST_CASE("transfer rate overrides") {
  const auto c = parse_cluster(R"({"nodes": {"A": {"cores": 1, "data_transfer_rate": 10},
                                              "B": {"cores": 1, "data_transfer_rate": 40}},
                                   "transfer_rates": {"A": {"B": 25}}})");
  REQUIRE(c.transfer_rates.size() == 2);
  CHECK(c.transfer_rates[0][1] == 25.0);
  CHECK(c.transfer_rates[1][0] == 10.0);
}

TEST_CASE("MRI files match the tables") {
  const auto cluster = parse_cluster(data_file("mri_cluster.json"));
  CHECK(cluster == mri_cluster());
  const auto ws = parse_workload(data_file("mri_workload.json"));
  REQUIRE(ws.size() == 2);
  const Workflow* expected[] = {nullptr, nullptr};
  const auto w1 = mri_w1();
  const auto w2 = mri_w2();
  expected[0] = &w1;
  expected[1] = &w2;
  for (std::size_t w = 0; w < 2; ++w) {
    REQUIRE(ws[w].tasks.size() == expected[w]->tasks.size());
    for (std::size_t j = 0; j < ws[w].tasks.size(); ++j) {
      const auto& a = ws[w].tasks[j];
      const auto& b = expected[w]->tasks[j];
      CHECK(a.id == b.id);
      CHECK(a.cores == b.cores);
      CHECK(a.features == b.features);
      CHECK(a.data_out == b.data_out);
      CHECK(a.dependencies == b.dependencies);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(compute_duration(a, i, cluster.nodes[i]) == compute_duration(b, i, cluster.nodes[i]));
      }
    }
  }
}

TEST_CASE("serialize then parse is the identity") {
  const auto fig = parse_cluster(data_file("figure_cluster.json"));
  CHECK(parse_cluster(serialize_cluster(fig)) == fig);
  const auto figw = parse_workload(data_file("figure_workload.json"));
  CHECK(parse_workload(serialize_workload(figw)) == figw);
  const auto mriw = parse_workload(data_file("mri_workload.json"));
  CHECK(parse_workload(serialize_workload(mriw)) == mriw);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto rc = testing::random_case(seed);
    Cluster c{rc.instance.nodes, rc.instance.transfer_rates};
    const auto text = serialize_cluster(c);
    CHECK(parse_cluster(text) == c);
    CHECK(serialize_cluster(parse_cluster(text)) == text);
    const std::vector<Workflow> ws{rc.workflow};
    CHECK(parse_workload(serialize_workload(ws)) == ws);
  }
  for (const auto& qc : quality_cases()) {
    const std::vector<Workflow> ws{qc.workflow};
    CHECK(parse_workload(serialize_workload(ws)) == ws);
  }
}

TEST_CASE("STG records") {
  const auto w = parse_stg("1\n0 0 0\n1 3 1 0\n2 0 1 1\n");
  REQUIRE(w.tasks.size() == 3);
  CHECK(w.tasks[1].id == "T1");
  CHECK(*w.tasks[1].work == 3.0);
  CHECK(w.tasks[1].dependencies == std::vector<std::string>{"T0"});
  CHECK(*w.tasks[0].work == 0.0);

  CHECK(parse_stg("0\n").tasks.empty());
  CHECK_THROWS_AS(parse_stg("3\n0 0 0\n1 2 1 0\n"), Error);
  CHECK_THROWS_AS(parse_stg("1\n0 0 0\n1 x 1 0\n2 0 1 1\n"), Error);
  CHECK(error_of([] { parse_stg("0\n0 0 1 1\n1 2 1 0\n"); }).code() == Errc::cycle_detected);
  CHECK(error_of([] { parse_stg("1\n0 0 0\n1 2 1 0\n2 1 1 7\n"); }).code() == Errc::unknown_dependency);

  StgOptions speeds;
  speeds.speed_map = {1.0, 2.0};
  const auto ws = parse_stg("1\n0 0 0\n1 3 1 0\n2 0 1 1\n", speeds);
  CHECK(ws.tasks[1].durations == std::vector<double>{3.0, 1.5});
}

TEST_CASE("published-layout sample file") {
  const auto w = parse_stg(data_file("stg/sample.stg"));
  validate_workflow(w);
  // Hand transcription of the file.
  const double times[] = {0, 7, 4, 9, 3, 6, 5, 8, 2, 0};
  const std::vector<std::vector<std::string>> preds = {
      {}, {"T0"}, {"T0"}, {"T0"}, {"T1", "T2"}, {"T2"}, {"T3", "T5"}, {"T4", "T5"}, {"T6"}, {"T7", "T8"}};
  REQUIRE(w.tasks.size() == 10);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(w.tasks[k].id == "T" + std::to_string(k));
    CHECK(*w.tasks[k].work == times[k]);
    CHECK(w.tasks[k].dependencies == preds[k]);
  }
}

TEST_CASE("STG communication modes") {
  Cluster c = stg_cluster();
  StgOptions none;
  const auto w5 = parse_stg(kStgNoComm, none);
  auto instance = testing::make_instance(c, {w5});
  const Problem p(instance, w5);
  Assignment spread(p.task_count());
  for (std::size_t j = 0; j < spread.size(); ++j) spread[j] = j % 3;
  const auto s = time_assignment(p, spread);
  for (std::size_t j = 0; j < p.task_count(); ++j) {
    for (const auto& e : p.predecessors(j)) CHECK(e.data == 0.0);
  }
  CHECK(s.makespan > 0.0);

  StgOptions weighted;
  weighted.comm_cost_mode = CommCostMode::explicit_weights;
  const auto w6 = parse_stg(kStgExplicitComm, weighted);
  CHECK(w6.tasks.size() == 12);
  CHECK(w6.tasks[4].edge_data.at("T1") == 2.0);
  CHECK(w6.tasks[4].edge_data.at("T2") == 1.0);

  StgOptions dense;
  dense.comm_cost_mode = CommCostMode::default_constant;
  const auto w7 = parse_stg(kStgDense, dense);
  CHECK(w7.tasks.size() == 11);
  CHECK(w7.tasks[1].data_out == 0.01);
}

TEST_CASE("quality STG files match the built-in graphs") {
  CHECK(parse_stg(data_file("stg/w5_no_comm.stg")) == parse_stg(kStgNoComm));
  StgOptions weighted;
  weighted.comm_cost_mode = CommCostMode::explicit_weights;
  CHECK(parse_stg(data_file("stg/w6_explicit_comm.stg"), weighted) == parse_stg(kStgExplicitComm, weighted));
  CHECK(parse_stg(data_file("stg/w7_dense.stg")) == parse_stg(kStgDense));
}

TEST_CASE("synthetic generation") {
  SyntheticSpec spec;
  CHECK(generate_synthetic(spec).workflow == generate_synthetic(spec).workflow);
  CHECK(generate_synthetic(spec).cluster == generate_synthetic(spec).cluster);

  spec.node_count = 50;
  spec.task_count = 50;
  const auto g = generate_synthetic(spec);
  CHECK(validate_workflow(g.workflow).size() == 50);
  const auto instance = testing::make_instance(g.cluster, {g.workflow});
  const Problem p(instance, g.workflow);
  for (std::size_t j = 0; j < p.task_count(); ++j) CHECK_FALSE(p.eligible_nodes(j).empty());

  auto other = spec;
  other.seed = 2;
  CHECK_FALSE(generate_synthetic(other).workflow == g.workflow);

  SyntheticSpec bad;
  bad.edge_density = 1.5;
  CHECK_THROWS_AS(generate_synthetic(bad), Error);
  bad = SyntheticSpec{};
  bad.task_count = 0;
  CHECK_THROWS_AS(generate_synthetic(bad), Error);
}

TEST_CASE("instance digest") {
  const auto c = mri_cluster();
  const std::vector<Workflow> ws{mri_w1()};
  const auto d = instance_digest(c, ws);
  CHECK(d.size() == 16);
  CHECK(d == instance_digest(c, ws));
  const std::vector<Workflow> other{mri_w2()};
  CHECK(d != instance_digest(c, other));
}

TEST_CASE("missing files") {
  CHECK(error_of([] { read_text_file("/nonexistent/file.json"); }).code() == Errc::io_error);
}
