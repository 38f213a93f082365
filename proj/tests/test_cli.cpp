#include <doctest.h>

#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "csched/ingest.hpp"

using namespace csched;
namespace fs = std::filesystem;

namespace {

fs::path data(const std::string& name) { return fs::path(CSCHED_DATA_DIR) / name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "csched_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write(const std::string& name, const std::string& text) {
  const auto path = scratch(name);
  std::ofstream(path) << text;
  return path;
}

cli::Json load_json(const fs::path& path) { return cli::Json::parse(read_text_file(path)); }

struct Bar {
  std::string task;
  std::string node;
  double start;
  double end;
  double x;
  double width;
};

std::vector<Bar> bars(const std::string& svg) {
  std::vector<Bar> out;
  const std::regex rect(
      R"re(<rect class="task" data-task="([^"]*)" data-node="([^"]*)" data-start="([^"]*)" data-end="([^"]*)" x="([^"]*)" y="[^"]*" width="([^"]*)")re");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rect); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out.push_back({m[1], m[2], std::stod(m[3]), std::stod(m[4]), std::stod(m[5]), std::stod(m[6])});
  }
  return out;
}

// Drops the wall-time column.
std::string without_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

}  // namespace

TEST_CASE("validate") {
  std::ostringstream out, err;
  CHECK(cli::cmd_validate(data("figure_cluster.json"), data("figure_workload.json"), out, err) == cli::kOk);
  CHECK(cli::cmd_validate(data("mri_cluster.json"), data("mri_workload.json"), out, err) == cli::kOk);

  const auto cyclic = write("cyclic.json", R"({"W": {"tasks": {"A": {"duration": 1, "dependencies": ["B"]},
                                                               "B": {"duration": 1, "dependencies": ["A"]}}}})");
  err.str("");
  CHECK(cli::cmd_validate(data("mri_cluster.json"), cyclic, out, err) == cli::kValidationError);
  CHECK(err.str().find("CycleDetected") != std::string::npos);

  err.str("");
  CHECK(cli::cmd_validate(data("missing.json"), data("mri_workload.json"), out, err) == cli::kIoError);
  CHECK(err.str().find("IoError") != std::string::npos);
}

TEST_CASE("solve writes the schedule file") {
  std::ostringstream out, err;
  cli::SolveOptions o;
  o.cluster = data("mri_cluster.json");
  o.workload = data("mri_workload.json");
  o.out = scratch("mri_milp.json");
  REQUIRE(cli::cmd_solve(o, out, err) == cli::kOk);
  const auto report = load_json(*o.out);
  CHECK(report["technique"] == "milp");
  CHECK(report["instance_digest"].get<std::string>().size() == 16);
  const auto& w1 = report["workflows"][0];
  CHECK(w1["workflow"] == "W1");
  CHECK(w1["status"] == "optimal");
  CHECK(w1["makespan"].get<double>() == 10.0);
  CHECK(w1["total_usage"].get<double>() == 32.0);
  const double starts[] = {0.0, 3.0, 8.0};
  const double ends[] = {3.0, 8.0, 10.0};
  for (int k = 0; k < 3; ++k) {
    CHECK(w1["entries"][k]["node"] == "N2");
    CHECK(w1["entries"][k]["start"].get<double>() == starts[k]);
    CHECK(w1["entries"][k]["end"].get<double>() == ends[k]);
  }
  CHECK(report["workflows"][1]["total_usage"].get<double>() == 64.0);
  CHECK(out.str().find("Total") != std::string::npos);

  // Same command, same schedules.
  o.out = scratch("mri_milp_again.json");
  REQUIRE(cli::cmd_solve(o, out, err) == cli::kOk);
  auto again = load_json(*o.out);
  auto first = report;
  for (auto* r : {&first, &again}) {
    for (auto& w : (*r)["workflows"]) w.erase("wall_time");
  }
  CHECK(first == again);

  o.technique = "heft";
  o.out = scratch("mri_heft.json");
  REQUIRE(cli::cmd_solve(o, out, err) == cli::kOk);
  CHECK(load_json(*o.out)["workflows"][0]["makespan"].get<double>() >= 10.0);

  o.technique = "ga";
  o.seed = 9;
  o.out = scratch("mri_ga_a.json");
  REQUIRE(cli::cmd_solve(o, out, err) == cli::kOk);
  auto ga_a = load_json(*o.out);
  o.out = scratch("mri_ga_b.json");
  REQUIRE(cli::cmd_solve(o, out, err) == cli::kOk);
  auto ga_b = load_json(*o.out);
  for (auto* r : {&ga_a, &ga_b}) {
    for (auto& w : (*r)["workflows"]) w.erase("wall_time");
  }
  CHECK(ga_a == ga_b);
}

TEST_CASE("solve edge cases") {
  std::ostringstream out, err;
  cli::SolveOptions o;
  o.cluster = data("mri_cluster.json");
  o.workload = write("empty.json", "{}");
  o.out = scratch("empty_report.json");
  CHECK(cli::cmd_solve(o, out, err) == cli::kOk);
  CHECK(load_json(*o.out)["workflows"].empty());

  o.workload = write("gpu.json", R"({"W": {"tasks": {"T1": {"cores": 1, "features": ["GPU"], "duration": 1}}}})");
  CHECK(cli::cmd_solve(o, out, err) == cli::kInfeasible);

  o.workload = data("mri_workload.json");
  o.technique = "quantum";
  CHECK(cli::cmd_solve(o, out, err) == cli::kValidationError);
  o.technique = "milp";
  o.capacity_mode = "sometimes";
  CHECK(cli::cmd_solve(o, out, err) == cli::kValidationError);
}

TEST_CASE("gantt") {
  std::ostringstream out, err;
  cli::SolveOptions o;
  o.cluster = data("mri_cluster.json");
  o.workload = data("mri_workload.json");
  o.out = scratch("gantt_src.json");
  REQUIRE(cli::cmd_solve(o, out, err) == cli::kOk);
  const auto svg_path = scratch("mri.svg");
  REQUIRE(cli::cmd_gantt(*o.out, svg_path, out, err) == cli::kOk);
  const auto svg = read_text_file(svg_path);
  const auto report = load_json(*o.out);

  // Split into panels by workflow.
  const auto w2_at = svg.find("data-workflow=\"W2\"");
  REQUIRE(w2_at != std::string::npos);
  const auto w1_bars = bars(svg.substr(0, w2_at));
  REQUIRE(w1_bars.size() == 3);
  std::map<std::string, int> lanes;
  for (const auto& b : w1_bars) ++lanes[b.node];
  CHECK(lanes.size() == 1);
  CHECK(lanes.count("N2") == 1);
  for (std::size_t k = 1; k < w1_bars.size(); ++k) CHECK(w1_bars[k].start >= w1_bars[k - 1].end);

  // Bar geometry matches the schedule times.
  const std::regex scale_re(R"re(data-workflow="W2" data-scale="([^"]*)")re");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, scale_re));
  const double scale = std::stod(m[1]);
  const auto w2_bars = bars(svg.substr(w2_at));
  const auto& entries = report["workflows"][1]["entries"];
  REQUIRE(w2_bars.size() == entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const double start = entries[k]["start"].get<double>();
    const double end = entries[k]["end"].get<double>();
    CHECK(w2_bars[k].x == doctest::Approx(80.0 + start * scale).epsilon(1e-4));
    CHECK(w2_bars[k].x + w2_bars[k].width == doctest::Approx(80.0 + end * scale).epsilon(1e-4));
  }

  // Deterministic output.
  const auto again = scratch("mri_again.svg");
  REQUIRE(cli::cmd_gantt(*o.out, again, out, err) == cli::kOk);
  CHECK(read_text_file(again) == svg);

  const auto empty = write("empty_schedule.json", R"({"nodes": ["N1"], "workflows": []})");
  REQUIRE(cli::cmd_gantt(empty, scratch("empty.svg"), out, err) == cli::kOk);
  CHECK(read_text_file(scratch("empty.svg")).find("<svg") != std::string::npos);

  const auto broken = write("broken_schedule.json", R"({"nodes": ["N1"], "workflows": [{"entries": []}]})");
  CHECK(cli::cmd_gantt(broken, scratch("broken.svg"), out, err) == cli::kValidationError);
}

TEST_CASE("bench csv is stable") {
  cli::BenchOptions o;
  o.suite = "quality";
  o.techniques = {Technique::milp, Technique::heft, Technique::ga};
  o.run.mh.iterations = 30;
  o.run.mh.population_size = 10;
  const auto a = cli::to_csv(cli::run_bench(o));
  o.jobs = 4;
  const auto b = cli::to_csv(cli::run_bench(o));
  CHECK(without_wall_time(a) == without_wall_time(b));
  CHECK(a.rfind("suite,case,substitute,speed_factor,technique,status,makespan,objective,wall_time_s\n", 0) == 0);
  CHECK(a.find("quality,W3_Ra_3Nx5T,true,") != std::string::npos);
  CHECK(a.find("quality,W1_Se_3Nx3T,false,1.000000,milp,optimal,10.000000,") != std::string::npos);
  // 7 cases x 2 speeds x 3 techniques, plus the header.
  CHECK(std::count(a.begin(), a.end(), '\n') == 43);
}

TEST_CASE("bench speed factor halves compute-only makespans") {
  cli::BenchOptions o;
  o.alpha = 0.0;
  o.beta = 1.0;
  o.run.mh.iterations = 30;
  o.run.mh.population_size = 10;
  const auto rows = cli::run_bench(o);
  std::map<std::pair<std::string, int>, std::map<double, double>> makespan;
  for (const auto& r : rows) {
    if (r.case_label != "W5_STGS1_3Nx11T" || !r.makespan) continue;
    makespan[{r.case_label, static_cast<int>(r.technique)}][r.speed_factor] = *r.makespan;
  }
  REQUIRE(makespan.size() == 7);
  for (const auto& [key, by_speed] : makespan) CHECK(by_speed.at(2.0) == by_speed.at(1.0) / 2.0);
}

TEST_CASE("scale suite marks timeouts") {
  cli::BenchOptions o;
  o.suite = "scale";
  o.scale_sizes = {5, 50};
  o.budget = 0.5;
  o.techniques = {Technique::milp, Technique::heft};
  const auto csv = cli::to_csv(cli::run_bench(o));
  CHECK(csv.find("scale,5x5,false,1.000000,milp,optimal,") != std::string::npos);
  CHECK(csv.find("scale,5x5,false,1.000000,heft,feasible,") != std::string::npos);
  CHECK(csv.find("scale,50x50,false,1.000000,milp,timeout,") != std::string::npos);

  o.suite = "bogus";
  std::ostringstream out, err;
  CHECK(cli::cmd_bench(o, std::nullopt, out, err) == cli::kValidationError);
}

TEST_CASE("fixed precision formatting") {
  CHECK(cli::fixed6(10.0) == "10.000000");
  CHECK(cli::fixed6(0.0200000001) == "0.020000");
  CHECK(cli::fixed6(-1.5) == "-1.500000");
}
