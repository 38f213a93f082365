#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace cli = csched::cli;

int main(int argc, char** argv) {
  CLI::App app{"csched: feature- and capacity-aware workflow scheduling"};
  app.require_subcommand(1);

  std::string cluster;
  std::string workload;

  auto* validate = app.add_subcommand("validate", "Check a cluster and workload pair");
  validate->add_option("cluster", cluster, "Cluster JSON")->required();
  validate->add_option("workload", workload, "Workload JSON")->required();

  cli::SolveOptions solve_opts;
  std::string solve_out;
  std::optional<double> time_budget;
  auto* solve = app.add_subcommand("solve", "Schedule every workflow of a workload");
  solve->add_option("cluster", cluster, "Cluster JSON")->required();
  solve->add_option("workload", workload, "Workload JSON")->required();
  solve->add_option("-t,--technique", solve_opts.technique, "milp|brute|heft|olb|ga|sa|pso|aco")
      ->envname("CSCHED_TECHNIQUE")
      ->capture_default_str();
  solve->add_option("--alpha", solve_opts.alpha, "Usage weight")->envname("CSCHED_ALPHA")->capture_default_str();
  solve->add_option("--beta", solve_opts.beta, "Makespan weight")->envname("CSCHED_BETA")->capture_default_str();
  solve->add_option("--usage-mode", solve_opts.usage_mode, "requested|scaled")
      ->envname("CSCHED_USAGE_MODE")
      ->capture_default_str();
  solve->add_option("--capacity-mode", solve_opts.capacity_mode, "concurrent|aggregate|off")
      ->envname("CSCHED_CAPACITY_MODE")
      ->capture_default_str();
  solve->add_option("--seed", solve_opts.seed, "Metaheuristic seed")->envname("CSCHED_SEED")->capture_default_str();
  solve->add_option("--time-budget", time_budget, "Wall-clock budget in seconds")->envname("CSCHED_TIME_BUDGET");
  solve->add_option("-o,--out", solve_out, "Schedule JSON to write");

  std::string schedule;
  std::string svg = "gantt.svg";
  auto* gantt = app.add_subcommand("gantt", "Render a schedule file as an SVG Gantt chart");
  gantt->add_option("schedule", schedule, "Schedule JSON written by solve")->required();
  gantt->add_option("-o,--out", svg, "SVG to write")->capture_default_str();

  cli::BenchOptions bench_opts;
  std::string bench_out;
  std::vector<std::string> techniques;
  auto* bench = app.add_subcommand("bench", "Run the quality or scale suite and emit CSV");
  bench->add_option("--suite", bench_opts.suite, "quality|scale")->envname("CSCHED_SUITE")->capture_default_str();
  bench->add_option("-o,--out", bench_out, "CSV to write (stdout when omitted)");
  bench->add_option("--seed", bench_opts.run.mh.seed, "Metaheuristic seed")->envname("CSCHED_SEED")->capture_default_str();
  bench->add_option("--alpha", bench_opts.alpha, "Usage weight")->envname("CSCHED_ALPHA")->capture_default_str();
  bench->add_option("--beta", bench_opts.beta, "Makespan weight")->envname("CSCHED_BETA")->capture_default_str();
  bench->add_option("--budget", bench_opts.budget, "Per-cell time budget for the scale suite (s)")
      ->envname("CSCHED_BUDGET")
      ->capture_default_str();
  bench->add_option("--techniques", techniques, "Subset of techniques");
  bench->add_option("--jobs", bench_opts.jobs, "Worker threads")->envname("CSCHED_JOBS")->capture_default_str();
  bench->add_flag("--include-5000", bench_opts.include_5000, "Add the 5000x5000 HEFT cell to the scale suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kValidationError;
  }

  if (*validate) return cli::cmd_validate(cluster, workload, std::cout, std::cerr);
  if (*solve) {
    solve_opts.cluster = cluster;
    solve_opts.workload = workload;
    solve_opts.time_budget = time_budget;
    if (!solve_out.empty()) solve_opts.out = solve_out;
    return cli::cmd_solve(solve_opts, std::cout, std::cerr);
  }
  if (*gantt) return cli::cmd_gantt(schedule, svg, std::cout, std::cerr);
  try {
    for (const auto& t : techniques) bench_opts.techniques.push_back(csched::parse_technique(t));
  } catch (const csched::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kValidationError;
  }
  std::optional<std::filesystem::path> csv;
  if (!bench_out.empty()) csv = bench_out;
  return cli::cmd_bench(bench_opts, csv, std::cout, std::cerr);
}
