#include <fstream>
#include <ostream>

#include "cli.hpp"
#include "csched/engine.hpp"
#include "csched/ingest.hpp"

namespace csched::cli {
namespace {

struct Loaded {
  Instance instance;
  std::size_t task_count = 0;
};

Loaded load(const std::filesystem::path& cluster_path, const std::filesystem::path& workload_path) {
  const auto cluster = parse_cluster(read_text_file(cluster_path));
  Loaded loaded;
  loaded.instance.nodes = cluster.nodes;
  loaded.instance.transfer_rates = cluster.transfer_rates;
  loaded.instance.workflows = parse_workload(read_text_file(workload_path));
  for (const auto& w : loaded.instance.workflows) loaded.task_count += w.tasks.size();
  return loaded;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(Errc::io_error, "failed writing '" + path.string() + "'");
}

int report_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return exit_code_for(e.code());
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::io_error: return kIoError;
    case Errc::infeasible_assignment: return kInfeasible;
    default: return kValidationError;
  }
}

int cmd_validate(const std::filesystem::path& cluster, const std::filesystem::path& workload, std::ostream& out,
                 std::ostream& err) {
  try {
    auto loaded = load(cluster, workload);
    validate_instance(loaded.instance);
    out << "ok: " << loaded.instance.nodes.size() << " nodes, " << loaded.instance.workflows.size()
        << " workflows, " << loaded.task_count << " tasks\n";
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto technique = parse_technique(options.technique);
    auto loaded = load(options.cluster, options.workload);
    auto& instance = loaded.instance;
    instance.alpha = options.alpha;
    instance.beta = options.beta;
    instance.usage_mode = parse_usage_mode(options.usage_mode);
    instance.capacity_mode = parse_capacity_mode(options.capacity_mode);
    validate_instance(instance);

    RunOptions run;
    run.mh.seed = options.seed;
    run.time_budget = options.time_budget;
    if (is_metaheuristic(technique)) validate_params(run.mh);

    std::vector<SolveResult> results;
    bool infeasible = false;
    for (const auto& workflow : instance.workflows) {
      results.push_back(run_technique(instance, workflow, technique, run));
      infeasible = infeasible || results.back().status == SolveStatus::infeasible;
    }
    const auto report = make_report(instance, technique, options.seed, results);
    if (options.out) write_text_file(*options.out, report.dump(2) + "\n");
    out << render_table(report);
    return infeasible ? kInfeasible : kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_gantt(const std::filesystem::path& schedule, const std::filesystem::path& svg, std::ostream& out,
              std::ostream& err) {
  try {
    const auto text = read_text_file(schedule);
    Json report;
    try {
      report = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::parse_error, schedule.string() + ": " + e.what());
    }
    write_text_file(svg, render_gantt(report));
    out << "wrote " << svg.string() << '\n';
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_bench(const BenchOptions& options, const std::optional<std::filesystem::path>& csv, std::ostream& out,
              std::ostream& err) {
  try {
    const auto text = to_csv(run_bench(options));
    if (csv) {
      write_text_file(*csv, text);
      out << "wrote " << csv->string() << '\n';
    } else {
      out << text;
    }
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

}  // namespace csched::cli
