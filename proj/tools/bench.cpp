#include <algorithm>
#include <atomic>
#include <functional>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "csched/catalog.hpp"
#include "csched/ingest.hpp"

namespace csched::cli {
namespace {

struct Cell {
  std::string suite;
  std::string label;
  bool substitute = false;
  double speed = 1.0;
  Technique technique = Technique::milp;
  // Built lazily inside the worker; instances at 5000x5000 are large.
  std::function<std::pair<Instance, Workflow>()> make;
  RunOptions run;
};

BenchRow run_cell(const Cell& cell) {
  BenchRow row;
  row.suite = cell.suite;
  row.case_label = cell.label;
  row.substitute = cell.substitute;
  row.speed_factor = cell.speed;
  row.technique = cell.technique;
  try {
    const auto [instance, workflow] = cell.make();
    const auto result = run_technique(instance, workflow, cell.technique, cell.run);
    row.status = std::string(to_string(result.status));
    if (result.schedule) {
      row.makespan = result.schedule->makespan;
      row.objective = result.schedule->objective;
    }
    row.wall_time = result.wall_time;
  } catch (const Error& e) {
    row.status = "error:" + std::string(to_string(e.code()));
  }
  return row;
}

Instance instance_for(const Cluster& cluster, const Workflow& workflow, const BenchOptions& options) {
  Instance instance;
  instance.nodes = cluster.nodes;
  instance.transfer_rates = cluster.transfer_rates;
  instance.workflows = {workflow};
  instance.alpha = options.alpha;
  instance.beta = options.beta;
  return instance;
}

std::vector<Cell> quality_cells(const BenchOptions& options) {
  static constexpr Technique kDefault[] = {Technique::milp, Technique::heft, Technique::olb, Technique::ga,
                                           Technique::sa,   Technique::pso,  Technique::aco};
  std::vector<Technique> techniques(options.techniques.begin(), options.techniques.end());
  if (techniques.empty()) techniques.assign(std::begin(kDefault), std::end(kDefault));

  std::vector<Cell> cells;
  for (const auto& qc : quality_cases()) {
    for (double speed : {1.0, 2.0}) {
      for (auto technique : techniques) {
        Cell cell;
        cell.suite = "quality";
        cell.label = qc.label;
        cell.substitute = qc.substitute;
        cell.speed = speed;
        cell.technique = technique;
        cell.run = options.run;
        cell.make = [qc, speed, &options]() {
          const auto cluster = scale_speeds(qc.cluster, speed);
          return std::pair{instance_for(cluster, qc.workflow, options), qc.workflow};
        };
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<Cell> scale_cells(const BenchOptions& options) {
  static constexpr Technique kDefault[] = {Technique::milp, Technique::heft, Technique::olb, Technique::ga,
                                           Technique::sa,   Technique::pso,  Technique::aco};
  std::vector<Technique> techniques(options.techniques.begin(), options.techniques.end());
  if (techniques.empty()) techniques.assign(std::begin(kDefault), std::end(kDefault));

  auto sizes = options.scale_sizes;
  if (options.include_5000) sizes.push_back(5000);

  std::vector<Cell> cells;
  for (auto size : sizes) {
    for (auto technique : techniques) {
      // Only HEFT is run at the largest size; the rest would just time out.
      if (size >= 5000 && technique != Technique::heft) continue;
      Cell cell;
      cell.suite = "scale";
      cell.label = std::to_string(size) + "x" + std::to_string(size);
      cell.technique = technique;
      cell.run = options.run;
      cell.run.time_budget = options.budget;
      cell.make = [size, &options]() {
        SyntheticSpec spec;
        spec.node_count = size;
        spec.task_count = size;
        spec.seed = 1;
        auto generated = generate_synthetic(spec);
        return std::pair{instance_for(generated.cluster, generated.workflow, options), generated.workflow};
      };
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string optional_fixed(const std::optional<double>& value) { return value ? fixed6(*value) : std::string(); }

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  std::vector<Cell> cells;
  if (options.suite == "quality") {
    cells = quality_cells(options);
  } else if (options.suite == "scale") {
    cells = scale_cells(options);
  } else {
    throw Error(Errc::invalid_argument, "unknown suite '" + options.suite + "' (expected quality or scale)");
  }
  validate_params(options.run.mh);

  std::vector<BenchRow> rows(cells.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(cells.size())));
  if (workers <= 1) {
    for (std::size_t k = 0; k < cells.size(); ++k) rows[k] = run_cell(cells[k]);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < cells.size(); k = next++) rows[k] = run_cell(cells[k]);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

std::string to_csv(std::vector<BenchRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.suite != b.suite) return a.suite < b.suite;
    if (a.case_label != b.case_label) return id_less(a.case_label, b.case_label);
    if (a.speed_factor != b.speed_factor) return a.speed_factor < b.speed_factor;
    return static_cast<int>(a.technique) < static_cast<int>(b.technique);
  });
  std::ostringstream out;
  out << "suite,case,substitute,speed_factor,technique,status,makespan,objective,wall_time_s\n";
  for (const auto& row : rows) {
    out << row.suite << ',' << row.case_label << ',' << (row.substitute ? "true" : "false") << ','
        << fixed6(row.speed_factor) << ',' << to_string(row.technique) << ',' << row.status << ','
        << optional_fixed(row.makespan) << ',' << optional_fixed(row.objective) << ',' << fixed6(row.wall_time)
        << '\n';
  }
  return out.str();
}

}  // namespace csched::cli
