#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csched/dispatch.hpp"
#include "csched/error.hpp"
#include "csched/model.hpp"

namespace csched::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kValidationError = 2, kInfeasible = 3 };

int exit_code_for(Errc code) noexcept;

// ---------------------------------------------------------------- reports
//
// Schedule file:
// {"technique", "alpha", "beta", "usage_mode", "capacity_mode", "seed",
//  "instance_digest", "nodes": [ids],
//  "workflows": [{"workflow", "status", "detail", "makespan", "total_usage",
//                 "objective", "wall_time", "explored_nodes",
//                 "entries": [{"task", "node", "start", "end", "usage"}]}]}
// makespan/total_usage/objective are null when no schedule was found.

using Json = nlohmann::ordered_json;

Json make_report(const Instance& instance, Technique technique, std::uint64_t seed,
                 const std::vector<SolveResult>& results);

// Fixed-width table with one row per task and a total row per workflow.
std::string render_table(const Json& report);

// One panel per workflow, one lane per node, one bar per task. Throws
// Error(schema_error) on malformed reports.
std::string render_gantt(const Json& report);

// ------------------------------------------------------------------ bench

struct BenchRow {
  std::string suite;
  std::string case_label;
  bool substitute = false;
  double speed_factor = 1.0;
  Technique technique = Technique::milp;
  std::string status;
  std::optional<double> makespan;
  std::optional<double> objective;
  double wall_time = 0.0;
};

struct BenchOptions {
  std::string suite = "quality";
  RunOptions run;
  double alpha = 1.0;
  double beta = 1.0;
  // Scale suite only.
  double budget = 10.0;
  bool include_5000 = false;
  std::vector<std::size_t> scale_sizes = {5, 50, 500};
  std::vector<Technique> techniques;  // empty = suite default
  unsigned jobs = 1;
};

std::vector<BenchRow> run_bench(const BenchOptions& options);

// Header: suite,case,substitute,speed_factor,technique,status,makespan,
// objective,wall_time_s. Rows sorted by (suite, case, speed, technique).
std::string to_csv(std::vector<BenchRow> rows);

// Formats with fixed precision 6 and a dot separator regardless of locale.
std::string fixed6(double value);

// --------------------------------------------------------------- commands

struct SolveOptions {
  std::filesystem::path cluster;
  std::filesystem::path workload;
  std::string technique = "milp";
  double alpha = 1.0;
  double beta = 1.0;
  std::string usage_mode = "requested";
  std::string capacity_mode = "concurrent";
  std::uint64_t seed = 42;
  std::optional<double> time_budget;
  std::optional<std::filesystem::path> out;
};

int cmd_validate(const std::filesystem::path& cluster, const std::filesystem::path& workload, std::ostream& out,
                 std::ostream& err);
int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err);
int cmd_gantt(const std::filesystem::path& schedule, const std::filesystem::path& svg, std::ostream& out,
              std::ostream& err);
int cmd_bench(const BenchOptions& options, const std::optional<std::filesystem::path>& csv, std::ostream& out,
              std::ostream& err);

}  // namespace csched::cli
