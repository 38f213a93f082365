#include "csched/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "csched/error.hpp"

namespace csched {
namespace {

using Json = nlohmann::ordered_json;

// Blanks out "..." elision markers and the commas they leave dangling.
// Replaced characters become spaces so parser offsets keep their line.
std::string strip_elisions(std::string_view text) {
  std::string out(text);
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const char c = out[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '.' && out.compare(i, 3, "...") == 0) {
      out.replace(i, 3, "   ");
      i += 2;
    }
  }

  // A comma is dangling when the next significant character closes a
  // container or the previous one opens a container or is another comma.
  auto significant_after = [&](std::size_t i) {
    for (++i; i < out.size(); ++i) {
      if (!std::isspace(static_cast<unsigned char>(out[i]))) return out[i];
    }
    return '\0';
  };
  in_string = false;
  escaped = false;
  char previous = '\0';
  for (std::size_t i = 0; i < out.size(); ++i) {
    const char c = out[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      previous = c;
      continue;
    }
    if (c == '"') in_string = true;
    if (c == ',') {
      const char next = significant_after(i);
      if (next == '}' || next == ']' || previous == '{' || previous == '[' || previous == ',') {
        out[i] = ' ';
        continue;
      }
    }
    if (!std::isspace(static_cast<unsigned char>(c))) previous = c;
  }
  return out;
}

Json parse_json(std::string_view text) {
  const auto cleaned = strip_elisions(text);
  try {
    return Json::parse(cleaned);
  } catch (const nlohmann::json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, cleaned.size());
    const auto line = 1 + std::count(cleaned.begin(), cleaned.begin() + static_cast<std::ptrdiff_t>(offset), '\n');
    const auto line_start = cleaned.rfind('\n', offset == 0 ? 0 : offset - 1);
    const auto column = offset - (line_start == std::string::npos ? 0 : line_start + 1) + 1;
    throw Error(Errc::parse_error, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                       ": " + e.what());
  }
}

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(Errc::schema_error, path + ": " + what);
}

// Scalar or one-element list.
const Json& unwrap(const Json& value, const std::string& path) {
  if (value.is_array()) {
    if (value.size() != 1) schema(path, "expected a scalar or a one-element list");
    return value.front();
  }
  return value;
}

double number(const Json& value, const std::string& path) {
  const auto& v = unwrap(value, path);
  if (!v.is_number()) schema(path, "expected a number");
  return v.get<double>();
}

double non_negative(const Json& value, const std::string& path) {
  const double x = number(value, path);
  if (!(x >= 0.0)) schema(path, "must not be negative");
  return x;
}

std::int64_t count(const Json& value, const std::string& path) {
  const double x = non_negative(value, path);
  if (std::floor(x) != x) schema(path, "expected a whole number");
  return static_cast<std::int64_t>(x);
}

FeatureSet features(const Json& value, const std::string& path) {
  FeatureSet out;
  if (value.is_string()) {
    out.insert(value.get<std::string>());
    return out;
  }
  if (!value.is_array()) schema(path, "expected a list of feature tags");
  for (const auto& tag : value) {
    if (!tag.is_string()) schema(path, "feature tags must be strings");
    out.insert(tag.get<std::string>());
  }
  return out;
}

Json number_json(double value) { return Json(value); }

Node parse_node(const std::string& id, const Json& body, const std::string& path) {
  if (!body.is_object()) schema(path, "expected an object");
  Node node;
  node.id = id;
  if (!body.contains("cores")) schema(path + ".cores", "is required");
  node.cores = count(body.at("cores"), path + ".cores");
  if (body.contains("memory")) node.memory = non_negative(body.at("memory"), path + ".memory");
  if (body.contains("storage")) node.storage = non_negative(body.at("storage"), path + ".storage");
  if (body.contains("features")) node.features = features(body.at("features"), path + ".features");
  if (body.contains("processing_speed")) {
    node.processing_speed = number(body.at("processing_speed"), path + ".processing_speed");
    if (!(node.processing_speed > 0.0)) schema(path + ".processing_speed", "must be positive");
  }
  if (body.contains("data_transfer_rate")) {
    node.data_transfer_rate = number(body.at("data_transfer_rate"), path + ".data_transfer_rate");
    if (!(node.data_transfer_rate > 0.0)) schema(path + ".data_transfer_rate", "must be positive");
  }
  return node;
}

Task parse_task(const std::string& id, const Json& body, const std::string& path) {
  if (!body.is_object()) schema(path, "expected an object");
  Task task;
  task.id = id;
  if (body.contains("cores")) task.cores = count(body.at("cores"), path + ".cores");
  if (body.contains("memory_required")) task.memory = non_negative(body.at("memory_required"), path + ".memory_required");
  if (body.contains("data")) task.data_out = non_negative(body.at("data"), path + ".data");
  if (body.contains("features")) task.features = features(body.at("features"), path + ".features");
  if (body.contains("duration")) {
    const auto& d = body.at("duration");
    const auto dpath = path + ".duration";
    if (d.is_array()) {
      if (d.empty()) schema(dpath, "must not be empty");
      for (const auto& x : d) task.durations.push_back(non_negative(x, dpath));
    } else {
      task.durations.push_back(non_negative(d, dpath));
    }
  }
  if (body.contains("work")) task.work = non_negative(body.at("work"), path + ".work");
  if (task.durations.empty() && !task.work) schema(path, "needs a duration or a work amount");
  if (body.contains("dependencies")) {
    const auto& deps = body.at("dependencies");
    if (!deps.is_array()) schema(path + ".dependencies", "expected a list of task ids");
    for (const auto& dep : deps) {
      if (!dep.is_string()) schema(path + ".dependencies", "task ids must be strings");
      task.dependencies.push_back(dep.get<std::string>());
    }
  }
  if (body.contains("edge_data")) {
    const auto& edges = body.at("edge_data");
    if (!edges.is_object()) schema(path + ".edge_data", "expected an object");
    for (const auto& [pred, amount] : edges.items()) {
      if (std::find(task.dependencies.begin(), task.dependencies.end(), pred) == task.dependencies.end()) {
        schema(path + ".edge_data." + pred, "is not a dependency of this task");
      }
      task.edge_data[pred] = non_negative(amount, path + ".edge_data." + pred);
    }
  }
  return task;
}

Json features_json(const FeatureSet& set) {
  Json out = Json::array();
  for (const auto& tag : set) out.push_back(tag);
  return out;
}

}  // namespace

Cluster parse_cluster(std::string_view text) {
  const auto root = parse_json(text);
  if (!root.is_object()) schema("$", "expected an object");
  if (!root.contains("nodes")) schema("nodes", "is required");
  const auto& nodes = root.at("nodes");
  if (!nodes.is_object()) schema("nodes", "expected an object keyed by node id");

  Cluster cluster;
  for (const auto& [id, body] : nodes.items()) {
    cluster.nodes.push_back(parse_node(id, body, "nodes." + id));
  }

  if (root.contains("transfer_rates")) {
    const auto& rates = root.at("transfer_rates");
    if (!rates.is_object()) schema("transfer_rates", "expected an object");
    const auto n = cluster.nodes.size();
    auto index_of = [&](const std::string& id, const std::string& path) {
      for (std::size_t i = 0; i < n; ++i) {
        if (cluster.nodes[i].id == id) return i;
      }
      schema(path, "unknown node");
    };
    cluster.transfer_rates.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        cluster.transfer_rates[a][b] =
            std::min(cluster.nodes[a].data_transfer_rate, cluster.nodes[b].data_transfer_rate);
      }
    }
    for (const auto& [from, row] : rates.items()) {
      const auto path = "transfer_rates." + from;
      const auto a = index_of(from, path);
      if (!row.is_object()) schema(path, "expected an object");
      for (const auto& [to, value] : row.items()) {
        const auto b = index_of(to, path + "." + to);
        const double rate = number(value, path + "." + to);
        if (!(rate > 0.0)) schema(path + "." + to, "must be positive");
        cluster.transfer_rates[a][b] = rate;
      }
    }
  }
  return cluster;
}

std::vector<Workflow> parse_workload(std::string_view text) {
  const auto root = parse_json(text);
  if (!root.is_object()) schema("$", "expected an object keyed by workflow name");
  std::vector<Workflow> workflows;
  for (const auto& [name, body] : root.items()) {
    if (!body.is_object()) schema(name, "expected an object");
    Workflow workflow;
    workflow.id = name;
    if (body.contains("submission_time")) {
      workflow.submission_time = non_negative(body.at("submission_time"), name + ".submission_time");
    }
    if (!body.contains("tasks")) schema(name + ".tasks", "is required");
    const auto& tasks = body.at("tasks");
    if (!tasks.is_object()) schema(name + ".tasks", "expected an object keyed by task id");
    for (const auto& [id, task] : tasks.items()) {
      workflow.tasks.push_back(parse_task(id, task, name + ".tasks." + id));
    }
    validate_workflow(workflow);
    workflows.push_back(std::move(workflow));
  }
  return workflows;
}

std::string serialize_cluster(const Cluster& cluster) {
  Json nodes = Json::object();
  for (const auto& node : cluster.nodes) {
    Json body = Json::object();
    body["cores"] = node.cores;
    if (std::isfinite(node.memory)) body["memory"] = number_json(node.memory);
    if (std::isfinite(node.storage)) body["storage"] = number_json(node.storage);
    body["features"] = features_json(node.features);
    body["processing_speed"] = number_json(node.processing_speed);
    body["data_transfer_rate"] = number_json(node.data_transfer_rate);
    nodes[node.id] = std::move(body);
  }
  Json root = Json::object();
  root["nodes"] = std::move(nodes);
  if (!cluster.transfer_rates.empty()) {
    Json rates = Json::object();
    for (std::size_t a = 0; a < cluster.nodes.size(); ++a) {
      Json row = Json::object();
      for (std::size_t b = 0; b < cluster.nodes.size(); ++b) {
        row[cluster.nodes[b].id] = number_json(cluster.transfer_rates[a][b]);
      }
      rates[cluster.nodes[a].id] = std::move(row);
    }
    root["transfer_rates"] = std::move(rates);
  }
  return root.dump(2) + "\n";
}

std::string serialize_workload(std::span<const Workflow> workflows) {
  Json root = Json::object();
  for (const auto& workflow : workflows) {
    Json body = Json::object();
    if (workflow.submission_time != 0.0) body["submission_time"] = number_json(workflow.submission_time);
    Json tasks = Json::object();
    for (const auto& task : workflow.tasks) {
      Json t = Json::object();
      t["cores"] = task.cores;
      t["memory_required"] = number_json(task.memory);
      t["features"] = features_json(task.features);
      t["data"] = number_json(task.data_out);
      if (task.durations.size() == 1) {
        t["duration"] = number_json(task.durations.front());
      } else if (!task.durations.empty()) {
        Json list = Json::array();
        for (double d : task.durations) list.push_back(number_json(d));
        t["duration"] = std::move(list);
      }
      if (task.work) t["work"] = number_json(*task.work);
      Json deps = Json::array();
      for (const auto& dep : task.dependencies) deps.push_back(dep);
      t["dependencies"] = std::move(deps);
      if (!task.edge_data.empty()) {
        Json edges = Json::object();
        for (const auto& [pred, amount] : task.edge_data) edges[pred] = number_json(amount);
        t["edge_data"] = std::move(edges);
      }
      tasks[task.id] = std::move(t);
    }
    body["tasks"] = std::move(tasks);
    root[workflow.id] = std::move(body);
  }
  return root.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(Errc::io_error, "failed reading '" + path.string() + "'");
  return buffer.str();
}

// ------------------------------------------------------------------- STG

Workflow parse_stg(std::string_view text, const StgOptions& options) {
  struct Token {
    std::string text;
    std::size_t line;
  };
  std::vector<Token> tokens;
  {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      const auto line = text.substr(pos, end - pos);
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first != std::string_view::npos && line[first] == '#') break;
      std::istringstream words{std::string(line)};
      std::string word;
      while (words >> word) tokens.push_back({word, line_no});
      if (end == text.size()) break;
      pos = end + 1;
    }
  }

  std::size_t cursor = 0;
  auto next_number = [&](const char* what) -> double {
    if (cursor >= tokens.size()) {
      throw Error(Errc::parse_error, std::string("unexpected end of input while reading ") + what);
    }
    const auto& token = tokens[cursor++];
    double value = 0.0;
    std::size_t used = 0;
    try {
      value = std::stod(token.text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.text.size() || !std::isfinite(value)) {
      throw Error(Errc::parse_error, "line " + std::to_string(token.line) + ": expected " + what + ", got '" +
                                         token.text + "'");
    }
    return value;
  };
  auto next_index = [&](const char* what) -> std::size_t {
    const auto line = cursor < tokens.size() ? tokens[cursor].line : 0;
    const double value = next_number(what);
    if (value < 0.0 || std::floor(value) != value) {
      throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + what + " must be a whole number");
    }
    return static_cast<std::size_t>(value);
  };

  Workflow workflow;
  workflow.id = options.workflow_id;
  if (tokens.empty()) throw Error(Errc::parse_error, "missing task-count header");
  const auto declared = next_index("task count");

  struct Record {
    std::size_t index;
    double time;
    std::vector<std::pair<std::size_t, double>> predecessors;
    std::size_t line;
  };
  std::vector<Record> records;
  while (cursor < tokens.size()) {
    Record record;
    record.line = tokens[cursor].line;
    record.index = next_index("task index");
    record.time = next_number("processing time");
    if (record.time < 0.0) {
      throw Error(Errc::parse_error, "line " + std::to_string(record.line) + ": negative processing time");
    }
    const auto preds = next_index("predecessor count");
    for (std::size_t k = 0; k < preds; ++k) {
      const auto p = next_index("predecessor index");
      double cost = 0.0;
      if (options.comm_cost_mode == CommCostMode::explicit_weights) {
        cost = next_number("communication cost");
        if (cost < 0.0) throw Error(Errc::parse_error, "line " + std::to_string(record.line) + ": negative cost");
      }
      record.predecessors.emplace_back(p, cost);
    }
    records.push_back(std::move(record));
  }

  if (!(records.size() == declared || records.size() == declared + 2 || (declared == 0 && records.empty()))) {
    throw Error(Errc::parse_error, "header declares " + std::to_string(declared) + " tasks but " +
                                       std::to_string(records.size()) + " records follow");
  }
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) { return a.index < b.index; });
  for (std::size_t k = 1; k < records.size(); ++k) {
    if (records[k].index == records[k - 1].index) {
      throw Error(Errc::parse_error, "line " + std::to_string(records[k].line) + ": duplicate task index " +
                                         std::to_string(records[k].index));
    }
  }

  auto name = [](std::size_t index) { return "T" + std::to_string(index); };
  for (const auto& record : records) {
    Task task;
    task.id = name(record.index);
    task.cores = 1;
    if (options.speed_map.empty()) {
      task.work = record.time;
    } else {
      for (double speed : options.speed_map) {
        if (!(speed > 0.0)) throw Error(Errc::invalid_argument, "speed_map entries must be positive");
        task.durations.push_back(record.time / speed);
      }
    }
    if (options.comm_cost_mode == CommCostMode::default_constant) {
      task.data_out = options.default_dtt * options.reference_rate;
    }
    for (const auto& [p, cost] : record.predecessors) {
      task.dependencies.push_back(name(p));
      if (options.comm_cost_mode == CommCostMode::explicit_weights) {
        task.edge_data[name(p)] = cost * options.reference_rate;
      }
    }
    workflow.tasks.push_back(std::move(task));
  }
  validate_workflow(workflow);
  return workflow;
}

// ------------------------------------------------------------- synthetic

SyntheticInstance generate_synthetic(const SyntheticSpec& spec) {
  if (spec.node_count < 1 || spec.task_count < 1) {
    throw Error(Errc::invalid_argument, "synthetic instances need at least one node and one task");
  }
  if (!(spec.edge_density >= 0.0 && spec.edge_density <= 1.0)) {
    throw Error(Errc::invalid_argument, "edge_density must lie in [0, 1]");
  }
  if (!(spec.duration_min > 0.0 && spec.duration_max >= spec.duration_min && spec.data_min >= 0.0 &&
        spec.data_max >= spec.data_min)) {
    throw Error(Errc::invalid_argument, "synthetic ranges must be positive and ordered");
  }

  std::mt19937_64 rng(spec.seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto integer = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };

  SyntheticInstance out;
  for (std::size_t i = 0; i < spec.node_count; ++i) {
    Node node;
    node.id = "N" + std::to_string(i + 1);
    node.cores = integer(4, 64);
    node.memory = 4.0 * static_cast<double>(node.cores);
    for (std::size_t f = 0; f < spec.feature_pool_size; ++f) {
      if (coin(0.5)) node.features.insert("F" + std::to_string(f + 1));
    }
    node.processing_speed = uniform(1.0, 4.0);
    node.data_transfer_rate = uniform(10.0, 100.0);
    out.cluster.nodes.push_back(std::move(node));
  }

  const std::size_t n = spec.task_count;
  const auto layers = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n)))));
  std::vector<std::size_t> layer_start(layers + 1, n);
  for (std::size_t l = 0; l < layers; ++l) layer_start[l] = l * n / layers;

  auto& workflow = out.workflow;
  workflow.id = "synthetic-" + std::to_string(spec.node_count) + "x" + std::to_string(spec.task_count) + "-s" +
                std::to_string(spec.seed);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& anchor = out.cluster.nodes[static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(spec.node_count) - 1))];
    Task task;
    task.id = "T" + std::to_string(k + 1);
    for (const auto& feature : anchor.features) {
      if (coin(0.3)) task.features.insert(feature);
    }
    task.cores = integer(1, anchor.cores);
    task.memory = 2.0 * static_cast<double>(task.cores);
    task.work = uniform(spec.duration_min, spec.duration_max);
    task.data_out = uniform(spec.data_min, spec.data_max);
    workflow.tasks.push_back(std::move(task));
  }
  for (std::size_t l = 1; l < layers; ++l) {
    const auto prev_begin = layer_start[l - 1];
    const auto prev_end = layer_start[l];
    for (std::size_t k = layer_start[l]; k < layer_start[l + 1]; ++k) {
      auto& task = workflow.tasks[k];
      for (std::size_t p = prev_begin; p < prev_end; ++p) {
        if (coin(spec.edge_density)) task.dependencies.push_back(workflow.tasks[p].id);
      }
      if (task.dependencies.empty() && prev_end > prev_begin) {
        const auto p = static_cast<std::size_t>(integer(static_cast<std::int64_t>(prev_begin),
                                                        static_cast<std::int64_t>(prev_end) - 1));
        task.dependencies.push_back(workflow.tasks[p].id);
      }
    }
  }
  return out;
}

std::string instance_digest(const Cluster& cluster, std::span<const Workflow> workflows) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&](const std::string& text) {
    for (unsigned char c : text) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
  };
  mix(serialize_cluster(cluster));
  mix(serialize_workload(workflows));
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace csched
