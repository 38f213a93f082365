#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cli.hpp"
#include "csched/ingest.hpp"

namespace csched::cli {
namespace {

Json number_or_null(const SolveResult& result, double value) {
  return result.has_schedule() ? Json(value) : Json(nullptr);
}

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::schema_error, "schedule file: " + what); }

const Json& field(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) malformed(where + " lacks \"" + key + "\"");
  return object.at(key);
}

double number_field(const Json& object, const char* key, const std::string& where) {
  const auto& v = field(object, key, where);
  if (!v.is_number()) malformed(where + "." + key + " is not a number");
  return v.get<double>();
}

std::string string_field(const Json& object, const char* key, const std::string& where) {
  const auto& v = field(object, key, where);
  if (!v.is_string()) malformed(where + "." + key + " is not a string");
  return v.get<std::string>();
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_number(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 6);
  return ec == std::errc() ? std::string(buffer, end) : "nan";
}

// Stable across platforms, unlike std::hash.
std::uint32_t fnv1a(const std::string& text) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : text) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

}  // namespace

std::string fixed6(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::fixed, 6);
  return ec == std::errc() ? std::string(buffer, end) : "nan";
}

Json make_report(const Instance& instance, Technique technique, std::uint64_t seed,
                 const std::vector<SolveResult>& results) {
  Json report = Json::object();
  report["technique"] = std::string(to_string(technique));
  report["alpha"] = instance.alpha;
  report["beta"] = instance.beta;
  report["usage_mode"] = std::string(to_string(instance.usage_mode));
  report["capacity_mode"] = std::string(to_string(instance.capacity_mode));
  report["seed"] = seed;
  report["instance_digest"] = instance_digest(Cluster{instance.nodes, instance.transfer_rates}, instance.workflows);
  Json nodes = Json::array();
  for (const auto& node : instance.nodes) nodes.push_back(node.id);
  report["nodes"] = std::move(nodes);

  Json workflows = Json::array();
  for (std::size_t w = 0; w < results.size(); ++w) {
    const auto& r = results[w];
    Json item = Json::object();
    item["workflow"] = instance.workflows[w].id;
    item["status"] = std::string(to_string(r.status));
    item["detail"] = r.detail;
    item["makespan"] = number_or_null(r, r.schedule ? r.schedule->makespan : 0.0);
    item["total_usage"] = number_or_null(r, r.schedule ? r.schedule->total_usage : 0.0);
    item["objective"] = number_or_null(r, r.schedule ? r.schedule->objective : 0.0);
    item["wall_time"] = r.wall_time;
    item["explored_nodes"] = r.explored_nodes;
    Json entries = Json::array();
    if (r.schedule) {
      for (const auto& e : r.schedule->entries) {
        entries.push_back(
            Json{{"task", e.task_id}, {"node", e.node_id}, {"start", e.start}, {"end", e.finish}, {"usage", e.usage}});
      }
    }
    item["entries"] = std::move(entries);
    workflows.push_back(std::move(item));
  }
  report["workflows"] = std::move(workflows);
  return report;
}

std::string render_table(const Json& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-12s %-8s %-8s %10s %10s %12s %12s\n", "Status", "Workflow", "Task", "Node",
                "Start", "End", "Usage", "Makespan");
  out << line << std::string(88, '-') << '\n';
  for (const auto& w : report.at("workflows")) {
    const auto status = w.at("status").get<std::string>();
    const auto id = w.at("workflow").get<std::string>();
    for (const auto& e : w.at("entries")) {
      std::snprintf(line, sizeof line, "%-10s %-12s %-8s %-8s %10s %10s %12s %12s\n", status.c_str(), id.c_str(),
                    e.at("task").get<std::string>().c_str(), e.at("node").get<std::string>().c_str(),
                    fixed6(e.at("start").get<double>()).c_str(), fixed6(e.at("end").get<double>()).c_str(),
                    fixed6(e.at("usage").get<double>()).c_str(), "");
      out << line;
    }
    const auto total = [&](const char* key) {
      return w.at(key).is_null() ? std::string("-") : fixed6(w.at(key).get<double>());
    };
    std::snprintf(line, sizeof line, "%-10s %-12s %-8s %-8s %10s %10s %12s %12s\n", status.c_str(), id.c_str(),
                  "Total", "", "", "", total("total_usage").c_str(), total("makespan").c_str());
    out << line;
    if (w.contains("detail") && w.at("detail").is_string() && !w.at("detail").get<std::string>().empty()) {
      out << "  note: " << w.at("detail").get<std::string>() << '\n';
    }
    out << std::string(88, '-') << '\n';
  }
  return out.str();
}

std::string render_gantt(const Json& report) {
  if (!report.is_object()) malformed("top level is not an object");
  const auto& node_list = field(report, "nodes", "report");
  if (!node_list.is_array()) malformed("nodes is not a list");
  std::vector<std::string> nodes;
  for (const auto& n : node_list) {
    if (!n.is_string()) malformed("node ids must be strings");
    nodes.push_back(n.get<std::string>());
  }
  const auto& workflows = field(report, "workflows", "report");
  if (!workflows.is_array()) malformed("workflows is not a list");

  struct Bar {
    std::string task;
    std::size_t lane;
    double start;
    double end;
  };
  struct Panel {
    std::string workflow;
    std::vector<Bar> bars;
    double horizon = 0.0;
  };
  std::vector<Panel> panels;
  for (std::size_t w = 0; w < workflows.size(); ++w) {
    const auto where = "workflows[" + std::to_string(w) + "]";
    Panel panel;
    panel.workflow = string_field(workflows[w], "workflow", where);
    const auto& entries = field(workflows[w], "entries", where);
    if (!entries.is_array()) malformed(where + ".entries is not a list");
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto at = where + ".entries[" + std::to_string(k) + "]";
      Bar bar;
      bar.task = string_field(entries[k], "task", at);
      const auto node = string_field(entries[k], "node", at);
      const auto it = std::find(nodes.begin(), nodes.end(), node);
      if (it == nodes.end()) malformed(at + " names unknown node '" + node + "'");
      bar.lane = static_cast<std::size_t>(it - nodes.begin());
      bar.start = number_field(entries[k], "start", at);
      bar.end = number_field(entries[k], "end", at);
      if (!(bar.end >= bar.start) || !std::isfinite(bar.end)) malformed(at + " has end before start");
      panel.horizon = std::max(panel.horizon, bar.end);
      panel.bars.push_back(std::move(bar));
    }
    panels.push_back(std::move(panel));
  }

  constexpr double kLeft = 80.0;
  constexpr double kPlot = 640.0;
  constexpr double kLane = 28.0;
  constexpr double kTitle = 24.0;
  constexpr double kAxis = 28.0;
  const double panel_height = kTitle + kLane * static_cast<double>(std::max<std::size_t>(nodes.size(), 1)) + kAxis;
  const double height = std::max(1.0, static_cast<double>(panels.size())) * panel_height + 8.0;
  const double width = kLeft + kPlot + 40.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << short_number(width) << "\" height=\""
      << short_number(height) << "\" data-scale-left=\"" << short_number(kLeft) << "\" font-family=\"sans-serif\" "
      << "font-size=\"11\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << short_number(width) << "\" height=\"" << short_number(height)
      << "\" fill=\"white\"/>\n";

  if (panels.empty()) {
    // Empty axes.
    const double axis_y = kTitle + kLane;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << axis_y << "\" x2=\"" << kLeft + kPlot << "\" y2=\"" << axis_y
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTitle << "\" x2=\"" << kLeft << "\" y2=\"" << axis_y
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft + kPlot / 2 << "\" y=\"" << axis_y + 18 << "\" text-anchor=\"middle\">time (s)</text>\n";
  }

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    const double top = static_cast<double>(p) * panel_height;
    const double lanes_top = top + kTitle;
    const double axis_y = lanes_top + kLane * static_cast<double>(nodes.size());
    const double horizon = panel.horizon > 0.0 ? panel.horizon : 1.0;
    const double scale = kPlot / horizon;
    const auto hue = fnv1a(panel.workflow) % 360;

    svg << "<g class=\"workflow\" data-workflow=\"" << escape_xml(panel.workflow) << "\" data-scale=\""
        << short_number(scale) << "\">\n";
    svg << "<text x=\"" << kLeft << "\" y=\"" << short_number(top + 16) << "\" font-weight=\"bold\">"
        << escape_xml(panel.workflow) << "</text>\n";
    for (std::size_t lane = 0; lane < nodes.size(); ++lane) {
      const double y = lanes_top + kLane * static_cast<double>(lane);
      svg << "<rect class=\"lane\" x=\"" << kLeft << "\" y=\"" << short_number(y) << "\" width=\"" << kPlot
          << "\" height=\"" << kLane << "\" fill=\"" << (lane % 2 ? "#f4f4f4" : "#ffffff") << "\"/>\n";
      svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << short_number(y + kLane / 2 + 4)
          << "\" text-anchor=\"end\">" << escape_xml(nodes[lane]) << "</text>\n";
    }
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << short_number(axis_y) << "\" x2=\"" << kLeft + kPlot << "\" y2=\""
        << short_number(axis_y) << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
      const double t = horizon * tick / 5.0;
      const double x = kLeft + t * scale;
      svg << "<line x1=\"" << short_number(x) << "\" y1=\"" << short_number(axis_y) << "\" x2=\"" << short_number(x)
          << "\" y2=\"" << short_number(axis_y + 4) << "\" stroke=\"black\"/>\n";
      svg << "<text x=\"" << short_number(x) << "\" y=\"" << short_number(axis_y + 16)
          << "\" text-anchor=\"middle\">" << short_number(t) << "</text>\n";
    }
    for (const auto& bar : panel.bars) {
      const double x = kLeft + bar.start * scale;
      const double w = (bar.end - bar.start) * scale;
      const double y = lanes_top + kLane * static_cast<double>(bar.lane) + 4;
      svg << "<rect class=\"task\" data-task=\"" << escape_xml(bar.task) << "\" data-node=\""
          << escape_xml(nodes[bar.lane]) << "\" data-start=\"" << short_number(bar.start) << "\" data-end=\""
          << short_number(bar.end) << "\" x=\"" << short_number(x) << "\" y=\"" << short_number(y) << "\" width=\""
          << short_number(w) << "\" height=\"" << kLane - 8 << "\" fill=\"hsl(" << hue
          << ",55%,62%)\" stroke=\"#333\"/>\n";
      svg << "<text x=\"" << short_number(x + w / 2) << "\" y=\"" << short_number(y + kLane / 2)
          << "\" text-anchor=\"middle\">" << escape_xml(bar.task) << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace csched::cli
