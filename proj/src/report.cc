/* Copyright 2026 The cioprof Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cioprof/report.h"

#include <fmt/format.h>

#include <cmath>

namespace cioprof {
namespace {

using nlohmann::ordered_json;

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string DotEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string NodeLabel(const ArchGraph& g, NodeId id) {
  const Node& n = g.node(id);
  return n.label.empty() ? fmt::format("{}{}", KindName(n.kind), id)
                         : n.label;
}

double TotalMoc(const MetricTotals& t) {
  return t.cio_elements == 0 ? 0.0
                             : static_cast<double>(t.macs) /
                                   static_cast<double>(t.cio_elements);
}

ordered_json TotalsJson(const MetricTotals& t) {
  ordered_json j;
  j["params"] = t.params;
  j["macs"] = t.macs;
  j["cio_elements"] = t.cio_elements;
  j["cio_weighted"] = t.cio_weighted;
  j["cio_bytes"] = t.cio_bytes;
  j["moc"] = TotalMoc(t);
  return j;
}

}  // namespace

std::string FormatReal(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.6g}", v);
}

ReportHeader MakeHeader(const ModelSummary& summary) {
  ReportHeader h;
  h.model = summary.model;
  h.input = summary.input;
  h.dtype_bytes = summary.dtype_bytes;
  if (summary.ds_weight) {
    h.flags.emplace_back("ds_weight", FormatReal(*summary.ds_weight));
  }
  return h;
}

std::string HeaderComment(const ReportHeader& header) {
  std::string out = fmt::format("# tool: cioprof {}\n", kToolVersion);
  out += fmt::format("# model: {}\n", header.model);
  out += fmt::format("# input: {}\n", header.input.ToString());
  out += fmt::format("# dtype_bytes: {}\n", header.dtype_bytes);
  std::string flags;
  for (const auto& [k, v] : header.flags) {
    if (!flags.empty()) flags += ' ';
    flags += fmt::format("{}={}", k, v);
  }
  out += fmt::format("# flags: {}\n", flags.empty() ? "none" : flags);
  return out;
}

ordered_json HeaderJson(const ReportHeader& header) {
  ordered_json j;
  j["tool"] = fmt::format("cioprof {}", kToolVersion);
  j["model"] = header.model;
  j["input"] = {header.input.channels, header.input.height,
                header.input.width};
  j["dtype_bytes"] = header.dtype_bytes;
  ordered_json flags = ordered_json::object();
  for (const auto& [k, v] : header.flags) flags[k] = v;
  j["flags"] = flags;
  return j;
}

std::string SummaryCsv(const ArchGraph& graph, const ModelSummary& summary,
                       const ReportHeader& header) {
  std::string out = HeaderComment(header);
  out += "id,label,kind,out_shape,params,macs,cio_elements,moc\n";
  for (const LayerMetrics& m : summary.layers) {
    const Node& n = graph.node(m.node);
    out += fmt::format("{},{},{},{},{},{},{},{}\n", n.id, CsvField(n.label),
                       KindName(n.kind), graph.shape(n.id).ToString(),
                       m.params, m.macs, m.cio_elements, FormatReal(m.moc));
  }
  const MetricTotals& t = summary.totals;
  out += fmt::format("total,,,,{},{},{},{}\n", t.params, t.macs,
                     t.cio_elements, FormatReal(TotalMoc(t)));
  return out;
}

ordered_json SummaryJson(const ArchGraph& graph, const ModelSummary& summary,
                         const ReportHeader& header) {
  ordered_json j;
  j["header"] = HeaderJson(header);
  ordered_json layers = ordered_json::array();
  for (const LayerMetrics& m : summary.layers) {
    const Node& n = graph.node(m.node);
    ordered_json row;
    row["id"] = n.id;
    row["label"] = n.label;
    row["kind"] = KindName(n.kind);
    row["out_shape"] = graph.shape(n.id).ToString();
    row["params"] = m.params;
    row["macs"] = m.macs;
    row["cio_elements"] = m.cio_elements;
    row["moc"] = m.moc;
    layers.push_back(std::move(row));
  }
  j["layers"] = std::move(layers);
  ordered_json totals = TotalsJson(summary.totals);
  totals["params_m"] = summary.params_m();
  totals["macs_g"] = summary.macs_g();
  totals["cio_m"] = summary.cio_m();
  totals["cio_mb"] = summary.cio_mb();
  j["totals"] = std::move(totals);
  ordered_json strides = ordered_json::array();
  for (const auto& [stride, t] : summary.per_stride) {
    ordered_json row = TotalsJson(t);
    row["stride"] = stride;
    strides.push_back(std::move(row));
  }
  j["per_stride"] = std::move(strides);
  return j;
}

std::string TimelineCsv(const MemoryProfile& profile,
                        const ReportHeader& header) {
  std::string out = HeaderComment(header);
  out += fmt::format("# peak_bytes: {}\n# peak_step: {}\n", profile.peak_bytes,
                     profile.peak_step);
  if (profile.weight_bytes > 0) {
    out += fmt::format("# weight_bytes: {}\n", profile.weight_bytes);
  }
  out += "step,node,live_bytes\n";
  for (std::size_t s = 0; s < profile.steps.size(); ++s) {
    out += fmt::format("{},{},{}\n", s, profile.steps[s].node,
                       profile.steps[s].live_bytes);
  }
  return out;
}

ordered_json TimelineJson(const MemoryProfile& profile,
                          const ReportHeader& header) {
  ordered_json j;
  j["header"] = HeaderJson(header);
  j["peak_bytes"] = profile.peak_bytes;
  j["peak_step"] = profile.peak_step;
  j["weight_bytes"] = profile.weight_bytes;
  ordered_json steps = ordered_json::array();
  for (std::size_t s = 0; s < profile.steps.size(); ++s) {
    ordered_json row;
    row["step"] = s;
    row["node"] = profile.steps[s].node;
    row["live_bytes"] = profile.steps[s].live_bytes;
    row["live"] = profile.steps[s].live;
    steps.push_back(std::move(row));
  }
  j["steps"] = std::move(steps);
  return j;
}

std::string LatencyCsv(const ArchGraph& graph, const LatencyReport& report,
                       const ReportHeader& header) {
  std::string out = HeaderComment(header);
  const PlatformModel& p = report.platform;
  out += fmt::format("# platform: {} peak_macs_per_second={} "
                     "dram_bytes_per_second={} critical_moc={}\n",
                     p.name, FormatReal(p.peak_macs_per_second),
                     FormatReal(p.dram_bytes_per_second),
                     FormatReal(report.critical_moc));
  out += "id,label,kind,compute_s,memory_s,seconds,bound\n";
  for (const LayerLatency& l : report.layers) {
    const Node& n = graph.node(l.node);
    out += fmt::format("{},{},{},{},{},{},{}\n", n.id, CsvField(n.label),
                       KindName(n.kind), FormatReal(l.compute_seconds),
                       FormatReal(l.memory_seconds), FormatReal(l.seconds),
                       BoundName(l.bound));
  }
  out += fmt::format("total,,,,,{},\n", FormatReal(report.total_seconds));
  return out;
}

ordered_json LatencyJson(const ArchGraph& graph, const LatencyReport& report,
                         const ReportHeader& header) {
  ordered_json j;
  j["header"] = HeaderJson(header);
  ordered_json p;
  p["name"] = report.platform.name;
  p["peak_macs_per_second"] = report.platform.peak_macs_per_second;
  p["dram_bytes_per_second"] = report.platform.dram_bytes_per_second;
  p["critical_moc"] = report.critical_moc;
  j["platform"] = std::move(p);
  ordered_json layers = ordered_json::array();
  for (const LayerLatency& l : report.layers) {
    ordered_json row;
    row["id"] = l.node;
    row["label"] = graph.node(l.node).label;
    row["compute_s"] = l.compute_seconds;
    row["memory_s"] = l.memory_seconds;
    row["seconds"] = l.seconds;
    row["bound"] = BoundName(l.bound);
    layers.push_back(std::move(row));
  }
  j["layers"] = std::move(layers);
  j["total_seconds"] = report.total_seconds;
  return j;
}

std::string MocCsv(const ArchGraph& graph,
                   const std::vector<MocViolation>& violations,
                   const ReportHeader& header) {
  std::string out = HeaderComment(header);
  out += "id,label,kind,moc\n";
  for (const MocViolation& v : violations) {
    const Node& n = graph.node(v.node);
    out += fmt::format("{},{},{},{}\n", n.id, CsvField(n.label),
                       KindName(n.kind), FormatReal(v.moc));
  }
  out += fmt::format("# violations: {}\n", violations.size());
  return out;
}

ordered_json MocJson(const ArchGraph& graph,
                     const std::vector<MocViolation>& violations,
                     const ReportHeader& header) {
  ordered_json j;
  j["header"] = HeaderJson(header);
  ordered_json rows = ordered_json::array();
  for (const MocViolation& v : violations) {
    ordered_json row;
    row["id"] = v.node;
    row["label"] = graph.node(v.node).label;
    row["moc"] = v.moc;
    rows.push_back(std::move(row));
  }
  j["violations"] = std::move(rows);
  return j;
}

std::string ToDot(const ArchGraph& graph) {
  std::string out =
      fmt::format("digraph \"{}\" {{\n  rankdir=TB;\n  node [shape=box];\n",
                  DotEscape(graph.name()));
  for (const Node& n : graph.nodes()) {
    std::string text = fmt::format("{}\n{}", NodeLabel(graph, n.id),
                                   KindName(n.kind));
    if (graph.has_shapes()) {
      text += fmt::format("\n{}", graph.shape(n.id).ToString());
    }
    out += fmt::format("  n{} [label=\"{}\"];\n", n.id, DotEscape(text));
  }
  for (const Node& n : graph.nodes()) {
    for (NodeId in : n.inputs) {
      out += fmt::format("  n{} -> n{};\n", in, n.id);
    }
  }
  out += "}\n";
  return out;
}

}  // namespace cioprof
