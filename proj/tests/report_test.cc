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

#include <doctest.h>

#include <regex>
#include <set>
#include <sstream>

#include "cioprof/report.h"
#include "cioprof/zoo.h"

namespace cioprof {
namespace {

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Accepts the subset of DOT this library writes: a digraph of node
// statements and edges, one per line, with quoted labels.
struct DotCheck {
  bool ok = false;
  std::set<int> nodes;
  int edges = 0;
};

DotCheck ParseDot(const std::string& text) {
  static const std::regex kHead(R"re(^digraph "(?:[^"\\]|\\.)*" \{$)re");
  static const std::regex kAttr(R"(^  (rankdir=TB|node \[shape=box\]);$)");
  static const std::regex kNode(R"re(^  n(\d+) \[label="(?:[^"\\]|\\.)*"\];$)re");
  static const std::regex kEdge(R"(^  n(\d+) -> n(\d+);$)");
  DotCheck c;
  const auto lines = Lines(text);
  if (lines.size() < 2 || !std::regex_match(lines.front(), kHead) ||
      lines.back() != "}") {
    return c;
  }
  std::smatch m;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    if (std::regex_match(lines[i], m, kNode)) {
      if (!c.nodes.insert(std::stoi(m[1])).second) return c;
    } else if (std::regex_match(lines[i], m, kEdge)) {
      if (!c.nodes.contains(std::stoi(m[1])) ||
          !c.nodes.contains(std::stoi(m[2]))) {
        return c;
      }
      ++c.edges;
    } else if (!std::regex_match(lines[i], kAttr)) {
      return c;
    }
  }
  c.ok = true;
  return c;
}

TEST_SUITE("report") {

TEST_CASE("summary CSV layout") {
  const ArchGraph g = BuildNamed("resnet18");
  const auto s = Summarize(g);
  const std::string csv = SummaryCsv(g, s, MakeHeader(s));
  const auto lines = Lines(csv);
  REQUIRE(lines.size() == 5 + 1 + g.size() + 1);
  CHECK(lines[0] == "# tool: cioprof " + std::string(kToolVersion));
  CHECK(lines[1] == "# model: resnet18");
  CHECK(lines[2] == "# input: 3x224x224");
  CHECK(lines[3] == "# dtype_bytes: 4");
  CHECK(lines[4] == "# flags: none");
  CHECK(lines[5] == "id,label,kind,out_shape,params,macs,cio_elements,moc");
  CHECK(lines[6] == "0,input,input,3x224x224,0,0,0,0");
  CHECK(lines.back().starts_with(
      "total,,,," + std::to_string(s.totals.params) + "," +
      std::to_string(s.totals.macs) + "," +
      std::to_string(s.totals.cio_elements) + ","));
  for (std::size_t i = 6; i < lines.size(); ++i) {
    CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 7);
  }
}

TEST_CASE("labels with commas are quoted") {
  ArchGraph g("q", TensorShape::Make(3, 4, 4));
  g.AddNode(InputLayer{}, {}, "in,put");
  const auto s = Summarize(g);
  CHECK(SummaryCsv(g, s, MakeHeader(s)).find("0,\"in,put\",input") !=
        std::string::npos);
}

TEST_CASE("JSON mirrors the CSV") {
  const ArchGraph g = BuildNamed("hardnet39ds");
  const auto s = Summarize(g, 2, 0.6);
  const auto h = MakeHeader(s);
  const auto j = SummaryJson(g, s, h);
  CHECK(j["header"]["flags"]["ds_weight"] == "0.6");
  CHECK(j["header"]["dtype_bytes"] == 2);
  REQUIRE(j["layers"].size() == g.size());
  for (const auto& m : s.layers) {
    const auto& row = j["layers"][static_cast<std::size_t>(m.node)];
    CHECK(row["id"] == m.node);
    CHECK(row["params"] == m.params);
    CHECK(row["macs"] == m.macs);
    CHECK(row["cio_elements"] == m.cio_elements);
    CHECK(row["moc"].get<double>() == m.moc);
  }
  CHECK(j["totals"]["params"] == s.totals.params);
  CHECK(j["totals"]["cio_weighted"].get<double>() == s.totals.cio_weighted);
  CHECK(j["per_stride"].size() == s.per_stride.size());
}

TEST_CASE("reports are deterministic") {
  const ArchGraph a = BuildNamed("fc-hardnet68");
  const ArchGraph b = BuildNamed("fc-hardnet68");
  const auto sa = Summarize(a);
  const auto sb = Summarize(b);
  CHECK(SummaryCsv(a, sa, MakeHeader(sa)) == SummaryCsv(b, sb, MakeHeader(sb)));
  CHECK(SummaryJson(a, sa, MakeHeader(sa)).dump() ==
        SummaryJson(b, sb, MakeHeader(sb)).dump());
  CHECK(ToDot(a) == ToDot(b));
}

TEST_CASE("DOT export is valid and complete") {
  for (const std::string& name : ModelNames()) {
    CAPTURE(name);
    const ArchGraph g = BuildNamed(name);
    const DotCheck c = ParseDot(ToDot(g));
    REQUIRE(c.ok);
    CHECK(c.nodes.size() == g.size());
    std::size_t edges = 0;
    for (const Node& n : g.nodes()) edges += n.inputs.size();
    CHECK(static_cast<std::size_t>(c.edges) == edges);
  }
}

TEST_CASE("DOT escapes quotes") {
  ArchGraph g("we\"ird", TensorShape::Make(3, 4, 4));
  g.AddNode(InputLayer{}, {}, "a\"b\\c");
  const DotCheck c = ParseDot(ToDot(g));
  CHECK(c.ok);
  CHECK(c.nodes.size() == 1);
}

TEST_CASE("timeline CSV") {
  const ArchGraph g = BuildNamed("resnet18");
  const auto p = PeakMemory(g, TopoSchedule(g), 4);
  ReportHeader h{"resnet18", *g.input_shape(), 4, {}};
  const auto lines = Lines(TimelineCsv(p, h));
  std::size_t header_end = 0;
  while (lines[header_end].starts_with("#")) ++header_end;
  CHECK(lines[header_end] == "step,node,live_bytes");
  CHECK(lines.size() - header_end - 1 == g.size());
  CHECK(lines[header_end + 1] == "0,0," + std::to_string(3 * 224 * 224 * 4));
}

TEST_CASE("latency and MoC reports") {
  const ArchGraph g = BuildNamed("resnet18");
  const auto s = Summarize(g);
  const auto r = ModelLatency(g, s, BuiltinPlatform("gpu-like"));
  const auto csv = Lines(LatencyCsv(g, r, MakeHeader(s)));
  CHECK(csv.back().starts_with("total,"));
  CHECK(LatencyJson(g, r, MakeHeader(s))["layers"].size() == g.size());
  const auto v = CheckMoc(g, s, 1e9);
  CHECK(MocJson(g, v, MakeHeader(s))["violations"].size() == v.size());
  CHECK(Lines(MocCsv(g, v, MakeHeader(s))).back() ==
        "# violations: " + std::to_string(v.size()));
}

TEST_CASE("real formatting") {
  CHECK(FormatReal(0.0) == "0");
  CHECK(FormatReal(31.0306) == "31.0306");
  CHECK(FormatReal(std::numeric_limits<double>::infinity()) == "inf");
}

}  // TEST_SUITE

}  // namespace
}  // namespace cioprof
