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

#include "cioprof/cli.h"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "cioprof/graph_json.h"
#include "cioprof/latency.h"
#include "cioprof/liveness.h"
#include "cioprof/metrics.h"
#include "cioprof/report.h"
#include "cioprof/zoo.h"

namespace cioprof::cli {
namespace {

// Bad invocation that CLI11 cannot see on its own (exit 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string target;
  std::string input;
  int dtype = 4;
  std::string format = "csv";
  std::string output;
};

std::optional<TensorShape> ParseInput(const std::string& text,
                                      std::int64_t channels) {
  if (text.empty()) return std::nullopt;
  std::int64_t h = 0;
  std::int64_t w = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> h >> x >> w) || (x != 'x' && x != 'X') || !in.eof() || h < 1 ||
      w < 1) {
    throw UsageError(fmt::format("--input expects HxW, got '{}'", text));
  }
  return TensorShape::Make(channels, h, w);
}

bool LooksLikePath(const std::string& target) {
  return target.find('/') != std::string::npos ||
         (target.size() > 5 && target.ends_with(".json"));
}

// A built-in model name or a JSON graph file. Shapes are always inferred on
// return.
ArchGraph LoadTarget(const std::string& target, const std::string& input) {
  if (LooksLikePath(target)) {
    if (!std::filesystem::exists(target)) {
      throw UsageError(fmt::format("no such graph file '{}'", target));
    }
    ArchGraph g = LoadGraph(target);
    const std::int64_t channels =
        g.input_shape() ? g.input_shape()->channels : 3;
    auto shape = ParseInput(input, channels);
    if (shape) {
      g.InferShapes(*shape);
    } else if (!g.has_shapes()) {
      throw UsageError(fmt::format(
          "graph '{}' has no input shape; pass --input HxW", target));
    }
    return g;
  }
  if (!IsKnownModel(target)) throw UsageError(UnknownModelError(target).what());
  return BuildNamed(target, ParseInput(input, 3));
}

void Emit(const std::string& text, const std::string& path,
          std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  f << text;
  if (!f) throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

std::string Dump(const nlohmann::ordered_json& j) { return j.dump(1) + "\n"; }

void AddCommon(CLI::App* cmd, Common& c, bool with_dtype = true) {
  cmd->add_option("target", c.target, "model name or graph .json path")
      ->required();
  cmd->add_option("--input", c.input, "input resolution HxW");
  if (with_dtype) {
    cmd->add_option("--dtype", c.dtype, "bytes per element")
        ->check(CLI::Range(1, 64));
  }
  cmd->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output,-o", c.output, "write the report to a file");
}

ReportHeader Header(const ArchGraph& g, int dtype) {
  ReportHeader h;
  h.model = g.name();
  h.input = *g.input_shape();
  h.dtype_bytes = dtype;
  return h;
}

std::vector<std::string> SplitMetrics(const std::string& text) {
  static const std::vector<std::string> kKnown = {"params", "macs", "cio",
                                                  "cio_mb"};
  if (text.empty()) return kKnown;
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (std::find(kKnown.begin(), kKnown.end(), item) == kKnown.end()) {
      throw UsageError(fmt::format(
          "unknown metric '{}' (expected params, macs, cio, cio_mb)", item));
    }
    if (std::find(out.begin(), out.end(), item) == out.end()) {
      out.push_back(item);
    }
  }
  if (out.empty()) throw UsageError("--metrics is empty");
  return out;
}

std::string FormatValue(double v) {
  if (std::floor(v) == v && std::abs(v) < 9e15) return fmt::format("{:.0f}", v);
  return FormatReal(v);
}

double MetricValue(const ModelSummary& s, const std::string& metric) {
  if (metric == "params") return static_cast<double>(s.totals.params);
  if (metric == "macs") return static_cast<double>(s.totals.macs);
  if (metric == "cio") return s.totals.cio_weighted;
  return s.cio_mb();
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Architecture cost analysis: params, MACs, CIO, MoC, memory"};
  app.name("cioprof");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("cioprof ") + kToolVersion);

  auto* list = app.add_subcommand("list-models", "print built-in models");

  Common build_o;
  auto* build = app.add_subcommand("build", "write a model as graph JSON");
  build->add_option("model", build_o.target)->required();
  build->add_option("--input", build_o.input, "input resolution HxW");
  build->add_option("--output,-o", build_o.output, "graph JSON path");

  Common an;
  std::optional<double> ds_weight;
  auto* analyze = app.add_subcommand("analyze", "per-layer cost report");
  AddCommon(analyze, an);
  analyze->add_option("--ds-weight", ds_weight,
                      "weight for pointwise/depthwise CIO, e.g. 0.6");

  Common cmp;
  std::string other;
  std::string metrics;
  auto* compare = app.add_subcommand("compare", "compare two models");
  AddCommon(compare, cmp);
  compare->add_option("other", other, "second model")->required();
  compare->add_option("--metrics", metrics,
                      "comma list of params,macs,cio,cio_mb");

  Common moc;
  double threshold = 0.0;
  auto* check = app.add_subcommand("check-moc", "conv layers below a MoC");
  AddCommon(check, moc);
  check->add_option("--threshold", threshold, "minimum MACs per element")
      ->required()
      ->check(CLI::NonNegativeNumber);

  Common live;
  bool concat_free = false;
  bool include_weights = false;
  auto* liveness = app.add_subcommand("liveness", "memory timeline");
  AddCommon(liveness, live);
  liveness->add_flag("--concat-free", concat_free,
                     "treat concat outputs as zero-copy views");
  liveness->add_flag("--include-weights", include_weights,
                     "also report parameter bytes");

  Common lat;
  std::string platform_path;
  std::string preset;
  bool concat_copy = false;
  auto* latency = app.add_subcommand("latency", "roofline time estimate");
  AddCommon(latency, lat);
  latency->add_option("--platform", platform_path, "platform JSON file");
  latency->add_option("--preset", preset,
                      "platform name (built-in when no --platform)");
  latency->add_flag("--concat-copy", concat_copy,
                    "charge concat nodes for copying their output");

  Common dot;
  auto* export_dot = app.add_subcommand("export-dot", "Graphviz export");
  AddCommon(export_dot, dot, /*with_dtype=*/false);
  export_dot->remove_option(export_dot->get_option("--format"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list->parsed()) {
      for (const std::string& name : ModelNames()) {
        out << fmt::format("{}\t{}\n", name, DefaultInputFor(name).ToString());
      }
      return kExitOk;
    }
    if (build->parsed()) {
      if (!IsKnownModel(build_o.target)) {
        throw UsageError(UnknownModelError(build_o.target).what());
      }
      ArchGraph g = BuildNamed(build_o.target, ParseInput(build_o.input, 3));
      Emit(GraphToJson(g).dump(1) + "\n", build_o.output, out);
      return kExitOk;
    }
    if (analyze->parsed()) {
      if (ds_weight && !(*ds_weight > 0.0)) {
        throw UsageError("--ds-weight must be > 0");
      }
      const ArchGraph g = LoadTarget(an.target, an.input);
      const ModelSummary s = Summarize(g, an.dtype, ds_weight);
      const ReportHeader h = MakeHeader(s);
      Emit(an.format == "json" ? Dump(SummaryJson(g, s, h))
                               : SummaryCsv(g, s, h),
           an.output, out);
      return kExitOk;
    }
    if (compare->parsed()) {
      const auto wanted = SplitMetrics(metrics);
      const ArchGraph a = LoadTarget(cmp.target, cmp.input);
      const ArchGraph b = LoadTarget(other, cmp.input);
      const ModelSummary sa = Summarize(a, cmp.dtype);
      const ModelSummary sb = Summarize(b, cmp.dtype);
      ReportHeader h = Header(a, cmp.dtype);
      h.model = fmt::format("{} vs {}", a.name(), b.name());
      h.flags.emplace_back("other_input", b.input_shape()->ToString());
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      std::string csv = HeaderComment(h) + "metric,a,b,ratio,reduction\n";
      for (const std::string& m : wanted) {
        const double va = MetricValue(sa, m);
        const double vb = MetricValue(sb, m);
        const double ratio = vb == 0.0 ? 0.0 : va / vb;
        csv += fmt::format("{},{},{},{},{}\n", m, FormatValue(va),
                           FormatValue(vb), FormatReal(ratio),
                           FormatReal(1.0 - ratio));
        nlohmann::ordered_json row;
        row["metric"] = m;
        row["a"] = va;
        row["b"] = vb;
        row["ratio"] = ratio;
        row["reduction"] = 1.0 - ratio;
        rows.push_back(std::move(row));
      }
      if (cmp.format == "json") {
        nlohmann::ordered_json j;
        j["header"] = HeaderJson(h);
        j["a"] = a.name();
        j["b"] = b.name();
        j["metrics"] = std::move(rows);
        Emit(Dump(j), cmp.output, out);
      } else {
        Emit(csv, cmp.output, out);
      }
      return kExitOk;
    }
    if (check->parsed()) {
      const ArchGraph g = LoadTarget(moc.target, moc.input);
      const ModelSummary s = Summarize(g, moc.dtype);
      const auto v = CheckMoc(g, s, threshold);
      ReportHeader h = MakeHeader(s);
      h.flags.emplace_back("threshold", FormatReal(threshold));
      Emit(moc.format == "json" ? Dump(MocJson(g, v, h)) : MocCsv(g, v, h),
           moc.output, out);
      return kExitOk;
    }
    if (liveness->parsed()) {
      const ArchGraph g = LoadTarget(live.target, live.input);
      MemoryOptions opts{concat_free, include_weights};
      const MemoryProfile p = PeakMemory(g, TopoSchedule(g), live.dtype, opts);
      ReportHeader h = Header(g, live.dtype);
      if (concat_free) h.flags.emplace_back("concat_free", "true");
      if (include_weights) h.flags.emplace_back("include_weights", "true");
      Emit(live.format == "json" ? Dump(TimelineJson(p, h))
                                 : TimelineCsv(p, h),
           live.output, out);
      return kExitOk;
    }
    if (latency->parsed()) {
      PlatformModel platform;
      if (!platform_path.empty()) {
        platform = LoadPlatform(platform_path, preset);
      } else if (!preset.empty()) {
        platform = BuiltinPlatform(preset);
      } else {
        throw UsageError("latency needs --platform FILE or --preset NAME");
      }
      const ArchGraph g = LoadTarget(lat.target, lat.input);
      const ModelSummary s = Summarize(g, lat.dtype);
      const LatencyReport r = ModelLatency(g, s, platform, {concat_copy});
      ReportHeader h = MakeHeader(s);
      h.flags.emplace_back("platform", platform.name);
      if (concat_copy) h.flags.emplace_back("concat_copy", "true");
      Emit(lat.format == "json" ? Dump(LatencyJson(g, r, h))
                                : LatencyCsv(g, r, h),
           lat.output, out);
      return kExitOk;
    }
    if (export_dot->parsed()) {
      const ArchGraph g = LoadTarget(dot.target, dot.input);
      Emit(ToDot(g), dot.output, out);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PlatformError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAnalysis;
  }
  return kExitUsage;
}

}  // namespace cioprof::cli
