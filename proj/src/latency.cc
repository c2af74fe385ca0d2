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

#include "cioprof/latency.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace cioprof {
namespace {

bool ValidRate(double r) { return r > 0.0 && !std::isnan(r); }

PlatformModel FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw PlatformError("platform entry must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "name" && key != "peak_macs_per_second" &&
        key != "dram_bytes_per_second" && key != "notes") {
      throw PlatformError(fmt::format("unknown platform field '{}'", key));
    }
  }
  PlatformModel p;
  try {
    p.name = j.at("name").get<std::string>();
    p.peak_macs_per_second = j.at("peak_macs_per_second").get<double>();
    p.dram_bytes_per_second = j.at("dram_bytes_per_second").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw PlatformError(fmt::format("malformed platform: {}", e.what()));
  }
  p.Validate();
  return p;
}

}  // namespace

void PlatformModel::Validate() const {
  if (!ValidRate(peak_macs_per_second)) {
    throw PlatformError(fmt::format("platform '{}': peak_macs_per_second must "
                                    "be > 0, got {}",
                                    name, peak_macs_per_second));
  }
  if (!ValidRate(dram_bytes_per_second)) {
    throw PlatformError(fmt::format("platform '{}': dram_bytes_per_second "
                                    "must be > 0, got {}",
                                    name, dram_bytes_per_second));
  }
}

double PlatformModel::CriticalMoc(int dtype_bytes) const {
  return peak_macs_per_second / dram_bytes_per_second *
         static_cast<double>(dtype_bytes);
}

std::vector<PlatformModel> BuiltinPlatforms() {
  return {{"gpu-like", 1e13, 6e11}, {"edge-like", 1e11, 1e10}};
}

PlatformModel BuiltinPlatform(std::string_view name) {
  for (const auto& p : BuiltinPlatforms()) {
    if (p.name == name) return p;
  }
  throw PlatformError(fmt::format("unknown platform preset '{}'", name));
}

std::vector<PlatformModel> ParsePlatforms(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw PlatformError(fmt::format("malformed platform JSON: {}", e.what()));
  }
  const nlohmann::json* list = &j;
  if (j.is_object() && j.contains("platforms")) list = &j["platforms"];
  std::vector<PlatformModel> out;
  if (list->is_array()) {
    for (const auto& e : *list) out.push_back(FromJson(e));
  } else {
    out.push_back(FromJson(*list));
  }
  if (out.empty()) throw PlatformError("platform file lists no platforms");
  return out;
}

PlatformModel LoadPlatform(const std::string& path, std::string_view preset) {
  std::ifstream in(path);
  if (!in) throw PlatformError(fmt::format("cannot open '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  const auto all = ParsePlatforms(buf.str());
  if (preset.empty()) {
    if (all.size() == 1) return all.front();
    throw PlatformError(fmt::format(
        "'{}' holds {} platforms; pick one with --preset", path, all.size()));
  }
  for (const auto& p : all) {
    if (p.name == preset) return p;
  }
  throw PlatformError(
      fmt::format("no platform named '{}' in '{}'", preset, path));
}

std::string_view BoundName(Bound b) {
  switch (b) {
    case Bound::kCompute:
      return "compute";
    case Bound::kMemory:
      return "memory";
    case Bound::kNone:
      break;
  }
  return "none";
}

double LayerTime(const LayerMetrics& metrics, const PlatformModel& platform) {
  const double compute =
      static_cast<double>(metrics.macs) / platform.peak_macs_per_second;
  const double memory = static_cast<double>(metrics.cio_bytes) /
                        platform.dram_bytes_per_second;
  return std::max(compute, memory);
}

std::int64_t ConcatCopyBytes(const ArchGraph& graph, NodeId id,
                             int dtype_bytes) {
  if (!std::holds_alternative<ConcatLayer>(graph.node(id).kind)) return 0;
  return 2 * graph.shape(id).element_count() * dtype_bytes;
}

LatencyReport ModelLatency(const ArchGraph& graph, const ModelSummary& summary,
                           const PlatformModel& platform,
                           const LatencyOptions& options) {
  platform.Validate();
  LatencyReport report;
  report.platform = platform;
  report.dtype_bytes = summary.dtype_bytes;
  report.critical_moc = platform.CriticalMoc(summary.dtype_bytes);
  report.layers.reserve(summary.layers.size());
  for (const LayerMetrics& m : summary.layers) {
    LayerLatency l;
    l.node = m.node;
    l.compute_seconds =
        static_cast<double>(m.macs) / platform.peak_macs_per_second;
    std::int64_t bytes = m.cio_bytes;
    if (options.concat_copy) {
      bytes += ConcatCopyBytes(graph, m.node, summary.dtype_bytes);
    }
    l.memory_seconds =
        static_cast<double>(bytes) / platform.dram_bytes_per_second;
    l.seconds = std::max(l.compute_seconds, l.memory_seconds);
    if (m.cio_elements > 0) {
      l.bound = m.moc < report.critical_moc ? Bound::kMemory : Bound::kCompute;
    } else if (m.macs > 0) {
      l.bound = Bound::kCompute;
    } else if (bytes > 0) {
      l.bound = Bound::kMemory;
    }
    report.total_seconds += l.seconds;
    report.layers.push_back(l);
  }
  return report;
}

}  // namespace cioprof
