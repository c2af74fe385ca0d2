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

#ifndef CIOPROF_LATENCY_H_
#define CIOPROF_LATENCY_H_

#include <string>
#include <string_view>
#include <vector>

#include "cioprof/graph.h"
#include "cioprof/metrics.h"

namespace cioprof {

class PlatformError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rates may be +inf, which is how the compute-only and memory-only limits
// are expressed. JSON files cannot carry inf, so loaded rates are finite.
struct PlatformModel {
  std::string name;
  double peak_macs_per_second = 0.0;
  double dram_bytes_per_second = 0.0;

  void Validate() const;
  // MACs per element at which compute and transfer time are equal.
  double CriticalMoc(int dtype_bytes) const;
};

// gpu-like and edge-like.
std::vector<PlatformModel> BuiltinPlatforms();
PlatformModel BuiltinPlatform(std::string_view name);

// Accepts a single platform object, an array of them, or
// {"platforms": [...]}. When the file holds several, `preset` picks one by
// name; an empty preset is only allowed for single-platform files.
PlatformModel LoadPlatform(const std::string& path, std::string_view preset);
std::vector<PlatformModel> ParsePlatforms(std::string_view json_text);

enum class Bound { kNone, kCompute, kMemory };
std::string_view BoundName(Bound b);

struct LatencyOptions {
  // Charge Concat nodes for reading and writing their output once each.
  bool concat_copy = false;
};

struct LayerLatency {
  NodeId node = 0;
  double compute_seconds = 0.0;
  double memory_seconds = 0.0;
  double seconds = 0.0;
  Bound bound = Bound::kNone;
};

struct LatencyReport {
  PlatformModel platform;
  int dtype_bytes = 4;
  double critical_moc = 0.0;
  double total_seconds = 0.0;
  std::vector<LayerLatency> layers;
};

// max(macs / peak, cio_bytes / bandwidth).
double LayerTime(const LayerMetrics& metrics, const PlatformModel& platform);

// Bytes a materialized concat moves: its output is read and written once.
std::int64_t ConcatCopyBytes(const ArchGraph& graph, NodeId id,
                             int dtype_bytes);

LatencyReport ModelLatency(const ArchGraph& graph, const ModelSummary& summary,
                           const PlatformModel& platform,
                           const LatencyOptions& options = {});

}  // namespace cioprof

#endif  // CIOPROF_LATENCY_H_
