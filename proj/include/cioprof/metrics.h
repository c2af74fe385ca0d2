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

#ifndef CIOPROF_METRICS_H_
#define CIOPROF_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cioprof/graph.h"

namespace cioprof {

// Counts for one node. CIO is only defined for convolution layers
// (conv and transposed conv); every other kind reports zero.
struct LayerMetrics {
  NodeId node = 0;
  std::int64_t params = 0;
  std::int64_t macs = 0;
  std::int64_t cio_elements = 0;  // input + output elements, unweighted
  double cio_weighted = 0.0;      // cio_elements, times ds weight if applied
  std::int64_t cio_bytes = 0;     // cio_elements * dtype_bytes
  double moc = 0.0;               // macs / cio_elements; 0 when cio is 0
};

struct MetricTotals {
  std::int64_t params = 0;
  std::int64_t macs = 0;
  std::int64_t cio_elements = 0;
  double cio_weighted = 0.0;
  std::int64_t cio_bytes = 0;

  void Add(const LayerMetrics& m);
  friend bool operator==(const MetricTotals&, const MetricTotals&) = default;
};

struct ModelSummary {
  std::string model;
  TensorShape input;
  int dtype_bytes = 4;
  std::optional<double> ds_weight;
  std::vector<LayerMetrics> layers;  // indexed by node id
  MetricTotals totals;
  // Keyed by output stride relative to the model input (input h / node h).
  std::map<std::int64_t, MetricTotals> per_stride;

  double params_m() const { return static_cast<double>(totals.params) / 1e6; }
  double macs_g() const { return static_cast<double>(totals.macs) / 1e9; }
  // Millions of (weighted) CIO elements.
  double cio_m() const { return totals.cio_weighted / 1e6; }
  // Weighted CIO in MiB at dtype_bytes per element.
  double cio_mb() const;
};

std::int64_t LayerParams(const ArchGraph& graph, NodeId id);
std::int64_t LayerMacs(const ArchGraph& graph, NodeId id);
std::int64_t LayerCioElements(const ArchGraph& graph, NodeId id);

// CIO of one layer as a double, scaled by ds_weight for pointwise and
// depthwise convolutions when a weight is given.
double LayerCio(const ArchGraph& graph, NodeId id,
                std::optional<double> ds_weight = std::nullopt);

LayerMetrics ComputeLayerMetrics(const ArchGraph& graph, NodeId id,
                                 int dtype_bytes = 4,
                                 std::optional<double> ds_weight = std::nullopt);

// Requires inferred shapes. Throws ShapeError otherwise.
ModelSummary Summarize(const ArchGraph& graph, int dtype_bytes = 4,
                       std::optional<double> ds_weight = std::nullopt);

// Re-infers a copy of the graph at `input` first.
ModelSummary Summarize(const ArchGraph& graph, const TensorShape& input,
                       int dtype_bytes = 4,
                       std::optional<double> ds_weight = std::nullopt);

struct MocViolation {
  NodeId node = 0;
  double moc = 0.0;
};

// Convolution layers whose MoC is below threshold, lowest MoC first.
std::vector<MocViolation> CheckMoc(const ArchGraph& graph,
                                   const ModelSummary& summary,
                                   double threshold);

void ValidateDtypeBytes(int dtype_bytes);

}  // namespace cioprof

#endif  // CIOPROF_METRICS_H_
