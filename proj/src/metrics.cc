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

#include "cioprof/metrics.h"

#include <fmt/format.h>

#include <algorithm>

namespace cioprof {

void MetricTotals::Add(const LayerMetrics& m) {
  params += m.params;
  macs += m.macs;
  cio_elements += m.cio_elements;
  cio_weighted += m.cio_weighted;
  cio_bytes += m.cio_bytes;
}

double ModelSummary::cio_mb() const {
  return totals.cio_weighted * static_cast<double>(dtype_bytes) /
         static_cast<double>(1 << 20);
}

void ValidateDtypeBytes(int dtype_bytes) {
  if (dtype_bytes < 1) {
    throw std::invalid_argument(
        fmt::format("dtype bytes must be >= 1, got {}", dtype_bytes));
  }
}

std::int64_t LayerParams(const ArchGraph& graph, NodeId id) {
  const Node& n = graph.node(id);
  if (const auto* c = std::get_if<ConvLayer>(&n.kind)) {
    const std::int64_t c_in = graph.input_of(id).channels;
    return c_in / c->groups * c->out_channels * c->kernel_h * c->kernel_w +
           (c->has_bias ? c->out_channels : 0);
  }
  if (const auto* t = std::get_if<TransposedConvLayer>(&n.kind)) {
    const std::int64_t c_in = graph.input_of(id).channels;
    return c_in * t->out_channels * t->kernel * t->kernel;
  }
  if (const auto* l = std::get_if<LinearLayer>(&n.kind)) {
    const std::int64_t in = graph.input_of(id).element_count();
    return in * l->out_features + (l->has_bias ? l->out_features : 0);
  }
  return 0;
}

std::int64_t LayerMacs(const ArchGraph& graph, NodeId id) {
  const Node& n = graph.node(id);
  const TensorShape& out = graph.shape(id);
  const std::int64_t spatial = out.height * out.width;
  if (const auto* c = std::get_if<ConvLayer>(&n.kind)) {
    const std::int64_t c_in = graph.input_of(id).channels;
    return c_in / c->groups * c->out_channels * c->kernel_h * c->kernel_w *
           spatial;
  }
  if (const auto* t = std::get_if<TransposedConvLayer>(&n.kind)) {
    // Counted as an ordinary convolution evaluated on the output grid.
    const std::int64_t c_in = graph.input_of(id).channels;
    return c_in * t->out_channels * t->kernel * t->kernel * spatial;
  }
  if (const auto* l = std::get_if<LinearLayer>(&n.kind)) {
    return graph.input_of(id).element_count() * l->out_features;
  }
  return 0;
}

std::int64_t LayerCioElements(const ArchGraph& graph, NodeId id) {
  if (!IsConvLike(graph.node(id).kind)) return 0;
  return graph.input_of(id).element_count() + graph.shape(id).element_count();
}

double LayerCio(const ArchGraph& graph, NodeId id,
                std::optional<double> ds_weight) {
  const auto raw = static_cast<double>(LayerCioElements(graph, id));
  if (ds_weight && (IsPointwise(graph, id) || IsDepthwise(graph, id))) {
    return raw * *ds_weight;
  }
  return raw;
}

LayerMetrics ComputeLayerMetrics(const ArchGraph& graph, NodeId id,
                                 int dtype_bytes,
                                 std::optional<double> ds_weight) {
  ValidateDtypeBytes(dtype_bytes);
  LayerMetrics m;
  m.node = id;
  m.params = LayerParams(graph, id);
  m.macs = LayerMacs(graph, id);
  m.cio_elements = LayerCioElements(graph, id);
  m.cio_weighted = LayerCio(graph, id, ds_weight);
  m.cio_bytes = m.cio_elements * dtype_bytes;
  m.moc = m.cio_elements == 0 ? 0.0
                              : static_cast<double>(m.macs) /
                                    static_cast<double>(m.cio_elements);
  return m;
}

ModelSummary Summarize(const ArchGraph& graph, int dtype_bytes,
                       std::optional<double> ds_weight) {
  ValidateDtypeBytes(dtype_bytes);
  if (ds_weight && !(*ds_weight > 0.0)) {
    throw std::invalid_argument(
        fmt::format("ds weight must be > 0, got {}", *ds_weight));
  }
  if (!graph.has_shapes()) {
    throw ShapeError(
        fmt::format("graph '{}' has no inferred shapes", graph.name()));
  }
  ModelSummary s;
  s.model = graph.name();
  s.input = *graph.input_shape();
  s.dtype_bytes = dtype_bytes;
  s.ds_weight = ds_weight;
  s.layers.reserve(graph.size());
  for (const Node& n : graph.nodes()) {
    LayerMetrics m = ComputeLayerMetrics(graph, n.id, dtype_bytes, ds_weight);
    s.totals.Add(m);
    const std::int64_t h = graph.shape(n.id).height;
    const std::int64_t stride = std::max<std::int64_t>(1, s.input.height / h);
    s.per_stride[stride].Add(m);
    s.layers.push_back(m);
  }
  return s;
}

ModelSummary Summarize(const ArchGraph& graph, const TensorShape& input,
                       int dtype_bytes, std::optional<double> ds_weight) {
  ArchGraph copy = graph;
  copy.InferShapes(input);
  return Summarize(copy, dtype_bytes, ds_weight);
}

std::vector<MocViolation> CheckMoc(const ArchGraph& graph,
                                   const ModelSummary& summary,
                                   double threshold) {
  std::vector<MocViolation> out;
  for (const LayerMetrics& m : summary.layers) {
    if (!IsConvLike(graph.node(m.node).kind)) continue;
    if (m.moc < threshold) out.push_back({m.node, m.moc});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MocViolation& a, const MocViolation& b) {
                     return a.moc < b.moc;
                   });
  return out;
}

}  // namespace cioprof
