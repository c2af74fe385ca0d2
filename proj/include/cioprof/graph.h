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

#ifndef CIOPROF_GRAPH_H_
#define CIOPROF_GRAPH_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cioprof {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public GraphError {
 public:
  using GraphError::GraphError;
};

using NodeId = int;

// Feature map of a single image (batch is always 1).
struct TensorShape {
  std::int64_t channels = 1;
  std::int64_t height = 1;
  std::int64_t width = 1;

  // Throws ShapeError unless every dimension is >= 1.
  static TensorShape Make(std::int64_t c, std::int64_t h, std::int64_t w);

  std::int64_t element_count() const { return channels * height * width; }
  std::string ToString() const;  // "CxHxW"

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

enum class PoolMode { kAvg, kMax };

struct InputLayer {
  friend bool operator==(const InputLayer&, const InputLayer&) = default;
};

struct ConvLayer {
  int kernel_h = 3;
  int kernel_w = 3;
  int stride = 1;
  int dilation = 1;
  int groups = 1;
  std::int64_t out_channels = 0;
  bool has_bias = false;

  friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

struct PoolLayer {
  PoolMode mode = PoolMode::kMax;
  int kernel = 2;
  int stride = 2;

  friend bool operator==(const PoolLayer&, const PoolLayer&) = default;
};

struct TransposedConvLayer {
  int kernel = 3;
  int stride = 2;
  std::int64_t out_channels = 0;

  friend bool operator==(const TransposedConvLayer&,
                         const TransposedConvLayer&) = default;
};

struct ConcatLayer {
  friend bool operator==(const ConcatLayer&, const ConcatLayer&) = default;
};

// Elementwise residual sum; all inputs share one shape.
struct AddLayer {
  friend bool operator==(const AddLayer&, const AddLayer&) = default;
};

struct GlobalPoolLayer {
  friend bool operator==(const GlobalPoolLayer&,
                         const GlobalPoolLayer&) = default;
};

struct LinearLayer {
  std::int64_t out_features = 0;
  bool has_bias = true;

  friend bool operator==(const LinearLayer&, const LinearLayer&) = default;
};

using LayerKind = std::variant<InputLayer, ConvLayer, PoolLayer,
                               TransposedConvLayer, ConcatLayer, AddLayer,
                               GlobalPoolLayer, LinearLayer>;

// Stable lowercase names used by the JSON format and reports.
std::string_view KindName(const LayerKind& kind);

// Conv helpers. Padding is always "same": dilation * (k - 1) / 2.
ConvLayer Conv(std::int64_t out_channels, int kernel = 3, int stride = 1);
ConvLayer DepthwiseConv(std::int64_t channels, int kernel = 3, int stride = 1);

struct Node {
  NodeId id = 0;
  LayerKind kind;
  std::vector<NodeId> inputs;
  std::string label;
};

// A DAG of layers. Nodes can only reference nodes that already exist, so the
// graph is acyclic by construction and node ids double as emission order.
//
// When the graph knows its input shape, shapes are inferred eagerly as nodes
// are appended; builders rely on this to read channel counts mid-build.
class ArchGraph {
 public:
  explicit ArchGraph(std::string name = {},
                     std::optional<TensorShape> input = std::nullopt);

  // Appends a node and returns its id. Throws GraphError on an unknown input
  // id, a Concat or Add with fewer than two inputs, or a second Input node.
  NodeId AddNode(LayerKind kind, std::vector<NodeId> inputs,
                 std::string label = {});

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const;
  std::size_t size() const { return nodes_.size(); }

  const std::optional<TensorShape>& input_shape() const { return input_; }

  // Re-runs inference over the whole graph for a new input shape.
  void InferShapes(const TensorShape& input);

  bool has_shapes() const;
  const TensorShape& shape(NodeId id) const;

  // Concatenated (or single) input shape seen by a node.
  const TensorShape& input_of(NodeId id) const;

  // Checks the structural invariants: one Input node, non-input nodes have
  // inputs, inputs precede their consumers.
  void Validate() const;

 private:
  TensorShape InferNode(const Node& node) const;

  std::string name_;
  std::optional<TensorShape> input_;
  std::vector<Node> nodes_;
  std::vector<TensorShape> shapes_;
};

// Deterministic topological order; ties go to the smallest node id.
std::vector<NodeId> TopoSchedule(const ArchGraph& graph);

// Consumers of every node, in ascending id order.
std::vector<std::vector<NodeId>> Consumers(const ArchGraph& graph);

bool IsConvLike(const LayerKind& kind);
bool IsPointwise(const ArchGraph& graph, NodeId id);
bool IsDepthwise(const ArchGraph& graph, NodeId id);

}  // namespace cioprof

#endif  // CIOPROF_GRAPH_H_
