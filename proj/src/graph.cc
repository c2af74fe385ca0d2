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

#include "cioprof/graph.h"

#include <fmt/format.h>

#include <algorithm>
#include <queue>

namespace cioprof {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::int64_t ConvOutputDim(std::int64_t in, int kernel, int stride,
                           int dilation) {
  const std::int64_t pad = static_cast<std::int64_t>(dilation) * (kernel - 1) / 2;
  const std::int64_t span = static_cast<std::int64_t>(dilation) * (kernel - 1);
  return (in + 2 * pad - span - 1) / stride + 1;
}

void CheckPositive(int value, std::string_view what) {
  if (value < 1) {
    throw GraphError(fmt::format("{} must be >= 1, got {}", what, value));
  }
}

void CheckKindParams(const LayerKind& kind) {
  std::visit(Overloaded{
                 [](const ConvLayer& c) {
                   CheckPositive(c.kernel_h, "conv kernel_h");
                   CheckPositive(c.kernel_w, "conv kernel_w");
                   CheckPositive(c.stride, "conv stride");
                   CheckPositive(c.dilation, "conv dilation");
                   CheckPositive(c.groups, "conv groups");
                   if (c.out_channels < 1) {
                     throw GraphError("conv out_channels must be >= 1");
                   }
                 },
                 [](const PoolLayer& p) {
                   CheckPositive(p.kernel, "pool kernel");
                   CheckPositive(p.stride, "pool stride");
                 },
                 [](const TransposedConvLayer& t) {
                   CheckPositive(t.kernel, "transposed_conv kernel");
                   CheckPositive(t.stride, "transposed_conv stride");
                   if (t.out_channels < 1) {
                     throw GraphError(
                         "transposed_conv out_channels must be >= 1");
                   }
                 },
                 [](const LinearLayer& l) {
                   if (l.out_features < 1) {
                     throw GraphError("linear out_features must be >= 1");
                   }
                 },
                 [](const auto&) {},
             },
             kind);
}

}  // namespace

TensorShape TensorShape::Make(std::int64_t c, std::int64_t h, std::int64_t w) {
  if (c < 1 || h < 1 || w < 1) {
    throw ShapeError(
        fmt::format("invalid tensor shape {}x{}x{}: all dims must be >= 1", c,
                    h, w));
  }
  return TensorShape{c, h, w};
}

std::string TensorShape::ToString() const {
  return fmt::format("{}x{}x{}", channels, height, width);
}

std::string_view KindName(const LayerKind& kind) {
  return std::visit(
      Overloaded{
          [](const InputLayer&) { return std::string_view("input"); },
          [](const ConvLayer&) { return std::string_view("conv"); },
          [](const PoolLayer&) { return std::string_view("pool"); },
          [](const TransposedConvLayer&) {
            return std::string_view("transposed_conv");
          },
          [](const ConcatLayer&) { return std::string_view("concat"); },
          [](const AddLayer&) { return std::string_view("add"); },
          [](const GlobalPoolLayer&) {
            return std::string_view("global_pool");
          },
          [](const LinearLayer&) { return std::string_view("linear"); },
      },
      kind);
}

ConvLayer Conv(std::int64_t out_channels, int kernel, int stride) {
  ConvLayer c;
  c.kernel_h = kernel;
  c.kernel_w = kernel;
  c.stride = stride;
  c.out_channels = out_channels;
  return c;
}

ConvLayer DepthwiseConv(std::int64_t channels, int kernel, int stride) {
  ConvLayer c = Conv(channels, kernel, stride);
  c.groups = static_cast<int>(channels);
  return c;
}

ArchGraph::ArchGraph(std::string name, std::optional<TensorShape> input)
    : name_(std::move(name)), input_(input) {
  if (input_) {
    input_ = TensorShape::Make(input_->channels, input_->height,
                               input_->width);
  }
}

NodeId ArchGraph::AddNode(LayerKind kind, std::vector<NodeId> inputs,
                          std::string label) {
  const NodeId id = static_cast<NodeId>(nodes_.size());
  for (NodeId in : inputs) {
    if (in < 0 || in >= id) {
      throw GraphError(fmt::format("node {}: unknown input id {}", id, in));
    }
  }
  CheckKindParams(kind);
  if (std::holds_alternative<InputLayer>(kind)) {
    if (!inputs.empty()) {
      throw GraphError("Input node cannot have inputs");
    }
    for (const Node& n : nodes_) {
      if (std::holds_alternative<InputLayer>(n.kind)) {
        throw GraphError("graph already has an Input node");
      }
    }
  } else if (std::holds_alternative<ConcatLayer>(kind)) {
    if (inputs.size() < 2) {
      throw GraphError("Concat requires >= 2 inputs");
    }
  } else if (std::holds_alternative<AddLayer>(kind)) {
    if (inputs.size() < 2) {
      throw GraphError("Add requires >= 2 inputs");
    }
  } else if (inputs.size() != 1) {
    throw GraphError(fmt::format("{} node requires exactly 1 input, got {}",
                                 KindName(kind), inputs.size()));
  }

  Node node{id, std::move(kind), std::move(inputs), std::move(label)};
  if (has_shapes()) {
    TensorShape s = InferNode(node);
    nodes_.push_back(std::move(node));
    shapes_.push_back(s);
  } else {
    nodes_.push_back(std::move(node));
  }
  return id;
}

const Node& ArchGraph::node(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw GraphError(fmt::format("unknown node id {}", id));
  }
  return nodes_[static_cast<std::size_t>(id)];
}

bool ArchGraph::has_shapes() const {
  return input_.has_value() && shapes_.size() == nodes_.size();
}

const TensorShape& ArchGraph::shape(NodeId id) const {
  node(id);
  if (!has_shapes()) {
    throw ShapeError(fmt::format("node {}: shapes not inferred", id));
  }
  return shapes_[static_cast<std::size_t>(id)];
}

const TensorShape& ArchGraph::input_of(NodeId id) const {
  const Node& n = node(id);
  if (n.inputs.empty()) return shape(id);
  return shape(n.inputs.front());
}

void ArchGraph::InferShapes(const TensorShape& input) {
  input_ = TensorShape::Make(input.channels, input.height, input.width);
  shapes_.clear();
  shapes_.reserve(nodes_.size());
  for (const Node& n : nodes_) {
    shapes_.push_back(InferNode(n));
  }
}

TensorShape ArchGraph::InferNode(const Node& node) const {
  auto in = [&](std::size_t i) -> const TensorShape& {
    return shapes_[static_cast<std::size_t>(node.inputs[i])];
  };
  return std::visit(
      Overloaded{
          [&](const InputLayer&) { return *input_; },
          [&](const ConvLayer& c) {
            const TensorShape& x = in(0);
            if (x.channels % c.groups != 0 || c.out_channels % c.groups != 0) {
              throw ShapeError(fmt::format(
                  "node {}: groups {} must divide input channels {} and "
                  "output channels {}",
                  node.id, c.groups, x.channels, c.out_channels));
            }
            const std::int64_t h =
                ConvOutputDim(x.height, c.kernel_h, c.stride, c.dilation);
            const std::int64_t w =
                ConvOutputDim(x.width, c.kernel_w, c.stride, c.dilation);
            if (h < 1 || w < 1) {
              throw ShapeError(fmt::format(
                  "node {}: conv output collapses to {}x{}", node.id, h, w));
            }
            return TensorShape{c.out_channels, h, w};
          },
          [&](const PoolLayer& p) {
            const TensorShape& x = in(0);
            const std::int64_t h = x.height / p.stride;
            const std::int64_t w = x.width / p.stride;
            if (h < 1 || w < 1) {
              throw ShapeError(fmt::format(
                  "node {}: pooling {}x{} by stride {} leaves nothing",
                  node.id, x.height, x.width, p.stride));
            }
            return TensorShape{x.channels, h, w};
          },
          [&](const TransposedConvLayer& t) {
            const TensorShape& x = in(0);
            return TensorShape{t.out_channels, x.height * t.stride,
                               x.width * t.stride};
          },
          [&](const ConcatLayer&) {
            TensorShape out = in(0);
            out.channels = 0;
            for (std::size_t i = 0; i < node.inputs.size(); ++i) {
              const TensorShape& x = in(i);
              if (x.height != out.height || x.width != out.width) {
                throw ShapeError(fmt::format(
                    "node {}: Concat spatial mismatch {} vs {}x{}", node.id,
                    x.ToString(), out.height, out.width));
              }
              out.channels += x.channels;
            }
            return out;
          },
          [&](const AddLayer&) {
            const TensorShape& first = in(0);
            for (std::size_t i = 1; i < node.inputs.size(); ++i) {
              if (in(i) != first) {
                throw ShapeError(fmt::format(
                    "node {}: Add shape mismatch {} vs {}", node.id,
                    in(i).ToString(), first.ToString()));
              }
            }
            return first;
          },
          [&](const GlobalPoolLayer&) {
            return TensorShape{in(0).channels, 1, 1};
          },
          [&](const LinearLayer& l) { return TensorShape{l.out_features, 1, 1}; },
      },
      node.kind);
}

void ArchGraph::Validate() const {
  int input_count = 0;
  for (const Node& n : nodes_) {
    if (std::holds_alternative<InputLayer>(n.kind)) {
      ++input_count;
      continue;
    }
    if (n.inputs.empty()) {
      throw GraphError(fmt::format("node {} has no inputs", n.id));
    }
    for (NodeId in : n.inputs) {
      if (in < 0 || in >= n.id) {
        throw GraphError(
            fmt::format("node {}: input {} does not precede it", n.id, in));
      }
    }
    const bool multi_input = std::holds_alternative<ConcatLayer>(n.kind) ||
                             std::holds_alternative<AddLayer>(n.kind);
    if (multi_input && n.inputs.size() < 2) {
      throw GraphError(fmt::format("node {}: {} requires >= 2 inputs", n.id,
                                   KindName(n.kind)));
    }
  }
  if (input_count != 1) {
    throw GraphError(
        fmt::format("graph must have exactly one Input node, found {}",
                    input_count));
  }
}

std::vector<NodeId> TopoSchedule(const ArchGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<int> pending(n, 0);
  const auto consumers = Consumers(graph);
  for (const Node& node : graph.nodes()) {
    pending[static_cast<std::size_t>(node.id)] =
        static_cast<int>(node.inputs.size());
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) ready.push(static_cast<NodeId>(i));
  }
  std::vector<NodeId> order;
  order.reserve(n);
  while (!ready.empty()) {
    const NodeId id = ready.top();
    ready.pop();
    order.push_back(id);
    for (NodeId c : consumers[static_cast<std::size_t>(id)]) {
      // A node listing the same input twice appears twice in consumers.
      if (--pending[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
  }
  if (order.size() != n) {
    throw GraphError("cycle detected while scheduling graph");
  }
  return order;
}

std::vector<std::vector<NodeId>> Consumers(const ArchGraph& graph) {
  std::vector<std::vector<NodeId>> out(graph.size());
  for (const Node& node : graph.nodes()) {
    for (NodeId in : node.inputs) {
      out[static_cast<std::size_t>(in)].push_back(node.id);
    }
  }
  return out;
}

bool IsConvLike(const LayerKind& kind) {
  return std::holds_alternative<ConvLayer>(kind) ||
         std::holds_alternative<TransposedConvLayer>(kind);
}

bool IsPointwise(const ArchGraph& graph, NodeId id) {
  const auto* c = std::get_if<ConvLayer>(&graph.node(id).kind);
  return c != nullptr && c->kernel_h == 1 && c->kernel_w == 1 && c->groups == 1;
}

bool IsDepthwise(const ArchGraph& graph, NodeId id) {
  const auto* c = std::get_if<ConvLayer>(&graph.node(id).kind);
  if (c == nullptr || c->groups == 1) return false;
  const std::int64_t in_channels = graph.input_of(id).channels;
  return c->groups == in_channels && c->out_channels == in_channels;
}

}  // namespace cioprof
