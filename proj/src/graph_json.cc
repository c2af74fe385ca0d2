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

#include "cioprof/graph_json.h"

#include <fmt/format.h>

#include <fstream>
#include <set>

namespace cioprof {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

ordered_json ParamsToJson(const LayerKind& kind) {
  return std::visit(
      Overloaded{
          [](const InputLayer&) { return ordered_json::object(); },
          [](const ConvLayer& c) {
            return ordered_json{{"kernel_h", c.kernel_h},
                                {"kernel_w", c.kernel_w},
                                {"stride", c.stride},
                                {"dilation", c.dilation},
                                {"groups", c.groups},
                                {"out_channels", c.out_channels},
                                {"bias", c.has_bias}};
          },
          [](const PoolLayer& p) {
            return ordered_json{
                {"mode", p.mode == PoolMode::kAvg ? "avg" : "max"},
                {"kernel", p.kernel},
                {"stride", p.stride}};
          },
          [](const TransposedConvLayer& t) {
            return ordered_json{{"kernel", t.kernel},
                                {"stride", t.stride},
                                {"out_channels", t.out_channels}};
          },
          [](const ConcatLayer&) { return ordered_json::object(); },
          [](const AddLayer&) { return ordered_json::object(); },
          [](const GlobalPoolLayer&) { return ordered_json::object(); },
          [](const LinearLayer& l) {
            return ordered_json{{"out_features", l.out_features},
                                {"bias", l.has_bias}};
          },
      },
      kind);
}

// Reads params[key] with a default, rejecting keys outside `allowed`.
class ParamReader {
 public:
  ParamReader(const json& params, NodeId id, std::set<std::string> allowed)
      : params_(params), id_(id) {
    if (!params_.is_object()) {
      throw GraphError(fmt::format("node {}: params must be an object", id));
    }
    for (const auto& [key, _] : params_.items()) {
      if (!allowed.contains(key)) {
        throw GraphError(fmt::format("node {}: unknown param '{}'", id, key));
      }
    }
  }

  template <class T>
  T Get(const std::string& key, T fallback) const {
    if (!params_.contains(key)) return fallback;
    try {
      return params_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw GraphError(
          fmt::format("node {}: bad value for '{}': {}", id_, key, e.what()));
    }
  }

  template <class T>
  T Require(const std::string& key) const {
    if (!params_.contains(key)) {
      throw GraphError(fmt::format("node {}: missing param '{}'", id_, key));
    }
    return Get<T>(key, T{});
  }

 private:
  const json& params_;
  NodeId id_;
};

LayerKind KindFromJson(const std::string& kind, const json& params, NodeId id) {
  if (kind == "input") {
    ParamReader r(params, id, {});
    return InputLayer{};
  }
  if (kind == "conv") {
    ParamReader r(params, id,
                  {"kernel", "kernel_h", "kernel_w", "stride", "dilation",
                   "groups", "out_channels", "bias"});
    ConvLayer c;
    const int k = r.Get<int>("kernel", 3);
    c.kernel_h = r.Get<int>("kernel_h", k);
    c.kernel_w = r.Get<int>("kernel_w", k);
    c.stride = r.Get<int>("stride", 1);
    c.dilation = r.Get<int>("dilation", 1);
    c.groups = r.Get<int>("groups", 1);
    c.out_channels = r.Require<std::int64_t>("out_channels");
    c.has_bias = r.Get<bool>("bias", false);
    return c;
  }
  if (kind == "pool") {
    ParamReader r(params, id, {"mode", "kernel", "stride"});
    PoolLayer p;
    const std::string mode = r.Get<std::string>("mode", "max");
    if (mode == "avg") {
      p.mode = PoolMode::kAvg;
    } else if (mode == "max") {
      p.mode = PoolMode::kMax;
    } else {
      throw GraphError(fmt::format("node {}: unknown pool mode '{}'", id, mode));
    }
    p.kernel = r.Get<int>("kernel", 2);
    p.stride = r.Get<int>("stride", p.kernel);
    return p;
  }
  if (kind == "transposed_conv") {
    ParamReader r(params, id, {"kernel", "stride", "out_channels"});
    TransposedConvLayer t;
    t.kernel = r.Get<int>("kernel", 3);
    t.stride = r.Get<int>("stride", 2);
    t.out_channels = r.Require<std::int64_t>("out_channels");
    return t;
  }
  if (kind == "concat") {
    ParamReader r(params, id, {});
    return ConcatLayer{};
  }
  if (kind == "add") {
    ParamReader r(params, id, {});
    return AddLayer{};
  }
  if (kind == "global_pool") {
    ParamReader r(params, id, {});
    return GlobalPoolLayer{};
  }
  if (kind == "linear") {
    ParamReader r(params, id, {"out_features", "bias"});
    LinearLayer l;
    l.out_features = r.Require<std::int64_t>("out_features");
    l.has_bias = r.Get<bool>("bias", true);
    return l;
  }
  throw GraphError(fmt::format("node {}: unknown kind '{}'", id, kind));
}

}  // namespace

ordered_json GraphToJson(const ArchGraph& graph) {
  ordered_json doc;
  doc["name"] = graph.name();
  if (graph.input_shape()) {
    const TensorShape& s = *graph.input_shape();
    doc["input"] = {s.channels, s.height, s.width};
  }
  ordered_json nodes = ordered_json::array();
  for (const Node& n : graph.nodes()) {
    ordered_json j;
    j["id"] = n.id;
    j["kind"] = KindName(n.kind);
    j["params"] = ParamsToJson(n.kind);
    j["inputs"] = n.inputs;
    if (!n.label.empty()) j["label"] = n.label;
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc;
}

ArchGraph GraphFromJson(const json& doc) {
  try {
    if (!doc.is_object()) throw GraphError("graph JSON must be an object");
    std::optional<TensorShape> input;
    if (doc.contains("input")) {
      const auto dims = doc.at("input").get<std::vector<std::int64_t>>();
      if (dims.size() != 3) {
        throw GraphError("\"input\" must be [channels, height, width]");
      }
      input = TensorShape::Make(dims[0], dims[1], dims[2]);
    }
    ArchGraph graph(doc.value("name", std::string{}), input);
    const json& nodes = doc.at("nodes");
    if (!nodes.is_array()) throw GraphError("\"nodes\" must be an array");
    for (const json& n : nodes) {
      const NodeId expected = static_cast<NodeId>(graph.size());
      const NodeId id = n.at("id").get<NodeId>();
      if (id != expected) {
        throw GraphError(fmt::format(
            "node ids must be consecutive from 0: expected {}, got {}",
            expected, id));
      }
      LayerKind kind =
          KindFromJson(n.at("kind").get<std::string>(),
                       n.contains("params") ? n.at("params") : json::object(),
                       id);
      auto inputs = n.value("inputs", std::vector<NodeId>{});
      graph.AddNode(std::move(kind), std::move(inputs),
                    n.value("label", std::string{}));
    }
    graph.Validate();
    return graph;
  } catch (const json::exception& e) {
    throw GraphError(fmt::format("malformed graph JSON: {}", e.what()));
  }
}

ArchGraph LoadGraph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw GraphError(fmt::format("cannot open '{}'", path.string()));
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw GraphError(
        fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return GraphFromJson(doc);
}

void SaveGraph(const ArchGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw GraphError(fmt::format("cannot write '{}'", path.string()));
  }
  out << GraphToJson(graph).dump(1) << '\n';
}

}  // namespace cioprof
