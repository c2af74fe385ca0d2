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

#include "cioprof/liveness.h"

#include <fmt/format.h>

#include <algorithm>

#include "cioprof/metrics.h"

namespace cioprof {
namespace {

std::vector<int> Positions(const ArchGraph& graph,
                           const std::vector<NodeId>& schedule) {
  if (schedule.size() != graph.size()) {
    throw GraphError(fmt::format("schedule covers {} of {} nodes",
                                 schedule.size(), graph.size()));
  }
  std::vector<int> pos(graph.size(), -1);
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    const NodeId id = schedule[s];
    if (id < 0 || static_cast<std::size_t>(id) >= graph.size() ||
        pos[static_cast<std::size_t>(id)] != -1) {
      throw GraphError(fmt::format("schedule entry {} is invalid", id));
    }
    pos[static_cast<std::size_t>(id)] = static_cast<int>(s);
  }
  for (const Node& n : graph.nodes()) {
    for (NodeId in : n.inputs) {
      if (pos[static_cast<std::size_t>(in)] >=
          pos[static_cast<std::size_t>(n.id)]) {
        throw GraphError(fmt::format(
            "schedule runs node {} before its input {}", n.id, in));
      }
    }
  }
  return pos;
}

}  // namespace

std::vector<LifeInterval> TensorLifetimes(const ArchGraph& graph,
                                          const std::vector<NodeId>& schedule,
                                          bool concat_free) {
  if (!graph.has_shapes()) {
    throw ShapeError("liveness needs inferred shapes");
  }
  const std::vector<int> pos = Positions(graph, schedule);
  const int last = static_cast<int>(schedule.size()) - 1;
  const auto consumers = Consumers(graph);

  std::vector<LifeInterval> out(graph.size());
  for (const Node& n : graph.nodes()) {
    const auto i = static_cast<std::size_t>(n.id);
    LifeInterval& life = out[i];
    life.tensor = n.id;
    life.birth = pos[i];
    life.size_elements = graph.shape(n.id).element_count();
    if (consumers[i].empty()) {
      life.death = last;
    } else {
      life.death = life.birth;
      for (NodeId c : consumers[i]) {
        life.death = std::max(life.death, pos[static_cast<std::size_t>(c)]);
      }
    }
  }

  if (concat_free) {
    // Reverse schedule order so chained concats pass their death down.
    for (auto it = schedule.rbegin(); it != schedule.rend(); ++it) {
      const Node& n = graph.node(*it);
      if (!std::holds_alternative<ConcatLayer>(n.kind)) continue;
      const int death = out[static_cast<std::size_t>(n.id)].death;
      out[static_cast<std::size_t>(n.id)].size_elements = 0;
      for (NodeId in : n.inputs) {
        auto& d = out[static_cast<std::size_t>(in)].death;
        d = std::max(d, death);
      }
    }
  }
  return out;
}

MemoryProfile PeakMemory(const ArchGraph& graph,
                         const std::vector<NodeId>& schedule, int dtype_bytes,
                         const MemoryOptions& options) {
  ValidateDtypeBytes(dtype_bytes);
  const auto lives = TensorLifetimes(graph, schedule, options.concat_free);

  MemoryProfile profile;
  profile.steps.resize(schedule.size());
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    profile.steps[s].node = schedule[s];
  }
  for (const LifeInterval& life : lives) {
    for (int s = life.birth; s <= life.death; ++s) {
      MemoryStep& step = profile.steps[static_cast<std::size_t>(s)];
      step.live_bytes += life.size_elements * dtype_bytes;
      step.live.push_back(life.tensor);
    }
  }
  for (std::size_t s = 0; s < profile.steps.size(); ++s) {
    if (profile.steps[s].live_bytes > profile.peak_bytes) {
      profile.peak_bytes = profile.steps[s].live_bytes;
      profile.peak_step = static_cast<int>(s);
    }
  }
  if (options.include_weights) {
    for (const Node& n : graph.nodes()) {
      profile.weight_bytes += LayerParams(graph, n.id) * dtype_bytes;
    }
  }
  return profile;
}

std::vector<FlushEvent> VerifyFlush(const ArchGraph& graph,
                                    const std::vector<NodeId>& layers) {
  if (layers.size() < 2) {
    throw std::invalid_argument("VerifyFlush needs at least one layer");
  }
  const auto schedule = TopoSchedule(graph);
  const auto lives = TensorLifetimes(graph, schedule);
  const int depth = static_cast<int>(layers.size()) - 1;

  std::vector<FlushEvent> events;
  for (int p = 1; p <= depth; p *= 2) {
    const int step = lives[static_cast<std::size_t>(
                               layers[static_cast<std::size_t>(p)])]
                         .birth;
    FlushEvent ev{p, {}};
    for (int l = 1; l < p; ++l) {
      const LifeInterval& life =
          lives[static_cast<std::size_t>(layers[static_cast<std::size_t>(l)])];
      if (life.death > step) {
        throw FlushViolation(fmt::format(
            "layer {} still live after layer {} (dies at step {}, layer {} "
            "runs at step {})",
            l, p, life.death, p, step));
      }
      ev.flushed.push_back(l);
    }
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<FlushEvent> VerifyFlush(int depth, std::int64_t growth_rate,
                                    double multiplier) {
  ArchGraph g(fmt::format("bare_hdb_{}", depth), TensorShape::Make(16, 8, 8));
  const NodeId in = g.AddNode(InputLayer{}, {}, "input");
  HdbSpec spec;
  spec.depth = depth;
  spec.growth_rate = growth_rate;
  spec.multiplier = multiplier;
  spec.odd_output = false;
  const HdbResult block = BuildHdb(g, in, spec);
  return VerifyFlush(g, block.layers);
}

}  // namespace cioprof
