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

#ifndef CIOPROF_HARMONIC_H_
#define CIOPROF_HARMONIC_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cioprof/graph.h"

namespace cioprof {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// 2-adic valuation: largest n with 2^n | value. value must be >= 1.
int TwoAdicValuation(std::int64_t value);

// 2 * floor(x / 2), tolerant of representation error just below an even
// integer (26 * 1.6 * 1.6 must not become 66.5599...).
std::int64_t RoundEven(double x);

// Harmonic connection rule: layer k reads layer k - 2^n for every 2^n | k.
// Sorted descending. Throws SpecError for layer < 1.
std::vector<int> HdbLinks(int layer);

// k * m^v2(layer), even-floored. Odd layers get exactly k.
std::int64_t ChannelWidth(int layer, std::int64_t growth_rate,
                          double multiplier);

// sqrt(c_in / c_out) * c_out, even-floored and capped at c_in.
std::int64_t BottleneckChannels(std::int64_t c_in, std::int64_t c_out);

enum class Downsample { kNone, kAvgPool, kMaxPool, kDepthwiseConv };

struct TransitionSpec {
  // Exactly one of these is set.
  std::optional<double> reduction;
  std::optional<std::int64_t> out_channels;
  // {AvgPool, MaxPool} -> Concat -> Conv1x1. Requires a pooling downsample.
  bool inverted = false;
  Downsample downsample = Downsample::kNone;

  void Validate() const;
};

struct HdbSpec {
  int depth = 4;
  std::int64_t growth_rate = 16;
  double multiplier = 1.7;
  bool use_bottleneck = false;
  bool depthwise = false;
  // Append the block input to the block output (global dense connection).
  bool keep_base = false;
  // When false the block output is layer L alone; used to study liveness
  // without the odd-layer output concat.
  bool odd_output = true;
  std::optional<TransitionSpec> transition;

  void Validate() const;
};

struct HdbResult {
  NodeId output = 0;
  // layers[l] is the node producing layer l; layers[0] is the block input.
  std::vector<NodeId> layers;
  // Every node emitted by the block (concats, bottlenecks, convs), in order.
  std::vector<NodeId> internal;
};

// Emits one harmonic dense block after `input`. The transition in
// spec.transition, if any, is not emitted here; see BuildTransition.
HdbResult BuildHdb(ArchGraph& graph, NodeId input, const HdbSpec& spec,
                   std::string_view label = "hdb");

// Conv1x1 (+ optional downsample), or the inverted pool-first variant.
NodeId BuildTransition(ArchGraph& graph, NodeId input,
                       const TransitionSpec& spec,
                       std::string_view label = "transition");

enum class ModelVariant {
  kHarDNet39DS,
  kHarDNet68,
  kHarDNet68DS,
  kHarDNet96s,
  kHarDNet96L,
  kHarDNet117s,
  kHarDNet117L,
  kHarDNet138s,
  kHarDNet138L,
  kFCHarDNet68,
  kFCHarDNet76,
  kFCHarDNet84,
  kFCHarDNetRef100,
};

const std::vector<ModelVariant>& AllVariants();
std::string_view VariantName(ModelVariant variant);
std::optional<ModelVariant> ParseVariant(std::string_view name);
TensorShape DefaultInput(ModelVariant variant);
bool IsSegmentation(ModelVariant variant);

ArchGraph BuildModel(ModelVariant variant,
                     std::optional<TensorShape> input = std::nullopt);

// Number of classes for the segmentation heads (CamVid).
inline constexpr std::int64_t kSegmentationClasses = 11;
inline constexpr std::int64_t kImageNetClasses = 1000;

}  // namespace cioprof

#endif  // CIOPROF_HARMONIC_H_
