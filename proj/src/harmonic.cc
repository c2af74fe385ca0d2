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

#include "cioprof/harmonic.h"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "segmentation_layout.h"

namespace cioprof {
namespace {

constexpr double kRoundingSlack = 1e-9;

std::int64_t Channels(const ArchGraph& g, NodeId id) {
  return g.shape(id).channels;
}

// HarDNet-68 / 68DS / 39DS: conv stem, one HDB per row, explicit t widths.
struct CompactStage {
  int depth;
  std::int64_t growth_rate;
  std::int64_t transition_channels;
  bool downsample;
};

struct CompactConfig {
  std::int64_t stem_channels;
  std::int64_t second_channels;
  int second_kernel;
  double multiplier;
  bool depthwise;
  std::vector<CompactStage> stages;
};

// HarDNet-96/117/138 s and L: 7x7 stem, bottlenecks, global dense
// connections, 0.85 transitions, 16-layer partitions.
struct WideConfig {
  std::int64_t growth_rate;
  double multiplier;
  // Number of HDBs at stride 4, 8, 16, 32. Stride 4 blocks are 8 deep.
  std::array<int, 4> blocks_per_stride;
};

struct SegmentationConfig {
  std::int64_t first_conv;
  std::array<int, 6> depths;
  std::array<std::int64_t, 6> growth_rates;
  double multiplier;
};

CompactConfig CompactFor(ModelVariant v) {
  switch (v) {
    case ModelVariant::kHarDNet68:
    case ModelVariant::kHarDNet68DS: {
      const bool ds = v == ModelVariant::kHarDNet68DS;
      return {32,
              64,
              ds ? 1 : 3,
              1.7,
              ds,
              {{8, 14, 128, true},
               {16, 16, 256, false},
               {16, 20, 320, true},
               {16, 40, 640, true},
               {4, 160, 1024, false}}};
    }
    case ModelVariant::kHarDNet39DS:
      return {24,
              48,
              1,
              1.6,
              true,
              {{4, 16, 96, true},
               {16, 20, 320, true},
               {8, 64, 640, true},
               {4, 160, 1024, false}}};
    default:
      throw SpecError("not a compact HarDNet variant");
  }
}

WideConfig WideFor(ModelVariant v) {
  switch (v) {
    case ModelVariant::kHarDNet96s: return {20, 1.6, {1, 1, 2, 1}};
    case ModelVariant::kHarDNet96L: return {26, 1.6, {1, 1, 2, 1}};
    case ModelVariant::kHarDNet117s: return {26, 1.6, {1, 1, 3, 1}};
    case ModelVariant::kHarDNet117L: return {30, 1.6, {1, 1, 3, 1}};
    case ModelVariant::kHarDNet138s: return {30, 1.6, {1, 1, 3, 2}};
    case ModelVariant::kHarDNet138L: return {32, 1.65, {1, 1, 3, 2}};
    default: throw SpecError("not a wide HarDNet variant");
  }
}

SegmentationConfig SegmentationFor(ModelVariant v) {
  switch (v) {
    case ModelVariant::kFCHarDNet68:
      return {8, {4, 4, 4, 4, 8, 8}, {4, 6, 8, 8, 10, 10}, 1.7};
    case ModelVariant::kFCHarDNet76:
      return {24, {4, 4, 4, 8, 8, 8}, {8, 10, 12, 12, 12, 14}, 1.7};
    case ModelVariant::kFCHarDNet84:
      return {32, {4, 4, 8, 8, 8, 8}, {10, 12, 14, 16, 20, 22}, 1.7};
    case ModelVariant::kFCHarDNetRef100:
      return {48, {8, 8, 8, 8, 8, 8}, {10, 10, 10, 10, 10, 10}, 1.54};
    default:
      throw SpecError("not an FC-HarDNet variant");
  }
}

void AddClassifierHead(ArchGraph& g, NodeId x) {
  x = g.AddNode(GlobalPoolLayer{}, {x}, "head.pool");
  g.AddNode(LinearLayer{kImageNetClasses, true}, {x}, "head.fc");
}

ArchGraph BuildCompact(ModelVariant v, const TensorShape& input) {
  const CompactConfig cfg = CompactFor(v);
  ArchGraph g(std::string(VariantName(v)), input);
  NodeId x = g.AddNode(InputLayer{}, {}, "input");
  x = g.AddNode(Conv(cfg.stem_channels, 3, 2), {x}, "stem.conv1");
  x = g.AddNode(Conv(cfg.second_channels, cfg.second_kernel), {x},
                "stem.conv2");
  if (cfg.depthwise) {
    x = g.AddNode(DepthwiseConv(cfg.second_channels, 3, 2), {x}, "stem.down");
  } else {
    x = g.AddNode(PoolLayer{PoolMode::kMax, 3, 2}, {x}, "stem.down");
  }

  for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
    const CompactStage& st = cfg.stages[i];
    HdbSpec spec;
    spec.depth = st.depth;
    spec.growth_rate = st.growth_rate;
    spec.multiplier = cfg.multiplier;
    spec.depthwise = cfg.depthwise;
    x = BuildHdb(g, x, spec, fmt::format("hdb{}", i)).output;

    TransitionSpec trans;
    trans.out_channels = st.transition_channels;
    if (st.downsample) {
      trans.downsample =
          cfg.depthwise ? Downsample::kDepthwiseConv : Downsample::kMaxPool;
    }
    x = BuildTransition(g, x, trans, fmt::format("transition{}", i));
  }
  AddClassifierHead(g, x);
  return g;
}

ArchGraph BuildWide(ModelVariant v, const TensorShape& input) {
  const WideConfig cfg = WideFor(v);
  ArchGraph g(std::string(VariantName(v)), input);
  NodeId x = g.AddNode(InputLayer{}, {}, "input");
  x = g.AddNode(Conv(64, 7, 2), {x}, "stem.conv");
  x = g.AddNode(PoolLayer{PoolMode::kMax, 3, 2}, {x}, "stem.pool");

  int block_index = 0;
  for (std::size_t s = 0; s < cfg.blocks_per_stride.size(); ++s) {
    const int count = cfg.blocks_per_stride[s];
    for (int j = 0; j < count; ++j, ++block_index) {
      HdbSpec spec;
      spec.depth = s == 0 ? 8 : 16;
      spec.growth_rate = cfg.growth_rate;
      spec.multiplier = cfg.multiplier;
      spec.use_bottleneck = true;
      spec.keep_base = true;
      x = BuildHdb(g, x, spec, fmt::format("hdb{}", block_index)).output;

      const bool last_stride = s + 1 == cfg.blocks_per_stride.size();
      const bool last_in_stride = j + 1 == count;
      if (last_stride && last_in_stride) break;

      TransitionSpec trans;
      trans.reduction = 0.85;
      if (last_in_stride) {
        trans.inverted = true;
        trans.downsample = Downsample::kAvgPool;
      }
      x = BuildTransition(g, x, trans,
                          fmt::format("transition{}", block_index));
    }
  }
  AddClassifierHead(g, x);
  return g;
}

ArchGraph BuildSegmentation(ModelVariant v, const TensorShape& input) {
  const SegmentationConfig cfg = SegmentationFor(v);
  const int num_down = static_cast<int>(cfg.depths.size()) - 1;
  auto block = [&cfg](ArchGraph& g, NodeId in,
                      const internal::BlockSite& site) {
    HdbSpec spec;
    spec.depth = cfg.depths[static_cast<std::size_t>(site.stage)];
    spec.growth_rate = cfg.growth_rates[static_cast<std::size_t>(site.stage)];
    spec.multiplier = cfg.multiplier;
    spec.keep_base = site.role == internal::BlockRole::kEncoder;
    const char* role = site.role == internal::BlockRole::kEncoder      ? "enc"
                       : site.role == internal::BlockRole::kBottleneck ? "mid"
                                                                       : "dec";
    return BuildHdb(g, in, spec, fmt::format("{}{}", role, site.stage)).output;
  };
  return internal::BuildEncoderDecoder(std::string(VariantName(v)), input,
                                       cfg.first_conv, num_down, block);
}

}  // namespace

int TwoAdicValuation(std::int64_t value) {
  if (value < 1) {
    throw SpecError(fmt::format("2-adic valuation needs value >= 1, got {}",
                                value));
  }
  int n = 0;
  while (value % 2 == 0) {
    value /= 2;
    ++n;
  }
  return n;
}

std::int64_t RoundEven(double x) {
  return 2 * static_cast<std::int64_t>(std::floor(x / 2.0 + kRoundingSlack));
}

std::vector<int> HdbLinks(int layer) {
  if (layer < 1) {
    throw SpecError(fmt::format(
        "layer index must be >= 1 (0 is the block input), got {}", layer));
  }
  std::vector<int> links;
  for (int step = 1; step <= layer; step *= 2) {
    if (layer % step != 0) break;
    links.push_back(layer - step);
  }
  return links;
}

std::int64_t ChannelWidth(int layer, std::int64_t growth_rate,
                          double multiplier) {
  if (layer < 1) {
    throw SpecError(fmt::format("layer index must be >= 1, got {}", layer));
  }
  const int n = TwoAdicValuation(layer);
  if (n == 0) return growth_rate;
  return RoundEven(static_cast<double>(growth_rate) * std::pow(multiplier, n));
}

std::int64_t BottleneckChannels(std::int64_t c_in, std::int64_t c_out) {
  if (c_in < 1 || c_out < 1) {
    throw SpecError("bottleneck channels need c_in, c_out >= 1");
  }
  const double ratio = static_cast<double>(c_in) / static_cast<double>(c_out);
  const std::int64_t width =
      RoundEven(std::sqrt(ratio) * static_cast<double>(c_out));
  return std::min(c_in, std::max<std::int64_t>(width, 2));
}

void TransitionSpec::Validate() const {
  if (reduction.has_value() == out_channels.has_value()) {
    throw SpecError("transition needs exactly one of reduction or t");
  }
  if (reduction && !(*reduction > 0.0 && *reduction <= 1.0)) {
    throw SpecError(
        fmt::format("transition reduction must be in (0, 1], got {}",
                    *reduction));
  }
  if (out_channels && *out_channels < 1) {
    throw SpecError("transition t must be >= 1");
  }
  if (inverted && downsample != Downsample::kAvgPool &&
      downsample != Downsample::kMaxPool) {
    throw SpecError("inverted transition requires a pooling downsample");
  }
}

void HdbSpec::Validate() const {
  if (depth < 1) throw SpecError("HDB depth must be >= 1");
  if (growth_rate < 1) throw SpecError("HDB growth rate must be >= 1");
  if (!(multiplier > 1.0 && multiplier <= 3.0)) {
    throw SpecError(
        fmt::format("HDB multiplier must be in (1, 3], got {}", multiplier));
  }
  if (odd_output && depth % 2 != 0) {
    throw SpecError(fmt::format(
        "odd-layer output rule needs an even depth, got {}", depth));
  }
  if (transition) transition->Validate();
}

HdbResult BuildHdb(ArchGraph& g, NodeId input, const HdbSpec& spec,
                   std::string_view label) {
  spec.Validate();
  if (!g.has_shapes()) {
    throw SpecError("BuildHdb needs a graph with a known input shape");
  }
  const NodeId first_new = static_cast<NodeId>(g.size());

  HdbResult result;
  result.layers.push_back(input);
  for (int l = 1; l <= spec.depth; ++l) {
    std::vector<NodeId> sources;
    for (int j : HdbLinks(l)) {
      sources.push_back(result.layers[static_cast<std::size_t>(j)]);
    }
    NodeId x = sources.front();
    if (sources.size() > 1) {
      x = g.AddNode(ConcatLayer{}, sources, fmt::format("{}.l{}.cat", label, l));
    }
    const std::int64_t width =
        ChannelWidth(l, spec.growth_rate, spec.multiplier);
    if (spec.use_bottleneck && l % 4 == 0) {
      x = g.AddNode(Conv(BottleneckChannels(Channels(g, x), width), 1), {x},
                    fmt::format("{}.l{}.bottleneck", label, l));
    }
    if (spec.depthwise) {
      // Pointwise first: the wide concatenated input shrinks before the
      // per-channel 3x3 sees it.
      x = g.AddNode(Conv(width, 1), {x}, fmt::format("{}.l{}.pw", label, l));
      x = g.AddNode(DepthwiseConv(width), {x},
                    fmt::format("{}.l{}.dw", label, l));
    } else {
      x = g.AddNode(Conv(width, 3), {x}, fmt::format("{}.l{}.conv", label, l));
    }
    result.layers.push_back(x);
  }

  if (spec.odd_output) {
    std::vector<NodeId> parts{result.layers.back()};
    for (int j = spec.depth - 1; j >= 1; j -= 2) {
      parts.push_back(result.layers[static_cast<std::size_t>(j)]);
    }
    if (spec.keep_base) parts.push_back(input);
    result.output =
        parts.size() == 1
            ? parts.front()
            : g.AddNode(ConcatLayer{}, parts, fmt::format("{}.out", label));
  } else {
    result.output = result.layers.back();
  }

  for (NodeId id = first_new; id < static_cast<NodeId>(g.size()); ++id) {
    result.internal.push_back(id);
  }
  return result;
}

NodeId BuildTransition(ArchGraph& g, NodeId input, const TransitionSpec& spec,
                       std::string_view label) {
  spec.Validate();
  const std::int64_t c_in = Channels(g, input);
  const std::int64_t out =
      spec.out_channels
          ? *spec.out_channels
          : RoundEven(*spec.reduction * static_cast<double>(c_in));
  if (out < 1) {
    throw SpecError(fmt::format(
        "transition of {} channels by {} leaves no channels", c_in,
        spec.reduction.value_or(0.0)));
  }

  if (spec.inverted) {
    const NodeId avg = g.AddNode(PoolLayer{PoolMode::kAvg, 2, 2}, {input},
                                 fmt::format("{}.avgpool", label));
    const NodeId max = g.AddNode(PoolLayer{PoolMode::kMax, 2, 2}, {input},
                                 fmt::format("{}.maxpool", label));
    const NodeId cat = g.AddNode(ConcatLayer{}, {avg, max},
                                 fmt::format("{}.cat", label));
    return g.AddNode(Conv(out, 1), {cat}, fmt::format("{}.conv", label));
  }

  NodeId x = g.AddNode(Conv(out, 1), {input}, fmt::format("{}.conv", label));
  switch (spec.downsample) {
    case Downsample::kNone:
      break;
    case Downsample::kAvgPool:
      x = g.AddNode(PoolLayer{PoolMode::kAvg, 2, 2}, {x},
                    fmt::format("{}.pool", label));
      break;
    case Downsample::kMaxPool:
      x = g.AddNode(PoolLayer{PoolMode::kMax, 2, 2}, {x},
                    fmt::format("{}.pool", label));
      break;
    case Downsample::kDepthwiseConv:
      x = g.AddNode(DepthwiseConv(out, 3, 2), {x},
                    fmt::format("{}.down", label));
      break;
  }
  return x;
}

const std::vector<ModelVariant>& AllVariants() {
  static const std::vector<ModelVariant> kAll = {
      ModelVariant::kHarDNet39DS,  ModelVariant::kHarDNet68,
      ModelVariant::kHarDNet68DS,  ModelVariant::kHarDNet96s,
      ModelVariant::kHarDNet96L,   ModelVariant::kHarDNet117s,
      ModelVariant::kHarDNet117L,  ModelVariant::kHarDNet138s,
      ModelVariant::kHarDNet138L,  ModelVariant::kFCHarDNet68,
      ModelVariant::kFCHarDNet76,  ModelVariant::kFCHarDNet84,
      ModelVariant::kFCHarDNetRef100,
  };
  return kAll;
}

std::string_view VariantName(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::kHarDNet39DS: return "hardnet39ds";
    case ModelVariant::kHarDNet68: return "hardnet68";
    case ModelVariant::kHarDNet68DS: return "hardnet68ds";
    case ModelVariant::kHarDNet96s: return "hardnet96s";
    case ModelVariant::kHarDNet96L: return "hardnet96l";
    case ModelVariant::kHarDNet117s: return "hardnet117s";
    case ModelVariant::kHarDNet117L: return "hardnet117l";
    case ModelVariant::kHarDNet138s: return "hardnet138s";
    case ModelVariant::kHarDNet138L: return "hardnet138l";
    case ModelVariant::kFCHarDNet68: return "fc-hardnet68";
    case ModelVariant::kFCHarDNet76: return "fc-hardnet76";
    case ModelVariant::kFCHarDNet84: return "fc-hardnet84";
    case ModelVariant::kFCHarDNetRef100: return "fc-hardnet-ref100";
  }
  return "unknown";
}

std::optional<ModelVariant> ParseVariant(std::string_view name) {
  for (ModelVariant v : AllVariants()) {
    if (VariantName(v) == name) return v;
  }
  return std::nullopt;
}

bool IsSegmentation(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::kFCHarDNet68:
    case ModelVariant::kFCHarDNet76:
    case ModelVariant::kFCHarDNet84:
    case ModelVariant::kFCHarDNetRef100:
      return true;
    default:
      return false;
  }
}

TensorShape DefaultInput(ModelVariant variant) {
  return IsSegmentation(variant) ? TensorShape{3, 352, 480}
                                 : TensorShape{3, 224, 224};
}

ArchGraph BuildModel(ModelVariant variant, std::optional<TensorShape> input) {
  const TensorShape shape = input.value_or(DefaultInput(variant));
  switch (variant) {
    case ModelVariant::kHarDNet39DS:
    case ModelVariant::kHarDNet68:
    case ModelVariant::kHarDNet68DS:
      return BuildCompact(variant, shape);
    case ModelVariant::kHarDNet96s:
    case ModelVariant::kHarDNet96L:
    case ModelVariant::kHarDNet117s:
    case ModelVariant::kHarDNet117L:
    case ModelVariant::kHarDNet138s:
    case ModelVariant::kHarDNet138L:
      return BuildWide(variant, shape);
    case ModelVariant::kFCHarDNet68:
    case ModelVariant::kFCHarDNet76:
    case ModelVariant::kFCHarDNet84:
    case ModelVariant::kFCHarDNetRef100:
      return BuildSegmentation(variant, shape);
  }
  throw SpecError("unknown model variant");
}

}  // namespace cioprof
