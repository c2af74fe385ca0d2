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

#include "cioprof/reference_models.h"

#include <fmt/format.h>

#include <algorithm>
#include <array>

#include "cioprof/harmonic.h"
#include "segmentation_layout.h"

namespace cioprof {
namespace {

void AddClassifierHead(ArchGraph& g, NodeId x) {
  x = g.AddNode(GlobalPoolLayer{}, {x}, "head.pool");
  g.AddNode(LinearLayer{kImageNetClasses, true}, {x}, "head.fc");
}

struct DenseBlockSpec {
  int depth = 4;
  std::int64_t growth_rate = 16;
  SparseRule rule = SparseRule::kDenseAll;
  // 4k-wide 1x1 conv in front of each 3x3 (DenseNet-BC).
  bool bottleneck = false;
  // Output includes the block input; otherwise only the new layers.
  bool keep_input = true;
};

NodeId BuildDenseBlock(ArchGraph& g, NodeId input, const DenseBlockSpec& spec,
                       std::string_view label) {
  std::vector<NodeId> layers{input};
  for (int l = 1; l <= spec.depth; ++l) {
    std::vector<NodeId> sources;
    for (int j : SparseLinks(spec.rule, l)) {
      sources.push_back(layers[static_cast<std::size_t>(j)]);
    }
    NodeId x = sources.front();
    if (sources.size() > 1) {
      x = g.AddNode(ConcatLayer{}, sources, fmt::format("{}.l{}.cat", label, l));
    }
    if (spec.bottleneck) {
      x = g.AddNode(Conv(4 * spec.growth_rate, 1), {x},
                    fmt::format("{}.l{}.bottleneck", label, l));
    }
    x = g.AddNode(Conv(spec.growth_rate, 3), {x},
                  fmt::format("{}.l{}.conv", label, l));
    layers.push_back(x);
  }

  std::vector<int> picked;
  if (spec.rule == SparseRule::kSparseFixedOutput) {
    picked = SparseLinks(SparseRule::kLog, spec.depth + 1);
  } else {
    for (int j = 0; j <= spec.depth; ++j) picked.push_back(j);
  }
  std::erase(picked, 0);
  if (spec.keep_input) picked.insert(picked.begin(), 0);

  std::vector<NodeId> parts;
  for (int j : picked) parts.push_back(layers[static_cast<std::size_t>(j)]);
  if (parts.size() == 1) return parts.front();
  return g.AddNode(ConcatLayer{}, parts, fmt::format("{}.out", label));
}

ArchGraph BuildDenseNet(ReferenceModel model, const TensorShape& input) {
  std::array<int, 4> blocks{};
  switch (model) {
    case ReferenceModel::kDenseNet121: blocks = {6, 12, 24, 16}; break;
    case ReferenceModel::kDenseNet201: blocks = {6, 12, 48, 32}; break;
    case ReferenceModel::kDenseNet264: blocks = {6, 12, 64, 48}; break;
    default: throw SpecError("not a DenseNet");
  }
  constexpr std::int64_t kGrowth = 32;

  ArchGraph g(std::string(ReferenceName(model)), input);
  NodeId x = g.AddNode(InputLayer{}, {}, "input");
  x = g.AddNode(Conv(2 * kGrowth, 7, 2), {x}, "stem.conv");
  x = g.AddNode(PoolLayer{PoolMode::kMax, 3, 2}, {x}, "stem.pool");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    DenseBlockSpec spec;
    spec.depth = blocks[b];
    spec.growth_rate = kGrowth;
    spec.bottleneck = true;
    x = BuildDenseBlock(g, x, spec, fmt::format("block{}", b));
    if (b + 1 == blocks.size()) break;
    TransitionSpec trans;
    trans.out_channels = g.shape(x).channels / 2;
    trans.downsample = Downsample::kAvgPool;
    x = BuildTransition(g, x, trans, fmt::format("transition{}", b));
  }
  AddClassifierHead(g, x);
  return g;
}

ArchGraph BuildFCDenseNet(ReferenceModel model, const TensorShape& input) {
  std::vector<int> depths;  // encoder blocks, then the bottleneck block
  std::int64_t growth = 16;
  SparseRule rule = SparseRule::kDenseAll;
  switch (model) {
    case ReferenceModel::kFCDenseNet56:
      depths = {4, 4, 4, 4, 4, 4};
      growth = 12;
      break;
    case ReferenceModel::kFCDenseNet67:
      depths = {5, 5, 5, 5, 5, 5};
      break;
    case ReferenceModel::kFCDenseNet103:
      depths = {4, 5, 7, 10, 12, 15};
      break;
    case ReferenceModel::kFCDenseNetRef100:
      depths = {8, 8, 8, 8, 8, 8};
      growth = 10;
      break;
    case ReferenceModel::kFCSparseNetRef100:
      depths = {8, 8, 8, 8, 8, 8};
      growth = 26;
      rule = SparseRule::kSparseFixedOutput;
      break;
    default:
      throw SpecError("not an FC-DenseNet");
  }
  auto block = [&](ArchGraph& g, NodeId in, const internal::BlockSite& site) {
    DenseBlockSpec spec;
    spec.depth = depths[static_cast<std::size_t>(site.stage)];
    spec.growth_rate = growth;
    spec.rule = rule;
    spec.keep_input =
        site.role == internal::BlockRole::kEncoder || site.last;
    const char* role = site.role == internal::BlockRole::kEncoder      ? "enc"
                       : site.role == internal::BlockRole::kBottleneck ? "mid"
                                                                       : "dec";
    return BuildDenseBlock(g, in, spec, fmt::format("{}{}", role, site.stage));
  };
  return internal::BuildEncoderDecoder(std::string(ReferenceName(model)),
                                       input, 48,
                                       static_cast<int>(depths.size()) - 1,
                                       block);
}

ArchGraph BuildResNet(ReferenceModel model, const TensorShape& input) {
  std::array<int, 4> blocks{};
  bool bottleneck = true;
  switch (model) {
    case ReferenceModel::kResNet18:
      blocks = {2, 2, 2, 2};
      bottleneck = false;
      break;
    case ReferenceModel::kResNet50: blocks = {3, 4, 6, 3}; break;
    case ReferenceModel::kResNet101: blocks = {3, 4, 23, 3}; break;
    case ReferenceModel::kResNet152: blocks = {3, 8, 36, 3}; break;
    default: throw SpecError("not a ResNet");
  }
  const std::int64_t expansion = bottleneck ? 4 : 1;

  ArchGraph g(std::string(ReferenceName(model)), input);
  NodeId x = g.AddNode(InputLayer{}, {}, "input");
  x = g.AddNode(Conv(64, 7, 2), {x}, "stem.conv");
  x = g.AddNode(PoolLayer{PoolMode::kMax, 3, 2}, {x}, "stem.pool");
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    const std::int64_t width = std::int64_t{64} << s;
    const std::int64_t out = width * expansion;
    for (int b = 0; b < blocks[s]; ++b) {
      const int stride = (b == 0 && s > 0) ? 2 : 1;
      const std::string label = fmt::format("layer{}.{}", s + 1, b);
      NodeId y = x;
      if (bottleneck) {
        y = g.AddNode(Conv(width, 1), {y}, label + ".conv1");
        y = g.AddNode(Conv(width, 3, stride), {y}, label + ".conv2");
        y = g.AddNode(Conv(out, 1), {y}, label + ".conv3");
      } else {
        y = g.AddNode(Conv(width, 3, stride), {y}, label + ".conv1");
        y = g.AddNode(Conv(width, 3), {y}, label + ".conv2");
      }
      NodeId shortcut = x;
      if (stride != 1 || g.shape(x).channels != out) {
        shortcut = g.AddNode(Conv(out, 1, stride), {x}, label + ".downsample");
      }
      x = g.AddNode(AddLayer{}, {y, shortcut}, label + ".add");
    }
  }
  AddClassifierHead(g, x);
  return g;
}

ArchGraph BuildVGG16(const TensorShape& input) {
  // 0 marks a 2x2 max pool.
  constexpr std::array<std::int64_t, 18> kLayout = {
      64, 64, 0, 128, 128, 0, 256, 256, 256, 0, 512, 512, 512, 0, 512, 512, 512, 0};
  ArchGraph g(std::string(ReferenceName(ReferenceModel::kVGG16)), input);
  NodeId x = g.AddNode(InputLayer{}, {}, "input");
  int conv = 0;
  int pool = 0;
  for (std::int64_t c : kLayout) {
    if (c == 0) {
      x = g.AddNode(PoolLayer{PoolMode::kMax, 2, 2}, {x},
                    fmt::format("pool{}", ++pool));
    } else {
      x = g.AddNode(Conv(c, 3), {x}, fmt::format("conv{}", ++conv));
    }
  }
  x = g.AddNode(LinearLayer{4096, true}, {x}, "fc6");
  x = g.AddNode(LinearLayer{4096, true}, {x}, "fc7");
  g.AddNode(LinearLayer{kImageNetClasses, true}, {x}, "fc8");
  return g;
}

bool IsSegmentation(ReferenceModel model) {
  switch (model) {
    case ReferenceModel::kFCDenseNet56:
    case ReferenceModel::kFCDenseNet67:
    case ReferenceModel::kFCDenseNet103:
    case ReferenceModel::kFCDenseNetRef100:
    case ReferenceModel::kFCSparseNetRef100:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<int> SparseLinks(SparseRule rule, int layer) {
  if (layer < 1) {
    throw SpecError(fmt::format("layer index must be >= 1, got {}", layer));
  }
  std::vector<int> links;
  if (rule == SparseRule::kDenseAll) {
    for (int j = 0; j < layer; ++j) links.push_back(j);
    return links;
  }
  for (int step = 1; step <= layer; step *= 2) links.push_back(layer - step);
  return links;
}

const std::vector<ReferenceModel>& AllReferenceModels() {
  static const std::vector<ReferenceModel> kAll = {
      ReferenceModel::kDenseNet121,      ReferenceModel::kDenseNet201,
      ReferenceModel::kDenseNet264,      ReferenceModel::kFCDenseNet56,
      ReferenceModel::kFCDenseNet67,     ReferenceModel::kFCDenseNet103,
      ReferenceModel::kFCDenseNetRef100, ReferenceModel::kFCSparseNetRef100,
      ReferenceModel::kResNet18,         ReferenceModel::kResNet50,
      ReferenceModel::kResNet101,        ReferenceModel::kResNet152,
      ReferenceModel::kVGG16,
  };
  return kAll;
}

std::string_view ReferenceName(ReferenceModel model) {
  switch (model) {
    case ReferenceModel::kDenseNet121: return "densenet121";
    case ReferenceModel::kDenseNet201: return "densenet201";
    case ReferenceModel::kDenseNet264: return "densenet264";
    case ReferenceModel::kFCDenseNet56: return "fc-densenet56";
    case ReferenceModel::kFCDenseNet67: return "fc-densenet67";
    case ReferenceModel::kFCDenseNet103: return "fc-densenet103";
    case ReferenceModel::kFCDenseNetRef100: return "fc-densenet-ref100";
    case ReferenceModel::kFCSparseNetRef100: return "fc-sparsenet-ref100";
    case ReferenceModel::kResNet18: return "resnet18";
    case ReferenceModel::kResNet50: return "resnet50";
    case ReferenceModel::kResNet101: return "resnet101";
    case ReferenceModel::kResNet152: return "resnet152";
    case ReferenceModel::kVGG16: return "vgg16";
  }
  return "unknown";
}

std::optional<ReferenceModel> ParseReference(std::string_view name) {
  for (ReferenceModel m : AllReferenceModels()) {
    if (ReferenceName(m) == name) return m;
  }
  return std::nullopt;
}

TensorShape DefaultInput(ReferenceModel model) {
  return IsSegmentation(model) ? TensorShape{3, 352, 480}
                               : TensorShape{3, 224, 224};
}

ArchGraph BuildReference(ReferenceModel model,
                         std::optional<TensorShape> input) {
  const TensorShape shape = input.value_or(DefaultInput(model));
  switch (model) {
    case ReferenceModel::kDenseNet121:
    case ReferenceModel::kDenseNet201:
    case ReferenceModel::kDenseNet264:
      return BuildDenseNet(model, shape);
    case ReferenceModel::kFCDenseNet56:
    case ReferenceModel::kFCDenseNet67:
    case ReferenceModel::kFCDenseNet103:
    case ReferenceModel::kFCDenseNetRef100:
    case ReferenceModel::kFCSparseNetRef100:
      return BuildFCDenseNet(model, shape);
    case ReferenceModel::kResNet18:
    case ReferenceModel::kResNet50:
    case ReferenceModel::kResNet101:
    case ReferenceModel::kResNet152:
      return BuildResNet(model, shape);
    case ReferenceModel::kVGG16:
      return BuildVGG16(shape);
  }
  throw SpecError("unknown reference model");
}

}  // namespace cioprof
