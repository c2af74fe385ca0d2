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

#include "segmentation_layout.h"

#include <fmt/format.h>

#include <vector>

#include "cioprof/harmonic.h"

namespace cioprof::internal {

ArchGraph BuildEncoderDecoder(std::string name, const TensorShape& input,
                              std::int64_t first_conv_channels, int num_down,
                              const BlockBuilder& block) {
  ArchGraph g(std::move(name), input);
  NodeId x = g.AddNode(InputLayer{}, {}, "input");
  x = g.AddNode(Conv(first_conv_channels, 3), {x}, "stem.conv");

  std::vector<NodeId> skips;
  for (int stage = 0; stage < num_down; ++stage) {
    x = block(g, x, BlockSite{stage, BlockRole::kEncoder, false});
    skips.push_back(x);
    TransitionSpec down;
    down.out_channels = g.shape(x).channels;
    down.downsample = Downsample::kMaxPool;
    x = BuildTransition(g, x, down, fmt::format("down{}", stage));
  }

  x = block(g, x, BlockSite{num_down, BlockRole::kBottleneck, false});

  for (int stage = num_down - 1; stage >= 0; --stage) {
    TransposedConvLayer up;
    up.kernel = 3;
    up.stride = 2;
    up.out_channels = g.shape(x).channels;
    x = g.AddNode(up, {x}, fmt::format("up{}.tconv", stage));
    x = g.AddNode(ConcatLayer{}, {x, skips[static_cast<std::size_t>(stage)]},
                  fmt::format("up{}.skip", stage));
    x = block(g, x, BlockSite{stage, BlockRole::kDecoder, stage == 0});
  }

  ConvLayer classifier = Conv(kSegmentationClasses, 1);
  classifier.has_bias = true;
  g.AddNode(classifier, {x}, "classifier");
  return g;
}

}  // namespace cioprof::internal
