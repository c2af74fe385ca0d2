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

#ifndef CIOPROF_SRC_SEGMENTATION_LAYOUT_H_
#define CIOPROF_SRC_SEGMENTATION_LAYOUT_H_

#include <cstdint>
#include <functional>
#include <string>

#include "cioprof/graph.h"

namespace cioprof::internal {

enum class BlockRole { kEncoder, kBottleneck, kDecoder };

struct BlockSite {
  int stage = 0;  // 0 = full resolution; the bottleneck is stage num_down
  BlockRole role = BlockRole::kEncoder;
  // Only the last decoder block of an FC-DenseNet keeps its input.
  bool last = false;
};

using BlockBuilder =
    std::function<NodeId(ArchGraph&, NodeId input, const BlockSite&)>;

// Tiramisu-style encoder/decoder:
//   Conv3x3(first) -> [block, skip, Conv1x1(same width), MaxPool] x num_down
//   -> bottleneck block
//   -> [TransposedConv3x3/2 (same width), Concat(skip), block] x num_down
//   -> Conv1x1(classes, bias)
ArchGraph BuildEncoderDecoder(std::string name, const TensorShape& input,
                              std::int64_t first_conv_channels, int num_down,
                              const BlockBuilder& block);

}  // namespace cioprof::internal

#endif  // CIOPROF_SRC_SEGMENTATION_LAYOUT_H_
