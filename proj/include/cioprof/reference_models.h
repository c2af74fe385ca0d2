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

#ifndef CIOPROF_REFERENCE_MODELS_H_
#define CIOPROF_REFERENCE_MODELS_H_

#include <optional>
#include <string_view>
#include <vector>

#include "cioprof/graph.h"

namespace cioprof {

// Within-block connection rules of the dense family.
enum class SparseRule {
  kDenseAll,           // every predecessor
  kLog,                // k - 2^n for every n with k - 2^n >= 0
  kSparseFixedOutput,  // kLog, and the block output reads like layer L + 1
};

// DenseAll is ascending, Log rules are descending. layer >= 1.
std::vector<int> SparseLinks(SparseRule rule, int layer);

enum class ReferenceModel {
  kDenseNet121,
  kDenseNet201,
  kDenseNet264,
  kFCDenseNet56,
  kFCDenseNet67,
  kFCDenseNet103,
  kFCDenseNetRef100,
  kFCSparseNetRef100,
  kResNet18,
  kResNet50,
  kResNet101,
  kResNet152,
  kVGG16,
};

const std::vector<ReferenceModel>& AllReferenceModels();
std::string_view ReferenceName(ReferenceModel model);
std::optional<ReferenceModel> ParseReference(std::string_view name);
TensorShape DefaultInput(ReferenceModel model);

ArchGraph BuildReference(ReferenceModel model,
                         std::optional<TensorShape> input = std::nullopt);

}  // namespace cioprof

#endif  // CIOPROF_REFERENCE_MODELS_H_
