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

#include "cioprof/zoo.h"

#include <fmt/format.h>

#include "cioprof/harmonic.h"
#include "cioprof/reference_models.h"

namespace cioprof {

UnknownModelError::UnknownModelError(std::string_view name)
    : std::invalid_argument(fmt::format("unknown model '{}'", name)) {}

std::vector<std::string> ModelNames() {
  std::vector<std::string> names;
  for (ModelVariant v : AllVariants()) names.emplace_back(VariantName(v));
  for (ReferenceModel m : AllReferenceModels()) {
    names.emplace_back(ReferenceName(m));
  }
  return names;
}

bool IsKnownModel(std::string_view name) {
  return ParseVariant(name).has_value() || ParseReference(name).has_value();
}

TensorShape DefaultInputFor(std::string_view name) {
  if (auto v = ParseVariant(name)) return DefaultInput(*v);
  if (auto m = ParseReference(name)) return DefaultInput(*m);
  throw UnknownModelError(name);
}

ArchGraph BuildNamed(std::string_view name, std::optional<TensorShape> input) {
  if (auto v = ParseVariant(name)) return BuildModel(*v, input);
  if (auto m = ParseReference(name)) return BuildReference(*m, input);
  throw UnknownModelError(name);
}

}  // namespace cioprof
