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

#ifndef CIOPROF_ZOO_H_
#define CIOPROF_ZOO_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cioprof/graph.h"

namespace cioprof {

class UnknownModelError : public std::invalid_argument {
 public:
  explicit UnknownModelError(std::string_view name);
};

// Every built-in architecture name, HarDNet variants first.
std::vector<std::string> ModelNames();
bool IsKnownModel(std::string_view name);
TensorShape DefaultInputFor(std::string_view name);
ArchGraph BuildNamed(std::string_view name,
                     std::optional<TensorShape> input = std::nullopt);

}  // namespace cioprof

#endif  // CIOPROF_ZOO_H_
