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

#ifndef CIOPROF_GRAPH_JSON_H_
#define CIOPROF_GRAPH_JSON_H_

#include <filesystem>
#include <string>

#include "cioprof/graph.h"
#include "json.hpp"

namespace cioprof {

// Graph interchange format (see docs/formats.md):
//
//   {"name": "...", "input": [c, h, w],
//    "nodes": [{"id": 0, "kind": "input", "params": {}, "inputs": []}, ...]}
//
// Node ids must be 0..n-1 in order. Unknown kinds or params throw GraphError.
nlohmann::ordered_json GraphToJson(const ArchGraph& graph);
ArchGraph GraphFromJson(const nlohmann::json& doc);

ArchGraph LoadGraph(const std::filesystem::path& path);
void SaveGraph(const ArchGraph& graph, const std::filesystem::path& path);

}  // namespace cioprof

#endif  // CIOPROF_GRAPH_JSON_H_
