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

#ifndef CIOPROF_LIVENESS_H_
#define CIOPROF_LIVENESS_H_

#include <cstdint>
#include <vector>

#include "cioprof/graph.h"
#include "cioprof/harmonic.h"

namespace cioprof {

class FlushViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Lifetime of the tensor produced by node `tensor`, in schedule steps.
struct LifeInterval {
  NodeId tensor = 0;
  int birth = 0;
  int death = 0;
  std::int64_t size_elements = 0;
};

// One entry per node. Death is the last consumer's step; tensors nobody
// reads die at the final step. With concat_free, Concat outputs are views of
// size 0 and keep their inputs alive until the view itself dies.
std::vector<LifeInterval> TensorLifetimes(const ArchGraph& graph,
                                          const std::vector<NodeId>& schedule,
                                          bool concat_free = false);

struct MemoryStep {
  NodeId node = 0;
  std::int64_t live_bytes = 0;
  std::vector<NodeId> live;  // ascending tensor ids
};

struct MemoryProfile {
  std::vector<MemoryStep> steps;
  std::int64_t peak_bytes = 0;
  int peak_step = 0;
  // Parameter bytes, only filled when include_weights is set. Never folded
  // into live_bytes.
  std::int64_t weight_bytes = 0;
};

struct MemoryOptions {
  bool concat_free = false;
  bool include_weights = false;
};

MemoryProfile PeakMemory(const ArchGraph& graph,
                         const std::vector<NodeId>& schedule, int dtype_bytes,
                         const MemoryOptions& options = {});

struct FlushEvent {
  int layer = 0;                // a power of two
  std::vector<int> flushed;     // layer indices 1..layer-1, all dead by then
};

// Checks that once layer 2^n has run, layers 1..2^n-1 are dead, for every
// power of two up to the block depth. `layers` is HdbResult::layers of a
// block built without the odd-output concat. Throws FlushViolation.
std::vector<FlushEvent> VerifyFlush(const ArchGraph& graph,
                                    const std::vector<NodeId>& layers);

// Builds Input + bare HDB of the given depth and verifies it.
std::vector<FlushEvent> VerifyFlush(int depth, std::int64_t growth_rate = 4,
                                    double multiplier = 1.7);

}  // namespace cioprof

#endif  // CIOPROF_LIVENESS_H_
