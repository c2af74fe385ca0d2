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

#ifndef CIOPROF_REPORT_H_
#define CIOPROF_REPORT_H_

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "cioprof/graph.h"
#include "cioprof/latency.h"
#include "cioprof/liveness.h"
#include "cioprof/metrics.h"

namespace cioprof {

inline constexpr char kToolVersion[] = "0.1.0";

// Written at the top of every report so a file says how it was produced.
struct ReportHeader {
  std::string model;
  TensorShape input;
  int dtype_bytes = 4;
  std::vector<std::pair<std::string, std::string>> flags;
};

ReportHeader MakeHeader(const ModelSummary& summary);

// "# key: value" lines.
std::string HeaderComment(const ReportHeader& header);
nlohmann::ordered_json HeaderJson(const ReportHeader& header);

// id,label,kind,out_shape,params,macs,cio_elements,moc plus a "total" row.
std::string SummaryCsv(const ArchGraph& graph, const ModelSummary& summary,
                       const ReportHeader& header);
nlohmann::ordered_json SummaryJson(const ArchGraph& graph,
                                   const ModelSummary& summary,
                                   const ReportHeader& header);

// step,node,live_bytes
std::string TimelineCsv(const MemoryProfile& profile,
                        const ReportHeader& header);
nlohmann::ordered_json TimelineJson(const MemoryProfile& profile,
                                    const ReportHeader& header);

std::string LatencyCsv(const ArchGraph& graph, const LatencyReport& report,
                       const ReportHeader& header);
nlohmann::ordered_json LatencyJson(const ArchGraph& graph,
                                   const LatencyReport& report,
                                   const ReportHeader& header);

std::string MocCsv(const ArchGraph& graph,
                   const std::vector<MocViolation>& violations,
                   const ReportHeader& header);
nlohmann::ordered_json MocJson(const ArchGraph& graph,
                               const std::vector<MocViolation>& violations,
                               const ReportHeader& header);

// One node statement per graph node, then one edge per input reference.
std::string ToDot(const ArchGraph& graph);

// Fixed-precision real formatting shared by all CSV writers.
std::string FormatReal(double v);

}  // namespace cioprof

#endif  // CIOPROF_REPORT_H_
