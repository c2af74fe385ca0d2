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

#ifndef CIOPROF_CATALOG_H_
#define CIOPROF_CATALOG_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cioprof/graph.h"

namespace cioprof {

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// params_m, macs_g: per model. cio_mb: MiB at the row's dtype. cio_m:
// millions of elements. cio_ratio: cio / partner cio. cio_reduction:
// 1 - cio / partner cio.
enum class CheckField {
  kParamsM,
  kMacsG,
  kCioMb,
  kCioM,
  kCioRatio,
  kCioReduction
};
std::string_view FieldName(CheckField f);

struct ExpectedCheck {
  CheckField field = CheckField::kParamsM;
  std::optional<double> expected;
  std::optional<double> tolerance_pct;
  std::optional<double> tolerance_abs;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<std::string> partner;
  std::optional<int> criterion;
  bool informational = false;

  // Accepted interval. Explicit min/max win over expected +- tolerance.
  double Lower() const;
  double Upper() const;
};

struct ExpectedRow {
  std::string model;
  std::optional<TensorShape> input;  // model default when absent
  int dtype_bytes = 4;
  std::optional<double> ds_weight;
  std::string provenance;
  std::vector<ExpectedCheck> checks;
};

struct Catalog {
  std::vector<ExpectedRow> rows;
};

Catalog ParseCatalog(std::string_view json_text);
Catalog LoadCatalog(const std::string& path);

struct CheckResult {
  std::string model;
  std::string partner;  // empty unless a ratio check
  CheckField field = CheckField::kParamsM;
  double computed = 0.0;
  std::optional<double> expected;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
  std::optional<int> criterion;
  bool informational = false;
  std::string provenance;
};

// Builds every model once, then evaluates each check. Failures are reported
// in the result, never thrown.
std::vector<CheckResult> ValidateCatalog(const Catalog& catalog);

// "[PASS] model field=value expected ... in [lo, hi]"
std::string FormatResult(const CheckResult& r);

}  // namespace cioprof

#endif  // CIOPROF_CATALOG_H_
