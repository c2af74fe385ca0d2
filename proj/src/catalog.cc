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

#include "cioprof/catalog.h"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "cioprof/metrics.h"
#include "cioprof/zoo.h"

namespace cioprof {
namespace {

using nlohmann::json;

constexpr CheckField kFields[] = {
    CheckField::kParamsM, CheckField::kMacsG,    CheckField::kCioMb,
    CheckField::kCioM,    CheckField::kCioRatio, CheckField::kCioReduction};

CheckField ParseField(const std::string& s) {
  for (CheckField f : kFields) {
    if (FieldName(f) == s) return f;
  }
  throw CatalogError(fmt::format("unknown check field '{}'", s));
}

bool NeedsPartner(CheckField f) {
  return f == CheckField::kCioRatio || f == CheckField::kCioReduction;
}

template <typename T>
std::optional<T> Opt(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return j.at(key).get<T>();
}

ExpectedCheck ParseCheck(const json& j) {
  ExpectedCheck c;
  c.field = ParseField(j.at("field").get<std::string>());
  c.expected = Opt<double>(j, "expected");
  c.tolerance_pct = Opt<double>(j, "tolerance_pct");
  c.tolerance_abs = Opt<double>(j, "tolerance_abs");
  c.min = Opt<double>(j, "min");
  c.max = Opt<double>(j, "max");
  c.partner = Opt<std::string>(j, "partner");
  c.criterion = Opt<int>(j, "criterion");
  c.informational = j.value("informational", false);
  if (NeedsPartner(c.field) != c.partner.has_value()) {
    throw CatalogError(fmt::format("check '{}' {} a partner model",
                                   FieldName(c.field),
                                   c.partner ? "does not take" : "needs"));
  }
  const bool banded = c.expected && (c.tolerance_pct || c.tolerance_abs);
  if (!banded && !c.min && !c.max) {
    throw CatalogError(fmt::format(
        "check '{}' has neither a tolerance band nor min/max",
        FieldName(c.field)));
  }
  return c;
}

ExpectedRow ParseRow(const json& j) {
  ExpectedRow r;
  r.model = j.at("model").get<std::string>();
  if (j.contains("input")) {
    const auto v = j.at("input").get<std::vector<std::int64_t>>();
    if (v.size() != 3) throw CatalogError("input must be [c, h, w]");
    r.input = TensorShape::Make(v[0], v[1], v[2]);
  }
  r.dtype_bytes = j.value("dtype_bytes", 4);
  r.ds_weight = Opt<double>(j, "ds_weight");
  r.provenance = j.at("provenance").get<std::string>();
  for (const auto& c : j.at("checks")) r.checks.push_back(ParseCheck(c));
  return r;
}

struct Key {
  std::string model;
  std::string input;
  int dtype;
  double ds;
  bool operator<(const Key& o) const {
    return std::tie(model, input, dtype, ds) <
           std::tie(o.model, o.input, o.dtype, o.ds);
  }
};

}  // namespace

std::string_view FieldName(CheckField f) {
  switch (f) {
    case CheckField::kParamsM:
      return "params_m";
    case CheckField::kMacsG:
      return "macs_g";
    case CheckField::kCioMb:
      return "cio_mb";
    case CheckField::kCioM:
      return "cio_m";
    case CheckField::kCioRatio:
      return "cio_ratio";
    case CheckField::kCioReduction:
      return "cio_reduction";
  }
  return "?";
}

double ExpectedCheck::Lower() const {
  if (min) return *min;
  if (expected && tolerance_pct) return *expected * (1.0 - *tolerance_pct / 100.0);
  if (expected && tolerance_abs) return *expected - *tolerance_abs;
  return -std::numeric_limits<double>::infinity();
}

double ExpectedCheck::Upper() const {
  if (max) return *max;
  if (expected && tolerance_pct) return *expected * (1.0 + *tolerance_pct / 100.0);
  if (expected && tolerance_abs) return *expected + *tolerance_abs;
  return std::numeric_limits<double>::infinity();
}

Catalog ParseCatalog(std::string_view json_text) {
  Catalog cat;
  try {
    const json j = json::parse(json_text);
    for (const auto& r : j.at("rows")) cat.rows.push_back(ParseRow(r));
  } catch (const json::exception& e) {
    throw CatalogError(fmt::format("malformed catalog: {}", e.what()));
  } catch (const ShapeError& e) {
    throw CatalogError(fmt::format("malformed catalog: {}", e.what()));
  }
  return cat;
}

Catalog LoadCatalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError(fmt::format("cannot open '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseCatalog(buf.str());
}

std::vector<CheckResult> ValidateCatalog(const Catalog& catalog) {
  std::map<Key, ModelSummary> cache;
  auto summary = [&](const std::string& model,
                     const std::optional<TensorShape>& input, int dtype,
                     std::optional<double> ds) -> const ModelSummary& {
    const TensorShape in = input ? *input : DefaultInputFor(model);
    Key key{model, in.ToString(), dtype, ds.value_or(0.0)};
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, Summarize(BuildNamed(model, in), dtype, ds))
               .first;
    }
    return it->second;
  };

  std::vector<CheckResult> results;
  for (const ExpectedRow& row : catalog.rows) {
    for (const ExpectedCheck& check : row.checks) {
      CheckResult r;
      r.model = row.model;
      r.field = check.field;
      r.expected = check.expected;
      r.lower = check.Lower();
      r.upper = check.Upper();
      r.criterion = check.criterion;
      r.informational = check.informational;
      r.provenance = row.provenance;
      try {
        const ModelSummary& s =
            summary(row.model, row.input, row.dtype_bytes, row.ds_weight);
        switch (check.field) {
          case CheckField::kParamsM:
            r.computed = s.params_m();
            break;
          case CheckField::kMacsG:
            r.computed = s.macs_g();
            break;
          case CheckField::kCioMb:
            r.computed = s.cio_mb();
            break;
          case CheckField::kCioM:
            r.computed = s.cio_m();
            break;
          case CheckField::kCioRatio:
          case CheckField::kCioReduction: {
            r.partner = *check.partner;
            const ModelSummary& p = summary(*check.partner, row.input,
                                            row.dtype_bytes, row.ds_weight);
            const double ratio = s.totals.cio_weighted / p.totals.cio_weighted;
            r.computed =
                check.field == CheckField::kCioRatio ? ratio : 1.0 - ratio;
            break;
          }
        }
        r.pass = r.computed >= r.lower && r.computed <= r.upper;
      } catch (const std::exception& e) {
        r.computed = std::nan("");
        r.pass = false;
        r.provenance += fmt::format(" (error: {})", e.what());
      }
      results.push_back(std::move(r));
    }
  }
  return results;
}

std::string FormatResult(const CheckResult& r) {
  const char* tag = r.pass ? "PASS" : (r.informational ? "INFO" : "FAIL");
  std::string subject = r.model;
  if (!r.partner.empty()) subject += fmt::format(" vs {}", r.partner);
  std::string expected =
      r.expected ? fmt::format(" expected {:.4g}", *r.expected) : "";
  return fmt::format("[{}] {} {}={:.4f}{} in [{:.4g}, {:.4g}]", tag, subject,
                     FieldName(r.field), r.computed, expected, r.lower,
                     r.upper);
}

}  // namespace cioprof
