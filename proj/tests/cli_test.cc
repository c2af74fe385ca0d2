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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cioprof/cli.h"
#include "cioprof/zoo.h"

namespace cioprof {
namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result Run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::Run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Value of `column` in the CSV row starting with `first,`.
std::string CsvCell(const std::string& csv, const std::string& first,
                    int column) {
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    if (!line.starts_with(first + ",")) continue;
    std::istringstream cells(line);
    std::string cell;
    for (int i = 0; i <= column; ++i) std::getline(cells, cell, ',');
    return cell;
  }
  return {};
}

TEST_SUITE("cli") {

TEST_CASE("analyze hardnet68 as CSV") {
  const Result r = Run({"analyze", "hardnet68", "--input", "224x224",
                        "--format", "csv"});
  REQUIRE(r.code == 0);
  const double params = std::stod(CsvCell(r.out, "total", 4));
  CHECK(params == doctest::Approx(17.6e6).epsilon(0.05));
}

TEST_CASE("compare shows the segmentation CIO reduction") {
  const Result r =
      Run({"compare", "fc-hardnet84", "fc-densenet103", "--input", "352x480"});
  REQUIRE(r.code == 0);
  CHECK(std::stod(CsvCell(r.out, "cio", 4)) >= 0.35);
  const Result j = Run({"compare", "hardnet68", "resnet50", "--metrics",
                        "cio", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  REQUIRE(doc["metrics"].size() == 1);
  CHECK(doc["metrics"][0]["metric"] == "cio");
  CHECK(Run({"compare", "hardnet68", "resnet50", "--metrics", "speed"}).code ==
        1);
}

TEST_CASE("check-moc with a zero threshold") {
  const Result r = Run({"check-moc", "hardnet68", "--threshold", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# violations: 0") != std::string::npos);
  CHECK(Run({"check-moc", "hardnet68"}).code == 1);
  CHECK(Run({"check-moc", "hardnet68", "--threshold", "-1"}).code == 1);
}

TEST_CASE("usage errors exit 1") {
  CHECK(Run({}).code == 1);
  CHECK(Run({"frobnicate"}).code == 1);
  CHECK(Run({"analyze", "notamodel"}).code == 1);
  CHECK(Run({"analyze", "hardnet68", "--input", "224"}).code == 1);
  CHECK(Run({"analyze", "hardnet68", "--input", "0x10"}).code == 1);
  CHECK(Run({"analyze", "hardnet68", "--format", "xml"}).code == 1);
  CHECK(Run({"analyze", "hardnet68", "--ds-weight", "-2"}).code == 1);
  CHECK(Run({"analyze", "hardnet68", "--dtype", "0"}).code == 1);
  CHECK(Run({"latency", "hardnet68"}).code == 1);
  CHECK(Run({"latency", "hardnet68", "--preset", "toaster"}).code == 1);
  CHECK(Run({"analyze", "/nonexistent/graph.json"}).code == 1);
  const Result r = Run({"analyze", "notamodel"});
  CHECK(r.err.find("unknown model 'notamodel'") != std::string::npos);
}

TEST_CASE("help exits 0") {
  const Result r = Run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("analyze") != std::string::npos);
}

TEST_CASE("analysis errors exit 2") {
  const std::string bad = Temp("cioprof_bad_graph.json");
  std::ofstream(bad) << "{\"nodes\": [ nope";
  const Result r = Run({"analyze", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("is not valid JSON") != std::string::npos);
  // Too small for two stride-2 stages.
  CHECK(Run({"analyze", "resnet18", "--input", "2x2"}).code == 2);
  std::filesystem::remove(bad);
}

TEST_CASE("build then analyze matches analyze of the model") {
  for (const char* model : {"hardnet68", "fc-hardnet68", "resnet50"}) {
    CAPTURE(model);
    const std::string path = Temp(std::string("cioprof_rt_") + model + ".json");
    REQUIRE(Run({"build", model, "--output", path}).code == 0);
    const Result direct = Run({"analyze", model, "--format", "json"});
    const Result via = Run({"analyze", path, "--format", "json"});
    REQUIRE(direct.code == 0);
    REQUIRE(via.code == 0);
    CHECK(via.out == direct.out);
    std::filesystem::remove(path);
  }
}

TEST_CASE("json graphs accept a new input size") {
  const std::string path = std::string(CIOPROF_DOCS_DIR) +
                           "/examples/small_hdb.json";
  const Result r = Run({"analyze", path, "--input", "64x64"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# input: 3x64x64") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::vector<std::vector<std::string>> cmds = {
      {"analyze", "densenet121", "--format", "json"},
      {"liveness", "hardnet68", "--concat-free"},
      {"latency", "fc-hardnet84", "--preset", "edge-like", "--concat-copy"},
      {"export-dot", "resnet18"},
      {"list-models"},
  };
  for (const auto& cmd : cmds) {
    const Result a = Run(cmd);
    const Result b = Run(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("list-models names every model") {
  const Result r = Run({"list-models"});
  for (const std::string& name : ModelNames()) {
    CHECK(r.out.find(name + "\t") != std::string::npos);
  }
}

TEST_CASE("output files") {
  const std::string path = Temp("cioprof_dot.gv");
  REQUIRE(Run({"export-dot", "resnet18", "-o", path}).code == 0);
  CHECK(Slurp(path).starts_with("digraph \"resnet18\""));
  std::filesystem::remove(path);
  CHECK(Run({"analyze", "resnet18", "-o", "/nonexistent/dir/x.csv"}).code ==
        2);
}

TEST_CASE("latency from a platform file") {
  const std::string file = std::string(CIOPROF_DATA_DIR) + "/platforms.json";
  const Result r = Run({"latency", "resnet50", "--platform", file, "--preset",
                        "gpu-like", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["platform"]["name"] == "gpu-like");
  CHECK(doc["total_seconds"].get<double>() > 0.0);
  CHECK(Run({"latency", "resnet50", "--platform", file}).code == 1);
}

TEST_CASE("liveness flags change the report") {
  const Result a = Run({"liveness", "densenet121", "--format", "json"});
  const Result b =
      Run({"liveness", "densenet121", "--concat-free", "--format", "json"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const auto ja = nlohmann::json::parse(a.out);
  const auto jb = nlohmann::json::parse(b.out);
  CHECK(jb["peak_bytes"].get<std::int64_t>() <=
        ja["peak_bytes"].get<std::int64_t>());
  CHECK(jb["header"]["flags"]["concat_free"] == "true");
}

}  // TEST_SUITE

}  // namespace
}  // namespace cioprof
