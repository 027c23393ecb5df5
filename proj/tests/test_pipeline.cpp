// Copyright 2026 The Coalisure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coalisure/pipeline.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "coalisure/serialization.hpp"

namespace coalisure {
namespace {

namespace fs = std::filesystem;

const fs::path kExample = fs::path(COALISURE_CONFIG_DIR) / "three_agents.json";

Json example_json() {
  std::ifstream in(kExample);
  return Json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("coalisure_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("pipeline: example config loads and round trips") {
  const ExperimentConfig c = load_config(kExample);
  CHECK(c.settings.game.n_agents == 3);
  CHECK(c.settings.counts == std::vector<int>{50, 50, 50});
  CHECK(c.methods.size() == 6);
  CHECK(c.settings.zeta.root_weight == RootWeight::kSamples);
  const Json once = to_json(c);
  const Json twice = to_json(config_from_json(once));
  CHECK(once == twice);
}

TEST_CASE("pipeline: config errors are rejected") {
  auto rejects = [](const Json& j) {
    CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  };
  Json j = example_json();
  j["schema_version"] = 2;
  rejects(j);
  j = example_json();
  j["unexpected"] = 1;
  rejects(j);
  j = example_json();
  j["samples_per_agent"] = Json::array({10, 10});
  rejects(j);
  j = example_json();
  j["samples_per_agent"] = 0;
  rejects(j);
  j = example_json();
  j["beta_split"] = "explicit";
  j["beta_explicit"] = Json::array({0.1, 0.1, 0.1});
  rejects(j);
  j = example_json();
  j["zeta"] = {{"root_weight", "coalitions"}};
  rejects(j);
  j = example_json();
  j["methods"] = Json::array({"thm7"});
  rejects(j);
  j = example_json();
  j.erase("game");
  rejects(j);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), std::invalid_argument);
}

TEST_CASE("pipeline: method lists") {
  CHECK(parse_method_list("thm1,thm4") ==
        std::vector<CertificateMethod>{CertificateMethod::kThm1,
                                       CertificateMethod::kThm4});
  CHECK_THROWS_AS(parse_method_list("thm1,nope"), std::invalid_argument);
}

TEST_CASE("pipeline: a priori certificates need no samples") {
  ExperimentConfig c = load_config(kExample);
  c.methods = {CertificateMethod::kThm2, CertificateMethod::kCorollary};
  const Json report = certify_report(c, nullptr);
  CHECK(report["certificates"].size() == 2);
  CHECK(report["failures"].empty());
}

TEST_CASE("pipeline: samples round trip through csv") {
  const ExperimentConfig c = load_config(kExample);
  const PrivateSamples drawn = draw_samples(c);
  std::stringstream ss;
  write_samples_csv(ss, drawn);
  const PrivateSamples back = read_samples_csv(ss);
  REQUIRE(back.n_agents() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back.per_agent[i] == drawn.per_agent[i]);
  CHECK_NOTHROW(check_samples(c, back));
  ExperimentConfig other = c;
  other.settings.counts = {50, 50, 49};
  CHECK_THROWS_AS(check_samples(other, back), std::invalid_argument);
}

TEST_CASE("pipeline: staged commands write reproducible files") {
  ExperimentConfig c = load_config(kExample);
  c.methods = {CertificateMethod::kThm1, CertificateMethod::kThm5};
  const fs::path a = scratch_dir("stage_a");
  const fs::path b = scratch_dir("stage_b");
  for (const fs::path& dir : {a, b}) {
    StageIo io{dir, dir / "samples.csv"};
    cmd_generate(c, StageIo{dir, std::nullopt});
    cmd_core(c, io);
    cmd_compress(c, io);
    cmd_certify(c, io);
    cmd_zeta(c, io);
  }
  for (const char* name : {"samples.csv", "core.json", "compression.json",
                           "certificates.json", "zeta.json"}) {
    REQUIRE(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  const Json core = Json::parse(slurp(a / "core.json"));
  CHECK(core["schema_version"] == 1);
  const Json certs = Json::parse(slurp(a / "certificates.json"));
  CHECK(certs["certificates"].size() == 2);
  const Json compression = Json::parse(slurp(a / "compression.json"));
  CHECK(compression["rebuilt_core_equal"] == true);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("pipeline: mismatched sample files are rejected") {
  ExperimentConfig c = load_config(kExample);
  const fs::path dir = scratch_dir("mismatch");
  cmd_generate(c, StageIo{dir, std::nullopt});
  c.settings.counts = {10, 10, 10};
  CHECK_THROWS_AS(cmd_core(c, StageIo{dir, dir / "samples.csv"}), std::invalid_argument);
  fs::remove_all(dir);
}

}  // namespace coalisure
