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

// Command line front end. Exit codes: 0 success, 1 runtime failure,
// 2 config or schema error.

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "coalisure/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::optional<std::string> methods;
  std::optional<int> trials;
  std::optional<long> fresh;
  std::optional<std::string> samples;
};

using Stage = std::function<void(const coalisure::ExperimentConfig&,
                                 const coalisure::StageIo&)>;

int run(const Options& opts, const Stage& stage) {
  coalisure::ExperimentConfig config = coalisure::load_config(opts.config);
  if (opts.seed) config.settings.seed = *opts.seed;
  if (opts.methods) config.methods = coalisure::parse_method_list(*opts.methods);
  if (opts.trials) {
    if (*opts.trials < 1) throw std::invalid_argument("--trials must be >= 1");
    config.settings.trials = *opts.trials;
  }
  if (opts.fresh) {
    if (*opts.fresh < 1) throw std::invalid_argument("--fresh must be >= 1");
    config.settings.n_fresh = *opts.fresh;
  }
  coalisure::StageIo io;
  io.out_dir = opts.out;
  if (opts.samples) io.samples_path = *opts.samples;
  stage(config, io);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario core construction and PAC stability certificates"};
  app.require_subcommand(1);

  Options opts;
  Stage chosen;
  const std::map<std::string, std::pair<std::string, Stage>> stages = {
      {"generate", {"Draw private samples into samples.csv", coalisure::cmd_generate}},
      {"core", {"Build the scenario core into core.json", coalisure::cmd_core}},
      {"compress", {"Run distributed compression into compression.json",
                    coalisure::cmd_compress}},
      {"certify", {"Issue certificates into certificates.json",
                   coalisure::cmd_certify}},
      {"zeta", {"Solve the slack program into zeta.json", coalisure::cmd_zeta}},
      {"validate", {"Run coverage experiments into coverage_<method>.*",
                    coalisure::cmd_validate}},
      {"run-all", {"Run every stage in order", coalisure::cmd_run_all}},
  };
  for (const auto& [name, entry] : stages) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", opts.config, "Experiment config JSON")
        ->required();
    sub->add_option("--seed", opts.seed, "Override the master seed");
    sub->add_option("--out", opts.out, "Output directory");
    sub->add_option("--method", opts.methods,
                    "Comma separated methods: thm1,thm2,thm3,thm4,corollary,thm5");
    sub->add_option("--trials", opts.trials, "Coverage trials");
    sub->add_option("--fresh", opts.fresh, "Fresh samples per trial");
    sub->add_option("--samples", opts.samples,
                    "Samples CSV (default: draw from the config)");
    const Stage stage = entry.second;
    sub->callback([&chosen, stage] { chosen = stage; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(opts, chosen);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
