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

#ifndef COALISURE_PIPELINE_HPP_
#define COALISURE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "coalisure/risk.hpp"
#include "coalisure/sampling.hpp"
#include "coalisure/serialization.hpp"
#include "coalisure/validation.hpp"

namespace coalisure {

// Everything one experiment needs. `settings.method` is unused here; the
// stages iterate over `methods`.
struct ExperimentConfig {
  CoverageConfig settings;
  std::vector<CertificateMethod> methods;
};

ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& config);
// Throws std::invalid_argument when the file is unreadable or malformed.
ExperimentConfig load_config(const std::filesystem::path& path);

// Parses a comma separated method list such as "thm1,thm4".
std::vector<CertificateMethod> parse_method_list(const std::string& list);

// Throws std::invalid_argument unless counts and dimension match.
void check_samples(const ExperimentConfig& config,
                   const PrivateSamples& samples);

PrivateSamples draw_samples(const ExperimentConfig& config);

// Stage reports; each carries a top-level "schema_version".
Json core_report(const ExperimentConfig& config, const PrivateSamples& samples);
Json compression_report(const ExperimentConfig& config,
                        const PrivateSamples& samples);
// Runtime failures of one method are recorded under "failures" and do not
// stop the others. `samples` may be null when only a priori methods are
// requested.
Json certify_report(const ExperimentConfig& config,
                    const PrivateSamples* samples);
Json zeta_report(const ExperimentConfig& config, const PrivateSamples& samples);
std::vector<CoverageReport> validate_methods(const ExperimentConfig& config);

// File-level stages. Samples are read from `samples_path` when given and
// drawn from the config otherwise; the two agree because the CSV is exact.
struct StageIo {
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> samples_path;
};

void cmd_generate(const ExperimentConfig& config, const StageIo& io);
void cmd_core(const ExperimentConfig& config, const StageIo& io);
void cmd_compress(const ExperimentConfig& config, const StageIo& io);
void cmd_certify(const ExperimentConfig& config, const StageIo& io);
void cmd_zeta(const ExperimentConfig& config, const StageIo& io);
void cmd_validate(const ExperimentConfig& config, const StageIo& io);
// generate, core, compress, certify, zeta, validate; also writes the
// resolved config.
void cmd_run_all(const ExperimentConfig& config, const StageIo& io);

}  // namespace coalisure

#endif  // COALISURE_PIPELINE_HPP_
