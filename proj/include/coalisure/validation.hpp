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

#ifndef COALISURE_VALIDATION_HPP_
#define COALISURE_VALIDATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coalisure/compression.hpp"
#include "coalisure/game.hpp"
#include "coalisure/risk.hpp"
#include "coalisure/sampling.hpp"
#include "coalisure/scenario_core.hpp"
#include "coalisure/zeta_core.hpp"

namespace coalisure {

struct ViolationEstimate {
  double p_hat = 0.0;
  long n_samples = 0;
  long violations = 0;
  // Clopper-Pearson interval at `level`.
  double lo = 0.0;
  double hi = 1.0;
  double level = 0.99;
  std::uint64_t seed = 0;
};

// Exact binomial interval for k successes out of n trials.
ViolationEstimate clopper_pearson(long violations, long n, double level = 0.99);

// Fraction of fresh draws for which some enumerated S has x(S) < u_S(xi).
ViolationEstimate estimate_allocation_instability(const GameSpec& spec,
                                                  const Allocation& x,
                                                  const DistributionSpec& dist,
                                                  long n, std::uint64_t seed);

// Fraction of fresh draws for which some S has u_S(xi) > min_{x in core} x(S),
// i.e. some core allocation loses S's rationality. Throws EmptyCoreError.
ViolationEstimate estimate_core_instability(const GameSpec& spec,
                                            const ScenarioCoreDesc& core,
                                            const DistributionSpec& dist,
                                            long n, std::uint64_t seed);

struct CoverageConfig {
  GameSpec game;
  DistributionSpec dist;
  std::vector<int> counts;
  double beta = 0.05;
  BetaStrategy split_strategy = BetaStrategy::kEqual;
  std::vector<double> explicit_split;
  CertificateMethod method = CertificateMethod::kThm1;
  int trials = 100;
  long n_fresh = 100000;
  std::uint64_t seed = 0;
  CompressionOptions compression;
  // Total epsilon for the support-rank method, split equally. When unset
  // each agent uses the epsilon whose conventional tail equals beta_i.
  std::optional<double> support_rank_epsilon;
  // Budget for the budgeted a priori bounds; defaults per method when unset.
  std::optional<std::int64_t> budget;
  ZetaOptions zeta;
  int threads = 0;
};

BetaSplit make_split(const CoverageConfig& config);

// The object a certificate speaks about, with the certificate itself.
struct CertifiedArtifact {
  RiskCertificate certificate;
  std::optional<ScenarioCoreDesc> core;     // core methods
  std::optional<Allocation> allocation;     // single-allocation methods
  std::vector<int> complexity;
  std::optional<CompressionSet> compression;
  std::optional<ZetaSolution> zeta;
};

// Certificate for config.method. A priori methods accept samples == nullptr
// and then carry no core or allocation. Throws EmptyCoreError when a
// sample-based core method meets an empty core.
CertifiedArtifact certify(const CoverageConfig& config,
                          const PrivateSamples* samples);

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double epsilon = 1.0;
  double p_hat = 0.0;
  double cp_lo = 0.0;
  double cp_hi = 1.0;
  bool exceeded = false;
  std::vector<int> complexity;
};

struct CoverageReport {
  CertificateMethod method = CertificateMethod::kThm1;
  double beta = 0.0;
  int n_trials = 0;
  int n_valid = 0;
  int n_exceeded = 0;
  // n_exceeded / n_valid.
  double exceedance_frequency = 0.0;
  // beta + 3 sqrt(beta (1 - beta) / T).
  double frequency_limit = 0.0;
  long n_fresh = 0;
  std::uint64_t seed = 0;
  std::string allocation_rule = "lexicographic-min";
  std::string compression_variant;
  std::vector<TrialRecord> trials;
};

std::uint64_t trial_seed(std::uint64_t seed, int trial);

TrialRecord run_trial(const CoverageConfig& config, int trial);

// Per trial: draw private samples, build the certified object, compute its
// certificate, estimate its true instability on fresh draws and flag the
// trial when the lower Clopper-Pearson bound exceeds epsilon.
CoverageReport coverage_experiment(const CoverageConfig& config);

}  // namespace coalisure

#endif  // COALISURE_VALIDATION_HPP_
