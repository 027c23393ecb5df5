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

#ifndef COALISURE_COMPRESSION_HPP_
#define COALISURE_COMPRESSION_HPP_

#include <string>
#include <vector>

#include "coalisure/game.hpp"
#include "coalisure/sampling.hpp"
#include "coalisure/scenario_core.hpp"

namespace coalisure {

// Feasibility program used by the per-agent compression loop. The defaults
// keep the efficiency equality and leave payoffs unsigned; `printed()` gives
// the literal variant (no efficiency row, x >= 0).
struct CompressionOptions {
  bool efficiency = true;
  bool nonnegative = false;

  static CompressionOptions printed() { return {false, true}; }
  std::string label() const;
};

struct Recruit {
  int sample = 0;          // 0-based index into the agent's samples
  Coalition coalition;     // coalition whose equality program kept it
};

struct AgentCompression {
  int agent = 0;
  // Ascending, duplicate-free sample indices (the set I_i).
  std::vector<int> samples;
  // Every (sample, coalition) recruitment, in coalition order.
  std::vector<Recruit> recruits;

  int cardinality() const { return static_cast<int>(samples.size()); }
};

struct CompressionSet {
  std::vector<AgentCompression> per_agent;
  CompressionOptions options;

  std::vector<int> cardinalities() const;
  int total() const;
  SampleSelection selection(const PrivateSamples& samples) const;
};

// For every S' allowed for the agent, asks whether the agent's own tightened
// constraint for S' can hold with equality while its other constraints hold;
// if so the argmax sample for S' (lowest index on ties) joins I_i.
AgentCompression compress_agent(const GameSpec& spec,
                                const PrivateSamples& samples, int agent,
                                const CompressionOptions& opts = {});

CompressionSet compress_all(const GameSpec& spec, const PrivateSamples& samples,
                            const CompressionOptions& opts = {});

// Core built from the compressed samples only.
ScenarioCoreDesc rebuild_core(const GameSpec& spec,
                              const PrivateSamples& samples,
                              const CompressionSet& set);

inline constexpr int kMaxBruteForceSamples = 18;

// Smallest subset of all samples whose core equals the full core; subsets
// are visited by increasing size, then lexicographically over (agent,
// sample) order.
CompressionSet brute_force_min_compression(const GameSpec& spec,
                                           const PrivateSamples& samples);

// Compression for the lexicographic allocation: starting from the agent's
// witness samples, greedily drops any sample whose removal (other agents'
// samples untouched) leaves the selected allocation unchanged.
AgentCompression compress_allocation_agent(const GameSpec& spec,
                                           const PrivateSamples& samples,
                                           int agent, double tol = 1e-9);

std::vector<int> allocation_compression_sizes(const GameSpec& spec,
                                              const PrivateSamples& samples,
                                              double tol = 1e-9);

}  // namespace coalisure

#endif  // COALISURE_COMPRESSION_HPP_
