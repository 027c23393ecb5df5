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

#include "coalisure/compression.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace coalisure {

namespace {

Vector indicator(Coalition s, int n) {
  Vector row = Vector::Zero(n);
  for (int i : s.members()) row[i] = 1.0;
  return row;
}

bool same_allocation(const Allocation& a, const Allocation& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <=
         tol * (1.0 + std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
}

}  // namespace

std::string CompressionOptions::label() const {
  std::string out = efficiency ? "efficiency" : "no-efficiency";
  out += nonnegative ? "+nonnegative" : "+free-sign";
  return out;
}

std::vector<int> CompressionSet::cardinalities() const {
  std::vector<int> out;
  for (const auto& a : per_agent) out.push_back(a.cardinality());
  return out;
}

int CompressionSet::total() const {
  int total = 0;
  for (const auto& a : per_agent) total += a.cardinality();
  return total;
}

SampleSelection CompressionSet::selection(const PrivateSamples& samples) const {
  SampleSelection sel = select_none(samples);
  for (const auto& a : per_agent) {
    for (int k : a.samples) sel[a.agent][k] = 1;
  }
  return sel;
}

AgentCompression compress_agent(const GameSpec& spec,
                                const PrivateSamples& samples, int agent,
                                const CompressionOptions& opts) {
  if (agent < 0 || agent >= spec.n_agents) {
    throw std::invalid_argument("agent index out of range");
  }
  if (samples.count(agent) < 1) {
    throw std::invalid_argument("agent has no samples");
  }
  const int n = spec.n_agents;
  const auto bounds = agent_bounds(spec, samples, agent);
  AgentCompression out;
  out.agent = agent;
  std::set<int> chosen;
  for (std::size_t target = 0; target < bounds.size(); ++target) {
    Lp lp(n);
    lp.add_equality(indicator(bounds[target].coalition, n),
                    bounds[target].value);
    if (opts.efficiency) lp.add_equality(Vector::Ones(n), spec.grand_value);
    for (std::size_t other = 0; other < bounds.size(); ++other) {
      if (other == target) continue;
      lp.add_inequality(indicator(bounds[other].coalition, n),
                        bounds[other].value);
    }
    if (opts.nonnegative) {
      for (int j = 0; j < n; ++j) lp.set_lower_bound(j, 0.0);
    }
    if (feasible(lp).optimal()) {
      chosen.insert(bounds[target].sample);
      out.recruits.push_back({bounds[target].sample, bounds[target].coalition});
    }
  }
  out.samples.assign(chosen.begin(), chosen.end());
  return out;
}

CompressionSet compress_all(const GameSpec& spec, const PrivateSamples& samples,
                            const CompressionOptions& opts) {
  CompressionSet out;
  out.options = opts;
  for (int i = 0; i < spec.n_agents; ++i) {
    out.per_agent.push_back(compress_agent(spec, samples, i, opts));
  }
  return out;
}

ScenarioCoreDesc rebuild_core(const GameSpec& spec,
                              const PrivateSamples& samples,
                              const CompressionSet& set) {
  return build_core(spec,
                    tighten_selected(spec, samples, set.selection(samples)));
}

CompressionSet brute_force_min_compression(const GameSpec& spec,
                                           const PrivateSamples& samples) {
  const int total = samples.total();
  if (total > kMaxBruteForceSamples) {
    throw std::invalid_argument(
        "brute-force compression is limited to " +
        std::to_string(kMaxBruteForceSamples) + " samples in total");
  }
  std::vector<std::pair<int, int>> flat;
  for (int i = 0; i < samples.n_agents(); ++i) {
    for (int k = 0; k < samples.count(i); ++k) flat.emplace_back(i, k);
  }
  const ScenarioCoreDesc full = build_core(spec, tighten(spec, samples));
  const bool full_empty = is_empty(full);
  std::vector<double> target;
  if (!full_empty) target = canonical_bounds(full);

  // Fewer samples only relax bounds, so a candidate core always contains the
  // full one; equality reduces to matching every canonical bound.
  auto reproduces = [&](const ScenarioCoreDesc& cand) {
    bool raw_equal = true;
    for (std::size_t e = 0; e < cand.bounds.entries.size(); ++e) {
      if (cand.bounds.entries[e].value != full.bounds.entries[e].value) {
        raw_equal = false;
        break;
      }
    }
    if (raw_equal) return true;
    if (full_empty) return is_empty(cand);
    for (std::size_t e = 0; e < target.size(); ++e) {
      if (std::isinf(target[e])) continue;
      const double m = coalition_min(cand, cand.bounds.entries[e].coalition);
      if (!(m >= target[e] - 1e-9 * (1.0 + std::abs(target[e])))) return false;
    }
    return true;
  };

  std::vector<int> pick;
  std::vector<int> best;
  bool found = false;
  std::function<bool(int, int)> search = [&](int start, int left) -> bool {
    if (left == 0) {
      SampleSelection sel = select_none(samples);
      for (int p : pick) sel[flat[p].first][flat[p].second] = 1;
      if (reproduces(build_core(spec, tighten_selected(spec, samples, sel)))) {
        best = pick;
        return true;
      }
      return false;
    }
    for (int p = start; p <= total - left; ++p) {
      pick.push_back(p);
      if (search(p + 1, left - 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  for (int size = 0; size <= total && !found; ++size) {
    pick.clear();
    found = search(0, size);
  }

  CompressionSet out;
  for (int i = 0; i < samples.n_agents(); ++i) {
    out.per_agent.push_back(AgentCompression{i, {}, {}});
  }
  for (int p : best) {
    out.per_agent[flat[p].first].samples.push_back(flat[p].second);
  }
  return out;
}

AgentCompression compress_allocation_agent(const GameSpec& spec,
                                           const PrivateSamples& samples,
                                           int agent, double tol) {
  const Allocation reference =
      lexmin_allocation(build_core(spec, tighten(spec, samples)));
  std::set<int> keep;
  for (const auto& b : agent_bounds(spec, samples, agent)) keep.insert(b.sample);

  SampleSelection sel = select_all(samples);
  auto apply = [&](const std::set<int>& kept) {
    std::fill(sel[agent].begin(), sel[agent].end(), 0);
    for (int k : kept) sel[agent][k] = 1;
  };
  const std::vector<int> candidates(keep.begin(), keep.end());
  for (int k : candidates) {
    std::set<int> trial = keep;
    trial.erase(k);
    apply(trial);
    bool unchanged = false;
    try {
      const Allocation x = lexmin_allocation(
          build_core(spec, tighten_selected(spec, samples, sel)));
      unchanged = same_allocation(x, reference, tol);
    } catch (const std::runtime_error&) {
      unchanged = false;
    }
    if (unchanged) keep = std::move(trial);
  }
  AgentCompression out;
  out.agent = agent;
  out.samples.assign(keep.begin(), keep.end());
  return out;
}

std::vector<int> allocation_compression_sizes(const GameSpec& spec,
                                              const PrivateSamples& samples,
                                              double tol) {
  std::vector<int> out;
  for (int i = 0; i < spec.n_agents; ++i) {
    out.push_back(compress_allocation_agent(spec, samples, i, tol).cardinality());
  }
  return out;
}

}  // namespace coalisure
