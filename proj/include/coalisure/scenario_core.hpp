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

#ifndef COALISURE_SCENARIO_CORE_HPP_
#define COALISURE_SCENARIO_CORE_HPP_

#include <optional>
#include <vector>

#include "coalisure/game.hpp"
#include "coalisure/lp.hpp"
#include "coalisure/sampling.hpp"

namespace coalisure {

// (agent, sample) attaining a tightened bound; both 0-based.
struct Witness {
  int agent = 0;
  int sample = 0;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct BoundEntry {
  Coalition coalition;
  // -inf when no selected sample constrains this coalition.
  double value = 0.0;
  std::optional<Witness> witness;
};

// b_S = max over members i (with S allowed for i) of max_k u_S(xi_i^(k)),
// one entry per enumerated subcoalition in ascending mask order.
struct TightenedBounds {
  std::vector<BoundEntry> entries;

  const BoundEntry& at(Coalition s) const;
  double value(Coalition s) const { return at(s).value; }
};

// Agent i's own maximum for one of its allowed coalitions.
struct AgentBound {
  Coalition coalition;
  double value = 0.0;
  // Lowest index attaining the maximum; -1 when nothing was selected.
  int sample = -1;
};

// selection[i][k] != 0 keeps agent i's sample k.
using SampleSelection = std::vector<std::vector<char>>;

SampleSelection select_all(const PrivateSamples& samples);
SampleSelection select_none(const PrivateSamples& samples);

// max_k u_S(xi_i^(k)) for every S in allowed[agent], in allowed order.
std::vector<AgentBound> agent_bounds(const GameSpec& spec,
                                     const PrivateSamples& samples, int agent,
                                     const std::vector<char>* keep = nullptr);

TightenedBounds tighten(const GameSpec& spec, const PrivateSamples& samples);

// Same as tighten over the selected samples only; coalitions with no
// selected sample get -inf and no witness.
TightenedBounds tighten_selected(const GameSpec& spec,
                                 const PrivateSamples& samples,
                                 const SampleSelection& selection);

// {x : sum x = u_N, x(S) >= b_S for every finite b_S}.
struct ScenarioCoreDesc {
  int n_agents = 0;
  double grand_value = 0.0;
  TightenedBounds bounds;
};

ScenarioCoreDesc build_core(const GameSpec& spec, TightenedBounds bounds);

bool contains(const ScenarioCoreDesc& core, const Allocation& x,
              double tol = 1e-9);

// Feasibility program over x (all free) defining the core.
Lp core_program(const ScenarioCoreDesc& core);

bool is_empty(const ScenarioCoreDesc& core);

// min of x(S) over the core; -inf if unbounded below. Throws EmptyCoreError.
double coalition_min(const ScenarioCoreDesc& core, Coalition s);

// coalition_min for every entry of core.bounds, in entry order. These are
// the tightest right-hand sides describing the same polyhedron, so two cores
// over the same coalitions coincide iff their canonical bounds coincide.
std::vector<double> canonical_bounds(const ScenarioCoreDesc& core);

// Set equality of two cores over the same coalition list.
bool same_core(const ScenarioCoreDesc& a, const ScenarioCoreDesc& b,
               double tol = 1e-9);

inline constexpr int kMaxVertexAgents = 6;

// Basic feasible points by active-set enumeration, deduplicated at 1e-7.
std::vector<Allocation> vertices(const ScenarioCoreDesc& core);

// The allocation minimizing x_1, then x_2, ... over the core.
Allocation lexmin_allocation(const ScenarioCoreDesc& core);

}  // namespace coalisure

#endif  // COALISURE_SCENARIO_CORE_HPP_
