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

#ifndef COALISURE_ZETA_CORE_HPP_
#define COALISURE_ZETA_CORE_HPP_

#include <string>
#include <vector>

#include "coalisure/game.hpp"
#include "coalisure/risk.hpp"
#include "coalisure/sampling.hpp"
#include "coalisure/scenario_core.hpp"

namespace coalisure {

enum class SlackForm {
  // One slack per (agent, sample), shared by that sample's coalitions.
  kPerSample,
  // One slack per agent bounding the agent's tightened constraints. Offered
  // for comparison only; no certificate is issued for it.
  kPerAgent,
};

// Which per-agent count feeds the certificate.
enum class ZetaComplexity {
  // Samples with strictly positive slack.
  kPositiveSlack,
  // Samples violated or active at x*: max_S u_S(xi) - x*(S) >= -threshold.
  // Also counts the zero-slack samples that pin x*.
  kViolatedOrActive,
};

const char* to_string(ZetaComplexity c);
ZetaComplexity parse_zeta_complexity(const std::string& name);

struct ZetaOptions {
  SlackForm slack_form = SlackForm::kPerSample;
  double positivity_threshold = 1e-7;
  ZetaComplexity complexity = ZetaComplexity::kPositiveSlack;
  RootWeight root_weight = RootWeight::kSamples;
};

struct ZetaSolution {
  Allocation x_star;
  // zeta[i](k): slack of agent i's k-th sample (per-agent form: size 1).
  std::vector<Vector> zeta;
  std::vector<int> s_star;
  // Recount at threshold / 10.
  std::vector<int> s_star_sensitivity;
  // Violated-or-active count per agent; always >= s_star.
  std::vector<int> s_support;
  std::vector<double> zeta_bar;
  double objective = 0.0;
  double threshold = 1e-7;
  SlackForm slack_form = SlackForm::kPerSample;
};

// min sum zeta  s.t.  sum x = u_N,  x(S) >= u_S(xi_i^(k)) - zeta_i^(k) for
// every agent i, sample k and S allowed for i,  zeta >= 0; ties are broken
// by minimizing x_1, then x_2, ... over the optimal face.
ZetaSolution solve_zeta_program(const GameSpec& spec,
                                const PrivateSamples& samples,
                                const ZetaOptions& opts = {});

// |{k : zeta_i^(k) > threshold}| per agent.
std::vector<int> complexity_counts(const ZetaSolution& sol, double threshold);
inline std::vector<int> complexity_counts(const ZetaSolution& sol) {
  return complexity_counts(sol, sol.threshold);
}

// Sum over agents of 1 - t_i(s_i^*) from the root polynomial, clipped at 1.
// `continuous` = false marks the certificate with a warning that the
// non-accumulation assumption may fail.
RiskCertificate zeta_certificate(const BetaSplit& split,
                                 const std::vector<int>& s_star,
                                 const std::vector<int>& samples,
                                 bool continuous = true,
                                 RootWeight weight = RootWeight::kSamples);

// agent_bounds for every agent.
using AgentBoundTable = std::vector<std::vector<AgentBound>>;
AgentBoundTable agent_bound_table(const GameSpec& spec,
                                  const PrivateSamples& samples);

// Membership in the zeta-core: efficiency within tol and, for every S,
// x(S) >= max over members i (S allowed for i) of (b_{i,S} - zeta_bar_i).
bool zeta_membership(const GameSpec& spec, const AgentBoundTable& bounds,
                     const std::vector<double>& zeta_bar, const Allocation& x,
                     double tol = 1e-9);

}  // namespace coalisure

#endif  // COALISURE_ZETA_CORE_HPP_
