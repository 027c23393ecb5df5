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

#include "coalisure/zeta_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coalisure/errors.hpp"
#include "coalisure/lp.hpp"

namespace coalisure {

const char* to_string(ZetaComplexity c) {
  return c == ZetaComplexity::kPositiveSlack ? "positive_slack"
                                             : "violated_or_active";
}

ZetaComplexity parse_zeta_complexity(const std::string& name) {
  if (name == "positive_slack") return ZetaComplexity::kPositiveSlack;
  if (name == "violated_or_active") return ZetaComplexity::kViolatedOrActive;
  throw std::invalid_argument("unknown zeta complexity: " + name);
}

ZetaSolution solve_zeta_program(const GameSpec& spec,
                                const PrivateSamples& samples,
                                const ZetaOptions& opts) {
  if (samples.n_agents() != spec.n_agents ||
      samples.dim() != spec.uncertainty_dim) {
    throw std::invalid_argument("samples do not match the game");
  }
  const int n = spec.n_agents;
  const bool per_sample = opts.slack_form == SlackForm::kPerSample;

  // Slack variable layout: x occupies [0, n), slacks follow.
  std::vector<int> slack_begin(n);
  int n_slack = 0;
  for (int i = 0; i < n; ++i) {
    slack_begin[i] = n + n_slack;
    n_slack += per_sample ? samples.count(i) : 1;
  }
  const int n_vars = n + n_slack;

  Lp lp(n_vars);
  lp.add_equality(
      (Vector(n_vars) << Vector::Ones(n), Vector::Zero(n_slack)).finished(),
      spec.grand_value);
  for (int i = 0; i < n; ++i) {
    if (per_sample) {
      for (int k = 0; k < samples.count(i); ++k) {
        const Vector xi = samples.sample(i, k);
        for (Coalition s : spec.allowed[i]) {
          Vector row = Vector::Zero(n_vars);
          for (int j : s.members()) row[j] = 1.0;
          row[slack_begin[i] + k] = 1.0;
          lp.add_inequality(row, coalition_value(spec.value_model, s, xi));
        }
      }
    } else {
      for (const AgentBound& b : agent_bounds(spec, samples, i)) {
        Vector row = Vector::Zero(n_vars);
        for (int j : b.coalition.members()) row[j] = 1.0;
        row[slack_begin[i]] = 1.0;
        lp.add_inequality(row, b.value);
      }
    }
  }
  for (int v = n; v < n_vars; ++v) lp.set_lower_bound(v, 0.0);

  std::vector<Vector> objectives;
  Vector total_slack = Vector::Zero(n_vars);
  for (int i = 0; i < n; ++i) {
    const int width = per_sample ? samples.count(i) : 1;
    const double weight = per_sample ? 1.0 : samples.count(i);
    total_slack.segment(slack_begin[i], width).setConstant(weight);
  }
  objectives.push_back(total_slack);
  for (int i = 0; i < n; ++i) objectives.push_back(Vector::Unit(n_vars, i));

  const LpResult res = solve_lexicographic(lp, objectives);
  if (!res.optimal()) {
    throw LpError(std::string("slack-minimizing program returned ") +
                  to_string(res.status));
  }

  ZetaSolution sol;
  sol.slack_form = opts.slack_form;
  sol.threshold = opts.positivity_threshold;
  sol.x_star = res.solution.head(n);
  sol.objective = 0.0;
  for (int i = 0; i < n; ++i) {
    const int width = per_sample ? samples.count(i) : 1;
    Vector z = res.solution.segment(slack_begin[i], width).cwiseMax(0.0);
    sol.zeta_bar.push_back(z.maxCoeff());
    sol.objective += (per_sample ? 1.0 : samples.count(i)) * z.sum();
    sol.zeta.push_back(std::move(z));
  }
  sol.s_star = complexity_counts(sol, sol.threshold);
  sol.s_star_sensitivity = complexity_counts(sol, sol.threshold / 10.0);
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int k = 0; k < samples.count(i); ++k) {
      const Vector xi = samples.sample(i, k);
      double worst = -std::numeric_limits<double>::infinity();
      for (Coalition s : spec.allowed[i]) {
        worst = std::max(worst, coalition_value(spec.value_model, s, xi) -
                                    s.sum(sol.x_star));
      }
      if (worst >= -sol.threshold) ++count;
    }
    sol.s_support.push_back(std::max(count, sol.s_star[i]));
  }
  return sol;
}

std::vector<int> complexity_counts(const ZetaSolution& sol, double threshold) {
  std::vector<int> out;
  for (const Vector& z : sol.zeta) {
    out.push_back(static_cast<int>((z.array() > threshold).count()));
  }
  return out;
}

RiskCertificate zeta_certificate(const BetaSplit& split,
                                 const std::vector<int>& s_star,
                                 const std::vector<int>& samples,
                                 bool continuous, RootWeight weight) {
  validate(split);
  if (s_star.size() != samples.size() ||
      split.per_agent.size() != samples.size()) {
    throw std::invalid_argument("per-agent vectors differ in length");
  }
  const int n = static_cast<int>(samples.size());
  RiskCertificate cert;
  cert.method = CertificateMethod::kThm5;
  cert.beta = split.total;
  cert.confidence = 1.0 - split.total;
  cert.complexity_kind = "positive_slack";
  cert.split_strategy = to_string(split.strategy);
  cert.root_weight = to_string(weight);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (s_star[i] < 0 || s_star[i] > samples[i]) {
      throw std::invalid_argument("s_i^* must lie in [0, K_i]");
    }
    const PolynomialRoot root =
        solve_campi_polynomial(samples[i], split.per_agent[i], n, s_star[i],
                               weight);
    cert.agents.push_back(AgentRisk{samples[i], split.per_agent[i],
                                    root.epsilon_bar, s_star[i], std::nullopt});
    sum += root.epsilon_bar;
  }
  cert.epsilon = std::min(1.0, sum);
  if (!continuous) {
    cert.warnings.push_back(
        "distribution may put mass on coalition boundaries; the "
        "non-accumulation assumption is not guaranteed");
  }
  return cert;
}

AgentBoundTable agent_bound_table(const GameSpec& spec,
                                  const PrivateSamples& samples) {
  AgentBoundTable out;
  for (int i = 0; i < spec.n_agents; ++i) {
    out.push_back(agent_bounds(spec, samples, i));
  }
  return out;
}

bool zeta_membership(const GameSpec& spec, const AgentBoundTable& bounds,
                     const std::vector<double>& zeta_bar, const Allocation& x,
                     double tol) {
  const int n = spec.n_agents;
  if (static_cast<int>(zeta_bar.size()) != n ||
      static_cast<int>(bounds.size()) != n || x.size() != n) {
    throw std::invalid_argument("per-agent vectors differ in length");
  }
  for (double z : zeta_bar) {
    if (!(z >= 0.0)) throw std::invalid_argument("zeta_bar must be >= 0");
  }
  if (std::abs(x.sum() - spec.grand_value) > tol) return false;
  for (Coalition s : enumerate_subcoalitions(spec)) {
    double required = -std::numeric_limits<double>::infinity();
    for (int i : s.members()) {
      for (const AgentBound& b : bounds[i]) {
        if (b.coalition == s && b.sample >= 0) {
          required = std::max(required, b.value - zeta_bar[i]);
        }
      }
    }
    if (s.sum(x) < required - tol) return false;
  }
  return true;
}

}  // namespace coalisure
