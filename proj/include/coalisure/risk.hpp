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

#ifndef COALISURE_RISK_HPP_
#define COALISURE_RISK_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coalisure/game.hpp"

namespace coalisure {

enum class BetaStrategy { kEqual, kProportional, kExplicit };

const char* to_string(BetaStrategy s);
BetaStrategy parse_beta_strategy(const std::string& name);

// Confidence budget beta split into per-agent beta_i > 0 summing to beta.
struct BetaSplit {
  double total = 0.0;
  std::vector<double> per_agent;
  BetaStrategy strategy = BetaStrategy::kEqual;

  static BetaSplit equal(double beta, int n_agents);
  static BetaSplit proportional(double beta, const std::vector<int>& counts);
  static BetaSplit explicit_split(std::vector<double> parts);
};

void validate(const BetaSplit& split);

enum class CertificateMethod { kThm1, kThm2, kThm3, kThm4, kCorollary, kThm5 };

const char* to_string(CertificateMethod m);
// Throws std::invalid_argument for unknown names.
CertificateMethod parse_method(const std::string& name);
const std::vector<CertificateMethod>& all_methods();

struct AgentRisk {
  int samples = 0;          // K_i
  double beta = 0.0;        // beta_i
  double epsilon = 0.0;     // epsilon_i at the recorded complexity
  int complexity = 0;       // s_i, s_i^* or rho_i depending on the method
  // Support-rank certificates also carry the j = 0..rho-1 tail.
  std::optional<double> conventional_beta;
};

// "With confidence >= confidence over the private samples, the instability
// probability is <= epsilon."
struct RiskCertificate {
  CertificateMethod method = CertificateMethod::kThm1;
  double epsilon = 1.0;
  double beta = 0.0;
  double confidence = 1.0;
  std::string complexity_kind;
  std::vector<AgentRisk> agents;
  std::optional<std::int64_t> budget;
  std::optional<std::uint64_t> seed;
  std::string split_strategy;
  std::vector<std::string> warnings;
  // Root-polynomial weight; set only by the zeta certificate.
  std::optional<std::string> root_weight;
};

// log C(n, k) via lgamma.
double log_binomial(int n, int k);

// Table epsilon_i(k), k = 0..K_i, solving the implicit a posteriori equation
// with every term of the sum equal to beta_i / (K_i - 1); epsilon_i(K_i) = 1.
std::vector<double> epsilon_implicit(int samples, double beta_i);

// 1 - (beta_i / ((N + 1) C(K_i, s)))^(1 / (K_i - s)); 1 at s = K_i.
double epsilon_closed_form(int samples, double beta_i, int n_agents, int s);

RiskCertificate a_posteriori_core_bound(const BetaSplit& split,
                                        const std::vector<int>& complexity,
                                        const std::vector<int>& samples);

struct BudgetMaximum {
  // Unclipped maximum of sum_i table_i[s_i] subject to sum_i s_i <= budget.
  double value = 0.0;
  std::vector<int> assignment;
};

// Dynamic program over (agent, remaining budget). Sums accumulate in agent
// order starting from 0, so the value is bit-identical to a direct sum of
// the attaining assignment.
BudgetMaximum maximize_budgeted(const std::vector<std::vector<double>>& tables,
                                std::int64_t budget);

// A priori core bound; budget defaults to m_budget(N).
RiskCertificate a_priori_core_bound(const BetaSplit& split,
                                    const std::vector<int>& samples,
                                    std::optional<std::int64_t> budget = {});

// Row rank of the incidence matrix of allowed[agent].
int support_rank(const GameSpec& spec, int agent);

struct SupportRankBeta {
  double printed = 0.0;       // sum_{j=1}^{rho} C(K,j) e^j (1-e)^(K-j)
  double conventional = 0.0;  // sum_{j=0}^{rho-1} C(K,j) e^j (1-e)^(K-j)
};

SupportRankBeta beta_from_support_rank(int samples, double eps_i, int rho_i);

RiskCertificate a_priori_allocation_bound(const std::vector<double>& eps_split,
                                          const std::vector<int>& samples,
                                          const std::vector<int>& rho);

// Smallest epsilon with conventional tail <= beta_i (bisection).
double epsilon_for_support_rank(int samples, double beta_i, int rho_i);

RiskCertificate a_posteriori_allocation_bound(
    const BetaSplit& split, const std::vector<int>& complexity,
    const std::vector<int>& samples);

// Budget defaults to N.
RiskCertificate a_priori_allocation_bound_corollary(
    const BetaSplit& split, const std::vector<int>& samples,
    std::optional<std::int64_t> budget = {});

// Divisor W of the first sum of the root polynomial. kSamples uses W = K,
// under which a root in (0, 1) exists for every s < K. kAgents uses W = N;
// h(1) < 0 then whenever beta (K - s) / (2 N (s + 1)) + beta / 2 >= 1 at
// s = 0, and no root exists for such (K, s).
enum class RootWeight { kSamples, kAgents };

const char* to_string(RootWeight w);
RootWeight parse_root_weight(const std::string& name);

// h(t) / C(K, s) for
//   h(t) = C(K,s) t^(K-s) - beta/(2W) sum_{j=s}^{K-1} C(j,s) t^(j-s)
//                         - beta/(6K) sum_{j=K+1}^{4K} C(j,s) t^(j-s).
// Terms are summed relative to the largest one.
double campi_polynomial(int samples, double beta_i, int n_agents, int s,
                        double t, RootWeight weight = RootWeight::kSamples);

struct PolynomialRoot {
  double t_lower = 0.0;
  double epsilon_bar = 1.0;  // 1 - t_lower
  double residual = 0.0;     // campi_polynomial at t_lower
  int scan_cell = 0;         // grid cell holding the first sign change
};

// Smallest root on (0, 1] by a scan at resolution 1/(64 K) plus bisection.
// s = K gives t = 0. Throws NoRootError when the scan finds no sign change.
PolynomialRoot solve_campi_polynomial(int samples, double beta_i, int n_agents,
                                 int s,
                                 RootWeight weight = RootWeight::kSamples);

}  // namespace coalisure

#endif  // COALISURE_RISK_HPP_
