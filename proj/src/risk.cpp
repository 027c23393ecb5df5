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

#include "coalisure/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "coalisure/errors.hpp"

namespace coalisure {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

void check_beta(double beta) {
  require(beta > 0.0 && beta < 1.0, "confidence parameter must lie in (0,1)");
}

void check_lengths(const BetaSplit& split, const std::vector<int>& complexity,
                   const std::vector<int>& samples) {
  validate(split);
  require(complexity.size() == samples.size() &&
              split.per_agent.size() == samples.size(),
          "per-agent vectors differ in length");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(samples[i] >= 1, "every agent needs K_i >= 1");
    require(complexity[i] >= 0 && complexity[i] <= samples[i],
            "complexity must lie in [0, K_i]");
  }
}

RiskCertificate sum_certificate(CertificateMethod method,
                                const BetaSplit& split,
                                const std::vector<int>& complexity,
                                const std::vector<int>& samples,
                                const std::vector<double>& eps,
                                const std::string& kind) {
  RiskCertificate cert;
  cert.method = method;
  cert.beta = split.total;
  cert.confidence = 1.0 - split.total;
  cert.complexity_kind = kind;
  cert.split_strategy = to_string(split.strategy);
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    cert.agents.push_back(AgentRisk{samples[i], split.per_agent[i], eps[i],
                                    complexity[i], std::nullopt});
    sum += eps[i];
  }
  cert.epsilon = std::min(1.0, sum);
  return cert;
}

}  // namespace

const char* to_string(BetaStrategy s) {
  switch (s) {
    case BetaStrategy::kEqual: return "equal";
    case BetaStrategy::kProportional: return "proportional";
    case BetaStrategy::kExplicit: return "explicit";
  }
  return "?";
}

BetaStrategy parse_beta_strategy(const std::string& name) {
  if (name == "equal") return BetaStrategy::kEqual;
  if (name == "proportional") return BetaStrategy::kProportional;
  if (name == "explicit") return BetaStrategy::kExplicit;
  throw std::invalid_argument("unknown beta split strategy: " + name);
}

BetaSplit BetaSplit::equal(double beta, int n_agents) {
  check_beta(beta);
  require(n_agents >= 1, "need at least one agent");
  BetaSplit s{beta, std::vector<double>(n_agents, beta / n_agents),
              BetaStrategy::kEqual};
  validate(s);
  return s;
}

BetaSplit BetaSplit::proportional(double beta, const std::vector<int>& counts) {
  check_beta(beta);
  require(!counts.empty(), "need at least one agent");
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  BetaSplit s{beta, {}, BetaStrategy::kProportional};
  for (int k : counts) {
    require(k >= 1, "every agent needs K_i >= 1");
    s.per_agent.push_back(beta * k / total);
  }
  validate(s);
  return s;
}

BetaSplit BetaSplit::explicit_split(std::vector<double> parts) {
  BetaSplit s{std::accumulate(parts.begin(), parts.end(), 0.0),
              std::move(parts), BetaStrategy::kExplicit};
  validate(s);
  return s;
}

void validate(const BetaSplit& split) {
  check_beta(split.total);
  require(!split.per_agent.empty(), "beta split is empty");
  double sum = 0.0;
  for (double b : split.per_agent) {
    require(b > 0.0 && b < 1.0, "every beta_i must lie in (0,1)");
    sum += b;
  }
  require(std::abs(sum - split.total) <= 1e-12,
          "beta_i must sum to beta within 1e-12");
}

const char* to_string(CertificateMethod m) {
  switch (m) {
    case CertificateMethod::kThm1: return "thm1";
    case CertificateMethod::kThm2: return "thm2";
    case CertificateMethod::kThm3: return "thm3";
    case CertificateMethod::kThm4: return "thm4";
    case CertificateMethod::kCorollary: return "corollary";
    case CertificateMethod::kThm5: return "thm5";
  }
  return "?";
}

CertificateMethod parse_method(const std::string& name) {
  for (CertificateMethod m : all_methods()) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown certificate method: " + name);
}

const std::vector<CertificateMethod>& all_methods() {
  static const std::vector<CertificateMethod> kAll = {
      CertificateMethod::kThm1, CertificateMethod::kThm2,
      CertificateMethod::kThm3, CertificateMethod::kThm4,
      CertificateMethod::kCorollary, CertificateMethod::kThm5};
  return kAll;
}

double log_binomial(int n, int k) {
  require(n >= 0 && k >= 0 && k <= n, "binomial arguments out of range");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::vector<double> epsilon_implicit(int samples, double beta_i) {
  require(samples >= 1, "K_i must be >= 1");
  check_beta(beta_i);
  const int big_k = samples;
  // With K_i = 1 the sum is empty; reuse the formula with one share.
  const double shares = std::max(big_k - 1, 1);
  std::vector<double> table(big_k + 1, 1.0);
  for (int k = 0; k < big_k; ++k) {
    const double log_inner =
        std::log(beta_i) - std::log(shares) - log_binomial(big_k, k);
    table[k] = clip01(-std::expm1(log_inner / (big_k - k)));
  }
  return table;
}

double epsilon_closed_form(int samples, double beta_i, int n_agents, int s) {
  require(samples >= 1, "K_i must be >= 1");
  require(n_agents >= 1, "N must be >= 1");
  require(s >= 0 && s <= samples, "s must lie in [0, K_i]");
  check_beta(beta_i);
  if (s == samples) return 1.0;
  const double log_inner = std::log(beta_i) - std::log(n_agents + 1.0) -
                           log_binomial(samples, s);
  return clip01(-std::expm1(log_inner / (samples - s)));
}

RiskCertificate a_posteriori_core_bound(const BetaSplit& split,
                                        const std::vector<int>& complexity,
                                        const std::vector<int>& samples) {
  check_lengths(split, complexity, samples);
  std::vector<double> eps;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    eps.push_back(
        epsilon_implicit(samples[i], split.per_agent[i])[complexity[i]]);
  }
  return sum_certificate(CertificateMethod::kThm1, split, complexity, samples,
                         eps, "compression");
}

BudgetMaximum maximize_budgeted(const std::vector<std::vector<double>>& tables,
                                std::int64_t budget) {
  require(budget >= 0, "budget must be nonnegative");
  require(!tables.empty(), "no agents");
  std::int64_t cap = 0;
  for (const auto& t : tables) {
    require(!t.empty(), "empty epsilon table");
    cap += static_cast<std::int64_t>(t.size()) - 1;
  }
  const int b_max = static_cast<int>(std::min(budget, cap));
  const int n = static_cast<int>(tables.size());
  // best[b]: max over assignments of agents so far with total <= b.
  std::vector<double> best(b_max + 1, 0.0);
  std::vector<std::vector<int>> choice(n, std::vector<int>(b_max + 1, 0));
  for (int i = 0; i < n; ++i) {
    const int k_i = static_cast<int>(tables[i].size()) - 1;
    std::vector<double> next(b_max + 1, -std::numeric_limits<double>::infinity());
    for (int b = 0; b <= b_max; ++b) {
      for (int s = 0; s <= std::min(k_i, b); ++s) {
        const double v = best[b - s] + tables[i][s];
        if (v > next[b]) {
          next[b] = v;
          choice[i][b] = s;
        }
      }
    }
    best = std::move(next);
  }
  BudgetMaximum out;
  out.value = best[b_max];
  out.assignment.assign(n, 0);
  int b = b_max;
  for (int i = n - 1; i >= 0; --i) {
    out.assignment[i] = choice[i][b];
    b -= choice[i][b];
  }
  return out;
}

RiskCertificate a_priori_core_bound(const BetaSplit& split,
                                    const std::vector<int>& samples,
                                    std::optional<std::int64_t> budget) {
  validate(split);
  require(split.per_agent.size() == samples.size(),
          "per-agent vectors differ in length");
  const int n = static_cast<int>(samples.size());
  const std::int64_t m = budget.value_or(m_budget(n));
  std::vector<std::vector<double>> tables;
  for (int i = 0; i < n; ++i) {
    require(samples[i] >= 1, "every agent needs K_i >= 1");
    tables.push_back(epsilon_implicit(samples[i], split.per_agent[i]));
  }
  const BudgetMaximum best = maximize_budgeted(tables, m);
  std::vector<double> eps;
  for (int i = 0; i < n; ++i) eps.push_back(tables[i][best.assignment[i]]);
  RiskCertificate cert = sum_certificate(CertificateMethod::kThm2, split,
                                         best.assignment, samples, eps,
                                         "budget_maximizer");
  cert.epsilon = std::min(1.0, best.value);
  cert.budget = m;
  return cert;
}

int support_rank(const GameSpec& spec, int agent) {
  require(agent >= 0 && agent < spec.n_agents, "agent index out of range");
  const auto& rows = spec.allowed[agent];
  require(!rows.empty(), "agent has no allowed coalitions");
  const int n = spec.n_agents;
  std::vector<std::vector<double>> a;
  for (Coalition s : rows) {
    std::vector<double> r(n, 0.0);
    for (int i : s.members()) r[i] = 1.0;
    a.push_back(std::move(r));
  }
  const int m = static_cast<int>(a.size());
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int pivot = rank;
    for (int r = rank + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) <= 1e-10) continue;
    std::swap(a[pivot], a[rank]);
    for (int r = rank + 1; r < m; ++r) {
      const double f = a[r][col] / a[rank][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[rank][c];
    }
    ++rank;
  }
  return rank;
}

SupportRankBeta beta_from_support_rank(int samples, double eps_i, int rho_i) {
  require(samples >= 1, "K_i must be >= 1");
  require(eps_i > 0.0 && eps_i < 1.0, "epsilon_i must lie in (0,1)");
  require(rho_i >= 1 && rho_i <= samples, "support rank must lie in [1, K_i]");
  const double log_e = std::log(eps_i);
  const double log_1me = std::log1p(-eps_i);
  auto term = [&](int j) {
    return std::exp(log_binomial(samples, j) + j * log_e +
                    (samples - j) * log_1me);
  };
  SupportRankBeta out;
  for (int j = 1; j <= rho_i; ++j) out.printed += term(j);
  for (int j = 0; j <= rho_i - 1; ++j) out.conventional += term(j);
  out.printed = clip01(out.printed);
  out.conventional = clip01(out.conventional);
  return out;
}

RiskCertificate a_priori_allocation_bound(const std::vector<double>& eps_split,
                                          const std::vector<int>& samples,
                                          const std::vector<int>& rho) {
  require(eps_split.size() == samples.size() && rho.size() == samples.size(),
          "per-agent vectors differ in length");
  RiskCertificate cert;
  cert.method = CertificateMethod::kThm3;
  cert.complexity_kind = "support_rank";
  cert.split_strategy = "epsilon_explicit";
  double eps = 0.0, beta = 0.0, conventional = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SupportRankBeta b =
        beta_from_support_rank(samples[i], eps_split[i], rho[i]);
    cert.agents.push_back(
        AgentRisk{samples[i], b.printed, eps_split[i], rho[i], b.conventional});
    eps += eps_split[i];
    beta += b.printed;
    conventional += b.conventional;
  }
  require(eps < 1.0, "sum of epsilon_i must lie in (0,1)");
  cert.epsilon = eps;
  cert.beta = clip01(beta);
  cert.confidence = clip01(1.0 - beta);
  if (conventional > beta) {
    std::ostringstream os;
    os << "conventional tail sum_{j=0}^{rho-1} gives confidence "
       << clip01(1.0 - conventional);
    cert.warnings.push_back(os.str());
  }
  return cert;
}

double epsilon_for_support_rank(int samples, double beta_i, int rho_i) {
  check_beta(beta_i);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || mid >= 1.0) break;
    if (beta_from_support_rank(samples, mid, rho_i).conventional > beta_i) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

RiskCertificate a_posteriori_allocation_bound(
    const BetaSplit& split, const std::vector<int>& complexity,
    const std::vector<int>& samples) {
  check_lengths(split, complexity, samples);
  const int n = static_cast<int>(samples.size());
  std::vector<double> eps;
  for (int i = 0; i < n; ++i) {
    eps.push_back(epsilon_closed_form(samples[i], split.per_agent[i], n,
                                      complexity[i]));
  }
  return sum_certificate(CertificateMethod::kThm4, split, complexity, samples,
                         eps, "compression");
}

RiskCertificate a_priori_allocation_bound_corollary(
    const BetaSplit& split, const std::vector<int>& samples,
    std::optional<std::int64_t> budget) {
  validate(split);
  require(split.per_agent.size() == samples.size(),
          "per-agent vectors differ in length");
  const int n = static_cast<int>(samples.size());
  std::vector<std::vector<double>> tables;
  for (int i = 0; i < n; ++i) {
    require(samples[i] >= 1, "every agent needs K_i >= 1");
    std::vector<double> t;
    for (int s = 0; s <= samples[i]; ++s) {
      t.push_back(epsilon_closed_form(samples[i], split.per_agent[i], n, s));
    }
    tables.push_back(std::move(t));
  }
  const std::int64_t m = budget.value_or(n);
  const BudgetMaximum best = maximize_budgeted(tables, m);
  std::vector<double> eps;
  for (int i = 0; i < n; ++i) eps.push_back(tables[i][best.assignment[i]]);
  RiskCertificate cert =
      sum_certificate(CertificateMethod::kCorollary, split, best.assignment,
                      samples, eps, "budget_maximizer");
  cert.epsilon = std::min(1.0, best.value);
  cert.budget = m;
  return cert;
}

namespace {

// Terms a_j = C(j,s)/C(K,s) t^(j-s), j = s..4K, are log-concave in j. The
// sums are taken relative to the largest term, walking outward and stopping
// once a geometric bound on the remaining tail is negligible.
struct RootTerms {
  double log_peak = 0.0;
  double below = 0.0;  // sum_{j=s}^{K-1} a_j / a_peak
  double above = 0.0;  // sum_{j=K+1}^{4K} a_j / a_peak
  double at_k = 0.0;   // a_K / a_peak
};

RootTerms root_terms(int big_k, int s, double t) {
  const int last = 4 * big_k;
  const double log_t = std::log(t);
  const double log_ck = log_binomial(big_k, s);
  auto log_term = [&](int j) {
    return log_binomial(j, s) - log_ck + (j - s) * log_t;
  };
  int peak;
  if (t >= 1.0) {
    peak = last;
  } else {
    const double bound = s / (1.0 - t);
    peak = bound >= last ? last : std::max(s, static_cast<int>(bound));
  }
  RootTerms out;
  out.log_peak = log_term(peak);
  out.at_k = std::exp(log_term(big_k) - out.log_peak);
  auto add = [&](int j, double v) {
    if (j < big_k) {
      out.below += v;
    } else if (j > big_k) {
      out.above += v;
    }
  };
  add(peak, 1.0);
  constexpr double kTail = 1e-18;
  // Rightward: a_{j+1} = a_j * t (j+1) / (j+1-s).
  double cur = 1.0;
  for (int j = peak + 1; j <= last; ++j) {
    const double q = t * j / (j - s);
    cur *= q;
    add(j, cur);
    const double q_next = t * (j + 1.0) / (j + 1.0 - s);
    if (q_next < 1.0 && cur * q_next / (1.0 - q_next) <
                            kTail * (out.below + out.above + out.at_k)) {
      break;
    }
  }
  // Leftward: a_{j-1} = a_j * (j - s) / (t j).
  cur = 1.0;
  for (int j = peak - 1; j >= s; --j) {
    const double q = (j + 1.0 - s) / (t * (j + 1.0));
    cur *= q;
    add(j, cur);
    if (j > s) {
      const double q_next = (j - s) / (t * j);
      if (q_next < 1.0 && cur * q_next / (1.0 - q_next) <
                              kTail * (out.below + out.above + out.at_k)) {
        break;
      }
    }
  }
  return out;
}

void check_root_args(int samples, double beta_i, int n_agents, int s) {
  require(samples >= 1, "K_i must be >= 1");
  require(n_agents >= 1, "N must be >= 1");
  require(s >= 0 && s <= samples, "s must lie in [0, K_i]");
  check_beta(beta_i);
}

}  // namespace

const char* to_string(RootWeight w) {
  return w == RootWeight::kSamples ? "samples" : "agents";
}

RootWeight parse_root_weight(const std::string& name) {
  if (name == "samples") return RootWeight::kSamples;
  if (name == "agents") return RootWeight::kAgents;
  throw std::invalid_argument("unknown root weight: " + name);
}

double campi_polynomial(int samples, double beta_i, int n_agents, int s,
                        double t, RootWeight weight) {
  check_root_args(samples, beta_i, n_agents, s);
  require(t >= 0.0 && std::isfinite(t), "t must be finite and >= 0");
  const int divisor = weight == RootWeight::kSamples ? samples : n_agents;
  const double w_below = beta_i / (2.0 * divisor);
  const double w_above = beta_i / (6.0 * samples);
  if (s == samples) {
    // Only t^0 = 1 from the leading term; the first sum is empty.
    const RootTerms terms = t > 0.0 ? root_terms(samples, s, t) : RootTerms{};
    if (t == 0.0) return 1.0;
    return std::exp(terms.log_peak) * (terms.at_k - w_above * terms.above);
  }
  if (t == 0.0) return -w_below * std::exp(-log_binomial(samples, s));
  const RootTerms terms = root_terms(samples, s, t);
  const double rel =
      terms.at_k - w_below * terms.below - w_above * terms.above;
  const double log_scale = std::min(terms.log_peak, 700.0);
  return std::exp(log_scale) * rel;
}

PolynomialRoot solve_campi_polynomial(int samples, double beta_i, int n_agents,
                                 int s, RootWeight weight) {
  check_root_args(samples, beta_i, n_agents, s);
  PolynomialRoot out;
  if (s == samples) {
    out.t_lower = 0.0;
    out.epsilon_bar = 1.0;
    out.residual = 0.0;
    return out;
  }
  auto h = [&](double t) {
    return campi_polynomial(samples, beta_i, n_agents, s, t, weight);
  };
  const long cells = 64L * samples;
  double lo = 0.0, hi = 0.0;
  double h_hi = 0.0;
  long cell = -1;
  std::ostringstream trace;
  for (long m = 1; m <= cells; ++m) {
    const double t = static_cast<double>(m) / cells;
    const double v = h(t);
    if (v >= 0.0) {
      lo = static_cast<double>(m - 1) / cells;
      hi = t;
      h_hi = v;
      cell = m;
      break;
    }
    if (m == 1 || m == cells || m % (cells / 8 + 1) == 0) {
      trace << " h(" << t << ")=" << v;
    }
  }
  if (cell < 0) {
    throw NoRootError("no sign change of the root polynomial on (0,1] for K=" +
                      std::to_string(samples) + " s=" + std::to_string(s) +
                      "; scan:" + trace.str());
  }
  out.scan_cell = static_cast<int>(cell);
  double h_lo = h(lo);
  if (h_hi == 0.0) {
    lo = hi;
    h_lo = 0.0;
  }
  constexpr double kResidual = 1e-10;
  constexpr double kWidth = 1e-12;
  for (int it = 0; it < 400; ++it) {
    const bool narrow = hi - lo <= kWidth;
    if (narrow && (std::abs(h_lo) <= kResidual || std::abs(h_hi) <= kResidual)) {
      break;
    }
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = h(mid);
    if (v < 0.0) {
      lo = mid;
      h_lo = v;
    } else {
      hi = mid;
      h_hi = v;
    }
  }
  // Prefer the left end: it under-estimates the root, so 1 - t stays on the
  // conservative side.
  if (std::abs(h_lo) <= kResidual || std::abs(h_lo) <= std::abs(h_hi)) {
    out.t_lower = lo;
    out.residual = h_lo;
  } else {
    out.t_lower = hi;
    out.residual = h_hi;
  }
  out.epsilon_bar = clip01(1.0 - out.t_lower);
  return out;
}

}  // namespace coalisure
