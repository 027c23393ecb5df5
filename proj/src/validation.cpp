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

#include "coalisure/validation.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <stdexcept>
#include <utility>

#include "coalisure/errors.hpp"
#include "coalisure/parallel.hpp"

namespace coalisure {
namespace {

// Value functions of the enumerated coalitions, resolved once.
class CompiledValues {
 public:
  explicit CompiledValues(const GameSpec& spec)
      : coalitions_(enumerate_subcoalitions(spec)) {
    pieces_.reserve(coalitions_.size());
    for (Coalition s : coalitions_) {
      pieces_.push_back(&spec.value_model.pieces(s));
    }
  }

  int size() const { return static_cast<int>(coalitions_.size()); }
  Coalition coalition(int j) const { return coalitions_[j]; }

  double value(int j, const Vector& xi) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const AffinePiece& p : *pieces_[j]) {
      best = std::max(best, p.intercept + p.slope.dot(xi));
    }
    return best;
  }

 private:
  std::vector<Coalition> coalitions_;
  std::vector<const std::vector<AffinePiece>*> pieces_;
};

// Counts fresh draws for which some coalition value strictly exceeds its
// threshold.
ViolationEstimate count_exceedances(const CompiledValues& values,
                                    const std::vector<double>& thresholds,
                                    const DistributionSpec& dist, long n,
                                    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("instability estimate needs n >= 1");
  long hits = 0;
  for (long r = 0; r < n; ++r) {
    const Vector xi = fresh_sample(dist, seed, static_cast<std::uint64_t>(r));
    for (int j = 0; j < values.size(); ++j) {
      if (thresholds[j] < values.value(j, xi)) {
        ++hits;
        break;
      }
    }
  }
  ViolationEstimate est = clopper_pearson(hits, n);
  est.seed = seed;
  return est;
}

}  // namespace

ViolationEstimate clopper_pearson(long violations, long n, double level) {
  if (n < 1 || violations < 0 || violations > n) {
    throw std::invalid_argument("clopper_pearson: need 0 <= k <= n, n >= 1");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("clopper_pearson: level must be in (0,1)");
  }
  const double alpha = 1.0 - level;
  const double k = static_cast<double>(violations);
  const double nn = static_cast<double>(n);
  ViolationEstimate est;
  est.n_samples = n;
  est.violations = violations;
  est.level = level;
  est.p_hat = k / nn;
  est.lo = violations == 0
               ? 0.0
               : boost::math::ibeta_inv(k, nn - k + 1.0, alpha / 2.0);
  est.hi = violations == n
               ? 1.0
               : boost::math::ibeta_inv(k + 1.0, nn - k, 1.0 - alpha / 2.0);
  est.lo = std::min(est.lo, est.p_hat);
  est.hi = std::max(est.hi, est.p_hat);
  return est;
}

ViolationEstimate estimate_allocation_instability(const GameSpec& spec,
                                                  const Allocation& x,
                                                  const DistributionSpec& dist,
                                                  long n, std::uint64_t seed) {
  if (x.size() != spec.n_agents) {
    throw std::invalid_argument("allocation length does not match the game");
  }
  const CompiledValues values(spec);
  std::vector<double> sums(values.size());
  for (int j = 0; j < values.size(); ++j) sums[j] = values.coalition(j).sum(x);
  return count_exceedances(values, sums, dist, n, seed);
}

ViolationEstimate estimate_core_instability(const GameSpec& spec,
                                            const ScenarioCoreDesc& core,
                                            const DistributionSpec& dist,
                                            long n, std::uint64_t seed) {
  if (is_empty(core)) throw EmptyCoreError();
  const CompiledValues values(spec);
  std::vector<double> mins(values.size());
  for (int j = 0; j < values.size(); ++j) {
    mins[j] = coalition_min(core, values.coalition(j));
  }
  return count_exceedances(values, mins, dist, n, seed);
}

BetaSplit make_split(const CoverageConfig& config) {
  switch (config.split_strategy) {
    case BetaStrategy::kEqual:
      return BetaSplit::equal(config.beta, config.game.n_agents);
    case BetaStrategy::kProportional:
      return BetaSplit::proportional(config.beta, config.counts);
    case BetaStrategy::kExplicit:
      return BetaSplit::explicit_split(config.explicit_split);
  }
  throw std::invalid_argument("unknown beta split strategy");
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return derive_key(seed, kTrialTag, 0, static_cast<std::uint64_t>(trial));
}

CertifiedArtifact certify(const CoverageConfig& config,
                          const PrivateSamples* samples) {
  const GameSpec& spec = config.game;
  const BetaSplit split = make_split(config);
  const std::vector<int> counts = samples ? samples->counts() : config.counts;
  const bool a_priori = config.method == CertificateMethod::kThm2 ||
                        config.method == CertificateMethod::kThm3 ||
                        config.method == CertificateMethod::kCorollary;
  if (!samples && !a_priori) {
    throw std::invalid_argument(std::string(to_string(config.method)) +
                                " needs private samples");
  }
  CertifiedArtifact out;
  auto core_of_samples = [&] {
    ScenarioCoreDesc core = build_core(spec, tighten(spec, *samples));
    if (is_empty(core)) throw EmptyCoreError();
    return core;
  };

  switch (config.method) {
    case CertificateMethod::kThm1: {
      out.core = core_of_samples();
      out.compression = compress_all(spec, *samples, config.compression);
      out.complexity = out.compression->cardinalities();
      out.certificate =
          a_posteriori_core_bound(split, out.complexity, counts);
      break;
    }
    case CertificateMethod::kThm2:
      if (samples) out.core = core_of_samples();
      out.certificate = a_priori_core_bound(split, counts, config.budget);
      break;
    case CertificateMethod::kThm3: {
      const int n = spec.n_agents;
      std::vector<double> eps(n);
      out.complexity.resize(n);
      for (int i = 0; i < n; ++i) {
        out.complexity[i] = support_rank(spec, i);
        eps[i] = config.support_rank_epsilon
                     ? *config.support_rank_epsilon / n
                     : epsilon_for_support_rank(counts[i], split.per_agent[i],
                                                out.complexity[i]);
      }
      out.certificate = a_priori_allocation_bound(eps, counts, out.complexity);
      if (samples) out.allocation = lexmin_allocation(core_of_samples());
      break;
    }
    case CertificateMethod::kThm4: {
      out.allocation = lexmin_allocation(core_of_samples());
      out.complexity = allocation_compression_sizes(spec, *samples);
      out.certificate =
          a_posteriori_allocation_bound(split, out.complexity, counts);
      break;
    }
    case CertificateMethod::kCorollary:
      out.certificate =
          a_priori_allocation_bound_corollary(split, counts, config.budget);
      if (samples) out.allocation = lexmin_allocation(core_of_samples());
      break;
    case CertificateMethod::kThm5: {
      out.zeta = solve_zeta_program(spec, *samples, config.zeta);
      out.allocation = out.zeta->x_star;
      const bool support =
          config.zeta.complexity == ZetaComplexity::kViolatedOrActive;
      out.complexity = support ? out.zeta->s_support : out.zeta->s_star;
      out.certificate = zeta_certificate(split, out.complexity, counts,
                                         !may_have_atoms(config.dist),
                                         config.zeta.root_weight);
      out.certificate.complexity_kind = to_string(config.zeta.complexity);
      if (!support && out.zeta->s_support != out.zeta->s_star) {
        out.certificate.warnings.push_back(
            "zero-slack samples are active at x*; the violated-or-active "
            "count is larger than the positive-slack count");
      }
      break;
    }
  }
  if (samples) out.certificate.seed = samples->master_seed;
  return out;
}

TrialRecord run_trial(const CoverageConfig& config, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = trial_seed(config.seed, trial);
  try {
    const PrivateSamples samples =
        draw_private(config.dist, config.counts, rec.seed);
    const CertifiedArtifact art = certify(config, &samples);
    // Private and fresh draws use distinct tags, so one seed serves both.
    const ViolationEstimate est =
        art.core ? estimate_core_instability(config.game, *art.core,
                                             config.dist, config.n_fresh,
                                             rec.seed)
                 : estimate_allocation_instability(config.game,
                                                   *art.allocation,
                                                   config.dist, config.n_fresh,
                                                   rec.seed);
    rec.complexity = art.complexity;
    rec.epsilon = art.certificate.epsilon;
    rec.p_hat = est.p_hat;
    rec.cp_lo = est.lo;
    rec.cp_hi = est.hi;
    rec.exceeded = est.lo > rec.epsilon;
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

CoverageReport coverage_experiment(const CoverageConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.n_fresh < 1) throw std::invalid_argument("n_fresh must be >= 1");
  if (!(config.beta > 0.0 && config.beta < 1.0)) {
    throw std::invalid_argument("beta must be in (0,1)");
  }
  validate(config.game);
  if (static_cast<int>(config.counts.size()) != config.game.n_agents) {
    throw std::invalid_argument("counts length does not match the game");
  }
  validate(make_split(config));

  CoverageReport report;
  report.method = config.method;
  report.beta = config.beta;
  report.n_trials = config.trials;
  report.n_fresh = config.n_fresh;
  report.seed = config.seed;
  report.compression_variant = config.compression.label();
  report.trials.resize(config.trials);
  parallel_for(config.trials, worker_count(config.threads),
               [&](int t) { report.trials[t] = run_trial(config, t); });
  for (const TrialRecord& rec : report.trials) {
    if (!rec.ok) continue;
    ++report.n_valid;
    if (rec.exceeded) ++report.n_exceeded;
  }
  report.exceedance_frequency =
      report.n_valid > 0
          ? static_cast<double>(report.n_exceeded) / report.n_valid
          : 0.0;
  const double b = config.beta;
  report.frequency_limit =
      b + 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(config.trials));
  return report;
}

}  // namespace coalisure
