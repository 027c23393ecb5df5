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

#ifndef COALISURE_SAMPLING_HPP_
#define COALISURE_SAMPLING_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "coalisure/game.hpp"

namespace coalisure {

// Stateless 64-bit mixer (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

// Key for the stream of a single draw; distinct tags keep private, fresh and
// trial streams disjoint.
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag,
                         std::uint64_t stream, std::uint64_t index);

inline constexpr std::uint64_t kPrivateTag = 0x70726976ULL;  // "priv"
inline constexpr std::uint64_t kFreshTag = 0x66726573ULL;    // "fres"
inline constexpr std::uint64_t kTrialTag = 0x7472696CULL;    // "tril"

// Counter-based generator seeded by a derived key. Satisfies
// UniformRandomBitGenerator so the <random> distributions apply.
class CounterEngine {
 public:
  using result_type = std::uint64_t;
  explicit CounterEngine(std::uint64_t key) : key_(key) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return mix64(key_ + (++counter_) * kGolden); }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum class ComponentKind { kUniformBox, kGaussian };

struct DistributionComponent {
  ComponentKind kind = ComponentKind::kUniformBox;
  Vector lo, hi;    // uniform box
  Vector mean;      // gaussian
  Matrix cov;       // gaussian
  Matrix factor;    // gaussian: cov = factor * factor^T, filled by validate
};

// Mixture of uniform boxes and gaussians; a single component with weight 1
// is the plain distribution.
struct DistributionSpec {
  std::vector<DistributionComponent> components;
  std::vector<double> weights;

  int dim() const;
  static DistributionSpec uniform_box(Vector lo, Vector hi);
  static DistributionSpec gaussian(Vector mean, Matrix cov);
  static DistributionSpec mixture(std::vector<DistributionComponent> parts,
                                  std::vector<double> weights);
};

// Checks parameters and computes gaussian factors. Throws
// std::invalid_argument on bad parameters.
void validate(DistributionSpec& dist);

// True when some component puts mass on a lower-dimensional set (a collapsed
// box side or a singular covariance). Such laws may break the
// non-accumulation assumption behind the zeta-core certificate.
bool may_have_atoms(const DistributionSpec& dist);

// One draw from `dist` using the stream identified by `key`.
Vector sample_with_key(const DistributionSpec& dist, std::uint64_t key);

struct PrivateSamples {
  // per_agent[i] is K_i x d, one row per draw.
  std::vector<Matrix> per_agent;
  std::uint64_t master_seed = 0;

  int n_agents() const { return static_cast<int>(per_agent.size()); }
  int count(int agent) const {
    return static_cast<int>(per_agent[agent].rows());
  }
  std::vector<int> counts() const;
  int total() const;
  int dim() const;
  Vector sample(int agent, int k) const {
    return per_agent[agent].row(k).transpose();
  }
};

// Agent i's k-th draw uses key derive_key(master_seed, kPrivateTag, i, k), so
// streams do not depend on other agents' counts or on generation order.
PrivateSamples draw_private(const DistributionSpec& dist,
                            const std::vector<int>& counts,
                            std::uint64_t master_seed);

// n i.i.d. draws on the fresh stream of `seed`; row r is draw r.
Matrix draw_fresh(const DistributionSpec& dist, int n, std::uint64_t seed);

// Draw r of the fresh stream without materializing the whole batch.
Vector fresh_sample(const DistributionSpec& dist, std::uint64_t seed,
                    std::uint64_t r);

// CSV with header agent_id,sample_index,xi_1..xi_d (1-based ids).
void write_samples_csv(std::ostream& out, const PrivateSamples& samples);
PrivateSamples read_samples_csv(std::istream& in);

}  // namespace coalisure

#endif  // COALISURE_SAMPLING_HPP_
