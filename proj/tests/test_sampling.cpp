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

#include "coalisure/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace coalisure {
namespace {

DistributionSpec unit_box(int d) {
  DistributionSpec dist =
      DistributionSpec::uniform_box(Vector::Zero(d), Vector::Ones(d));
  validate(dist);
  return dist;
}

bool same_samples(const PrivateSamples& a, const PrivateSamples& b) {
  if (a.n_agents() != b.n_agents()) return false;
  for (int i = 0; i < a.n_agents(); ++i) {
    if (a.per_agent[i].rows() != b.per_agent[i].rows() ||
        a.per_agent[i].cols() != b.per_agent[i].cols()) {
      return false;
    }
    if (a.per_agent[i] != b.per_agent[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("sampling: private draws are regenerable bit for bit") {
  const DistributionSpec dist = unit_box(1);
  const PrivateSamples a = draw_private(dist, {3, 2}, 7);
  const PrivateSamples b = draw_private(dist, {3, 2}, 7);
  CHECK(a.total() == 5);
  CHECK(a.counts() == std::vector<int>{3, 2});
  CHECK(same_samples(a, b));
  const PrivateSamples c = draw_private(dist, {3, 2}, 8);
  CHECK_FALSE(same_samples(a, c));
  for (int i = 0; i < 2; ++i) {
    CHECK(a.per_agent[i].minCoeff() >= 0.0);
    CHECK(a.per_agent[i].maxCoeff() < 1.0);
  }
}

TEST_CASE("sampling: degenerate box is a point mass") {
  Vector c(2);
  c << 0.25, -3.0;
  DistributionSpec dist = DistributionSpec::uniform_box(c, c);
  validate(dist);
  CHECK(may_have_atoms(dist));
  CHECK_FALSE(may_have_atoms(unit_box(2)));
  const PrivateSamples s = draw_private(dist, {1, 1}, 3);
  for (int i = 0; i < 2; ++i) CHECK(s.sample(i, 0) == c);
  const Matrix fresh = draw_fresh(dist, 1, 9);
  REQUIRE(fresh.rows() == 1);
  CHECK(fresh.row(0).transpose() == c);
}

TEST_CASE("sampling: gaussian sample means obey the law of large numbers") {
  Vector mean(2);
  mean << 1.5, -2.0;
  Matrix cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  DistributionSpec dist = DistributionSpec::gaussian(mean, cov);
  validate(dist);
  const int k = 10000;
  const PrivateSamples s = draw_private(dist, {k, k}, 12345);
  for (int i = 0; i < 2; ++i) {
    const Vector m = s.per_agent[i].colwise().mean().transpose();
    for (int j = 0; j < 2; ++j) {
      const double sigma = std::sqrt(cov(j, j));
      CHECK(std::abs(m[j] - mean[j]) <= 4.0 * sigma / std::sqrt(double(k)));
    }
    // Sample covariance within a loose band.
    const Matrix centered = s.per_agent[i].rowwise() - m.transpose();
    const Matrix sc = centered.transpose() * centered / double(k - 1);
    CHECK((sc - cov).cwiseAbs().maxCoeff() < 0.15);
  }
}

TEST_CASE("sampling: fresh uniform draws pass a Kolmogorov-Smirnov check") {
  const DistributionSpec dist = unit_box(1);
  const int n = 100000;
  const Matrix fresh = draw_fresh(dist, n, 2024);
  std::vector<double> v(fresh.data(), fresh.data() + n);
  std::sort(v.begin(), v.end());
  double d = 0.0;
  for (int k = 0; k < n; ++k) {
    d = std::max(d, std::max((k + 1.0) / n - v[k], v[k] - double(k) / n));
  }
  CHECK(d < 0.01);
}

TEST_CASE("sampling: fresh draws need n >= 1 and use their own stream") {
  const DistributionSpec dist = unit_box(2);
  CHECK_THROWS_AS(draw_fresh(dist, 0, 1), std::invalid_argument);
  const PrivateSamples p = draw_private(dist, {4}, 99);
  const Matrix f = draw_fresh(dist, 4, 99);
  CHECK(p.per_agent[0] != f);
  for (int r = 0; r < 4; ++r) {
    CHECK(f.row(r).transpose() == fresh_sample(dist, 99, r));
  }
}

TEST_CASE("sampling: changing one agent's count leaves the others unchanged") {
  const DistributionSpec dist = unit_box(3);
  const PrivateSamples a = draw_private(dist, {5, 7, 2}, 31);
  const PrivateSamples b = draw_private(dist, {5, 20, 2}, 31);
  CHECK(a.per_agent[0] == b.per_agent[0]);
  CHECK(a.per_agent[2] == b.per_agent[2]);
  CHECK(a.per_agent[1] == b.per_agent[1].topRows(7));
}

TEST_CASE("sampling: mixtures draw from every component") {
  DistributionComponent low, high;
  low.kind = high.kind = ComponentKind::kUniformBox;
  low.lo = Vector::Constant(1, 0.0);
  low.hi = Vector::Constant(1, 1.0);
  high.lo = Vector::Constant(1, 10.0);
  high.hi = Vector::Constant(1, 11.0);
  DistributionSpec dist = DistributionSpec::mixture({low, high}, {0.25, 0.75});
  validate(dist);
  const Matrix f = draw_fresh(dist, 20000, 5);
  const double frac_high = (f.array() >= 10.0).cast<double>().mean();
  CHECK(std::abs(frac_high - 0.75) < 0.02);
}

TEST_CASE("sampling: invalid parameters are rejected") {
  CHECK_THROWS_AS(DistributionSpec::uniform_box(Vector::Ones(2), Vector::Zero(2)),
                  std::invalid_argument);

  Matrix cov(2, 2);
  cov << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(DistributionSpec::gaussian(Vector::Zero(2), cov),
                  std::invalid_argument);

  DistributionComponent c;
  c.lo = Vector::Zero(1);
  c.hi = Vector::Ones(1);
  CHECK_THROWS_AS(DistributionSpec::mixture({c, c}, {0.7, 0.7}),
                  std::invalid_argument);

  DistributionSpec raw{{c}, {1.0}};
  raw.components[0].hi = Vector::Constant(1, -1.0);
  CHECK_THROWS_AS(validate(raw), std::invalid_argument);

  CHECK_THROWS_AS(draw_private(unit_box(1), {2, 0}, 1), std::invalid_argument);
}

TEST_CASE("sampling: CSV round trips are exact") {
  Vector mean = Vector::Zero(3);
  DistributionSpec g = DistributionSpec::gaussian(mean, Matrix::Identity(3, 3));
  validate(g);
  const std::vector<PrivateSamples> cases = {
      draw_private(unit_box(1), {3, 2}, 7),
      draw_private(g, {4, 1, 6}, 1ULL << 63),
      draw_private(unit_box(5), {1, 1}, 0)};
  for (const PrivateSamples& s : cases) {
    std::stringstream buf;
    write_samples_csv(buf, s);
    const PrivateSamples back = read_samples_csv(buf);
    CHECK(same_samples(s, back));
  }
  std::stringstream bad("agent_id,sample_index,xi_1\n1,1,0.5\n1,3,0.5\n");
  CHECK_THROWS_AS(read_samples_csv(bad), std::invalid_argument);
}

}  // namespace coalisure
