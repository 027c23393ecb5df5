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

// Shared fixtures for the unit and acceptance tests.

#ifndef COALISURE_TESTS_TEST_SUPPORT_HPP_
#define COALISURE_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "coalisure/game.hpp"
#include "coalisure/sampling.hpp"
#include "coalisure/scenario_core.hpp"

namespace coalisure::testing {

// Affine game on d-dimensional uncertainty with random intercepts in
// [lo, hi] scaled by |S| and random slopes in [-1, 1].
inline GameSpec random_affine_game(int n, int d, double grand_value,
                                   std::mt19937_64& rng, double lo = 0.0,
                                   double hi = 1.0) {
  std::uniform_real_distribution<double> a(lo, hi);
  std::uniform_real_distribution<double> b(-1.0, 1.0);
  GameSpec spec;
  spec.n_agents = n;
  spec.grand_value = grand_value;
  spec.uncertainty_dim = d;
  spec.allowed = default_allowed(n);
  spec.value_model = ValueModel(d);
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    const Coalition s(mask);
    Vector slope(d);
    for (int j = 0; j < d; ++j) slope[j] = b(rng);
    spec.value_model.set_affine(s, a(rng) * s.size(), slope);
  }
  validate(spec);
  return spec;
}

inline DistributionSpec unit_box(int d) {
  return DistributionSpec::uniform_box(Vector::Zero(d), Vector::Ones(d));
}

// Core built directly from (coalition, bound) pairs.
inline ScenarioCoreDesc make_core(int n, double grand_value,
                                  const std::vector<std::pair<Coalition, double>>& b) {
  ScenarioCoreDesc core;
  core.n_agents = n;
  core.grand_value = grand_value;
  for (const auto& [s, v] : b) core.bounds.entries.push_back({s, v, std::nullopt});
  std::sort(core.bounds.entries.begin(), core.bounds.entries.end(),
            [](const BoundEntry& x, const BoundEntry& y) {
              return x.coalition < y.coalition;
            });
  return core;
}

// Polygon of a three-agent core in (x1, x2) coordinates, obtained by
// clipping a large square with every half-plane (x3 = u_N - x1 - x2).
inline std::vector<Vector> three_agent_polygon(const ScenarioCoreDesc& core,
                                               double box = 1e3) {
  using P = std::pair<double, double>;
  std::vector<P> poly = {{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  for (const BoundEntry& e : core.bounds.entries) {
    if (!std::isfinite(e.value)) continue;
    // a1 x1 + a2 x2 >= c.
    const double k3 = e.coalition.contains(2) ? 1.0 : 0.0;
    const double a1 = (e.coalition.contains(0) ? 1.0 : 0.0) - k3;
    const double a2 = (e.coalition.contains(1) ? 1.0 : 0.0) - k3;
    const double c = e.value - k3 * core.grand_value;
    std::vector<P> out;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const P p = poly[k];
      const P q = poly[(k + 1) % poly.size()];
      const double fp = a1 * p.first + a2 * p.second - c;
      const double fq = a1 * q.first + a2 * q.second - c;
      if (fp >= 0) out.push_back(p);
      if ((fp >= 0) != (fq >= 0)) {
        const double t = fp / (fp - fq);
        out.push_back({p.first + t * (q.first - p.first),
                       p.second + t * (q.second - p.second)});
      }
    }
    poly = std::move(out);
    if (poly.empty()) break;
  }
  std::vector<Vector> pts;
  for (const P& p : poly) {
    Vector x(3);
    x << p.first, p.second, core.grand_value - p.first - p.second;
    bool dup = false;
    for (const Vector& y : pts) dup = dup || (x - y).cwiseAbs().maxCoeff() < 1e-7;
    if (!dup) pts.push_back(x);
  }
  return pts;
}

// Optimal total slack for a fixed x: each sample pays its worst shortfall.
double total_slack(const GameSpec& spec, const PrivateSamples& samples,
                   const Vector& x) {
  double sum = 0.0;
  for (int i = 0; i < spec.n_agents; ++i) {
    for (int k = 0; k < samples.count(i); ++k) {
      double worst = 0.0;
      for (Coalition s : spec.allowed[i]) {
        worst = std::max(worst, coalition_value(spec.value_model, s,
                                                samples.sample(i, k)) -
                                    s.sum(x));
      }
      sum += worst;
    }
  }
  return sum;
}

// Minimum of total_slack over the efficiency plane by enumerating the
// vertices of the breakpoint arrangement (N = 2 or 3). Breakpoints are
// x(S) = u_S(xi) and ties x(T) - x(S) = u_T(xi) - u_S(xi) within a sample.
double arrangement_minimum(const GameSpec& spec, const PrivateSamples& samples) {
  const int n = spec.n_agents;
  struct Plane {
    Vector a;
    double c;
  };
  std::vector<Plane> planes;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < samples.count(i); ++k) {
      std::vector<Plane> own;
      for (Coalition s : spec.allowed[i]) {
        Vector a = Vector::Zero(n);
        for (int j : s.members()) a[j] = 1.0;
        own.push_back({a, coalition_value(spec.value_model, s,
                                          samples.sample(i, k))});
      }
      for (std::size_t p = 0; p < own.size(); ++p) {
        planes.push_back(own[p]);
        for (std::size_t q = p + 1; q < own.size(); ++q) {
          planes.push_back({own[q].a - own[p].a, own[q].c - own[p].c});
        }
      }
    }
  }
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const Matrix& m, const Vector& rhs) {
    Eigen::FullPivLU<Matrix> lu(m);
    if (lu.rank() < n) return;
    best = std::min(best, total_slack(spec, samples, lu.solve(rhs)));
  };
  for (std::size_t p = 0; p < planes.size(); ++p) {
    if (n == 2) {
      Matrix m(2, 2);
      m.row(0) = Vector::Ones(2).transpose();
      m.row(1) = planes[p].a.transpose();
      consider(m, Vector{{spec.grand_value, planes[p].c}});
      continue;
    }
    for (std::size_t q = p + 1; q < planes.size(); ++q) {
      Matrix m(3, 3);
      m.row(0) = Vector::Ones(3).transpose();
      m.row(1) = planes[p].a.transpose();
      m.row(2) = planes[q].a.transpose();
      consider(m, Vector{{spec.grand_value, planes[p].c, planes[q].c}});
    }
  }
  return best;
}


}  // namespace coalisure::testing

#endif  // COALISURE_TESTS_TEST_SUPPORT_HPP_
