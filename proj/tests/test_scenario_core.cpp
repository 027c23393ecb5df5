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

#include "coalisure/scenario_core.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "coalisure/errors.hpp"
#include "test_support.hpp"

namespace coalisure {
namespace {

using testing::make_core;
using testing::random_affine_game;
using testing::three_agent_polygon;
using testing::unit_box;

const Coalition c1 = Coalition::singleton(0);
const Coalition c2 = Coalition::singleton(1);

ScenarioCoreDesc interval_core() { return make_core(2, 10.0, {{c1, 5.0}, {c2, 3.0}}); }

Allocation alloc(std::initializer_list<double> v) {
  Allocation x(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (double a : v) x[k++] = a;
  return x;
}

PrivateSamples fixed_samples(std::vector<Matrix> per_agent) {
  PrivateSamples s;
  s.per_agent = std::move(per_agent);
  return s;
}

}  // namespace

TEST_CASE("scenario_core: tighten takes the max with a lexicographic witness") {
  GameSpec spec;
  spec.n_agents = 2;
  spec.grand_value = 1.0;
  spec.uncertainty_dim = 1;
  spec.allowed = default_allowed(2);
  spec.value_model = ValueModel(1);
  spec.value_model.set_affine(c1, 0.0, Vector::Ones(1));
  spec.value_model.set_affine(c2, 0.0, Vector::Zero(1));
  Matrix a1(2, 1), a2(1, 1);
  a1 << 0.2, 0.9;
  a2 << 0.5;
  const PrivateSamples s = fixed_samples({a1, a2});
  const TightenedBounds b = tighten(spec, s);
  CHECK(b.value(c1) == 0.9);
  REQUIRE(b.at(c1).witness.has_value());
  CHECK(*b.at(c1).witness == Witness{0, 1});
  // Constant zero for {2}: every sample ties, the first one wins.
  CHECK(b.value(c2) == 0.0);
  CHECK(*b.at(c2).witness == Witness{1, 0});
}

TEST_CASE("scenario_core: constant zero values give zero bounds") {
  std::mt19937_64 rng(1);
  GameSpec spec = random_affine_game(3, 2, 1.0, rng);
  for (Coalition s : enumerate_subcoalitions(spec)) {
    spec.value_model.set_affine(s, 0.0, Vector::Zero(2));
  }
  const PrivateSamples samples = draw_private(unit_box(2), {3, 4, 5}, 2);
  const TightenedBounds b = tighten(spec, samples);
  CHECK(b.entries.size() == 6);
  for (const auto& e : b.entries) CHECK(e.value == 0.0);
  const ScenarioCoreDesc core = build_core(spec, b);
  CHECK(core.grand_value == 1.0);
  CHECK(core.n_agents == 3);
}

TEST_CASE("scenario_core: tighten equals an exhaustive double loop") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const GameSpec spec = random_affine_game(3, 3, 5.0, rng);
    const PrivateSamples samples = draw_private(unit_box(3), {20, 20, 20}, trial);
    const TightenedBounds b = tighten(spec, samples);
    for (Coalition s : enumerate_subcoalitions(spec)) {
      double best = -std::numeric_limits<double>::infinity();
      for (int i : s.members()) {
        for (int k = 0; k < samples.count(i); ++k) {
          best = std::max(best, coalition_value(spec.value_model, s,
                                                samples.sample(i, k)));
        }
      }
      CHECK(b.value(s) == best);
    }
  }
}

TEST_CASE("scenario_core: restricted allowed sets exclude non-listing agents") {
  GameSpec spec;
  spec.n_agents = 3;
  spec.grand_value = 3.0;
  spec.uncertainty_dim = 1;
  spec.allowed = allowed_from_coalitions(3, {c1, c2, Coalition::singleton(2)});
  spec.value_model = ValueModel(1);
  for (int i = 0; i < 3; ++i) {
    spec.value_model.set_affine(Coalition::singleton(i), 0.0, Vector::Ones(1));
  }
  Matrix a(1, 1), b(1, 1), c(1, 1);
  a << 0.1;
  b << 0.7;
  c << 0.4;
  const TightenedBounds t = tighten(spec, fixed_samples({a, b, c}));
  CHECK(t.entries.size() == 3);
  CHECK(t.value(c1) == 0.1);
  CHECK(t.value(c2) == 0.7);
}

TEST_CASE("scenario_core: membership on the interval core") {
  const ScenarioCoreDesc core = interval_core();
  CHECK(contains(core, alloc({6, 4})));
  CHECK_FALSE(contains(core, alloc({4, 6})));
  CHECK_FALSE(contains(core, alloc({6, 5})));
}

TEST_CASE("scenario_core: emptiness examples") {
  CHECK_FALSE(is_empty(interval_core()));
  CHECK(is_empty(make_core(2, 4.0, {{c1, 3.0}, {c2, 3.0}})));
}

TEST_CASE("scenario_core: coalition minima and vertices of the interval core") {
  const ScenarioCoreDesc core = interval_core();
  CHECK(coalition_min(core, c1) == doctest::Approx(5.0));
  CHECK(coalition_min(core, c2) == doctest::Approx(3.0));
  auto v = vertices(core);
  REQUIRE(v.size() == 2);
  std::sort(v.begin(), v.end(), [](const Allocation& a, const Allocation& b) {
    return a[0] < b[0];
  });
  CHECK(v[0][0] == doctest::Approx(5.0));
  CHECK(v[0][1] == doctest::Approx(5.0));
  CHECK(v[1][0] == doctest::Approx(7.0));
  CHECK(v[1][1] == doctest::Approx(3.0));

  const ScenarioCoreDesc empty = make_core(2, 4.0, {{c1, 3.0}, {c2, 3.0}});
  CHECK(vertices(empty).empty());
  CHECK_THROWS_AS(coalition_min(empty, c1), EmptyCoreError);
}

TEST_CASE("scenario_core: vertex guard") {
  ScenarioCoreDesc big;
  big.n_agents = kMaxVertexAgents + 1;
  CHECK_THROWS_AS(vertices(big), std::invalid_argument);
}

TEST_CASE("scenario_core: is_empty agrees with grid search over the simplex") {
  // Bounds and u_N on a 0.25 grid put every vertex on the grid, so the grid
  // search is exact.
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> q(0, 12);
  int empties = 0;
  int nonempties = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + trial % 2;
    const double grand = 0.25 * (q(rng) + (n == 3 ? 10 : 4));
    std::vector<std::pair<Coalition, double>> b;
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      b.push_back({Coalition(mask), 0.25 * q(rng) * Coalition(mask).size() / 2.0});
    }
    const ScenarioCoreDesc core = make_core(n, grand, b);
    bool found = false;
    const int steps = 160;
    for (int i1 = 0; i1 <= steps && !found; ++i1) {
      const double x1 = -10.0 + 0.125 * i1;
      if (n == 2) {
        found = contains(core, alloc({x1, grand - x1}));
        continue;
      }
      for (int i2 = 0; i2 <= steps && !found; ++i2) {
        const double x2 = -10.0 + 0.125 * i2;
        found = contains(core, alloc({x1, x2, grand - x1 - x2}));
      }
    }
    CHECK(is_empty(core) == !found);
    (found ? nonempties : empties)++;
  }
  CHECK(empties > 10);
  CHECK(nonempties > 10);
}

TEST_CASE("scenario_core: coalition_min and vertices match polygon clipping") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; checked < 100; ++trial) {
    const GameSpec spec = random_affine_game(3, 2, 6.0, rng);
    const PrivateSamples samples = draw_private(unit_box(2), {4, 4, 4}, trial);
    const ScenarioCoreDesc core = build_core(spec, tighten(spec, samples));
    const auto poly = three_agent_polygon(core);
    CHECK(is_empty(core) == poly.empty());
    if (poly.empty()) continue;
    ++checked;
    for (Coalition s : enumerate_subcoalitions(spec)) {
      double oracle = std::numeric_limits<double>::infinity();
      for (const Vector& p : poly) oracle = std::min(oracle, s.sum(p));
      const double m = coalition_min(core, s);
      CHECK(std::abs(m - oracle) <= 1e-7);
      CHECK(m >= core.bounds.value(s) - 1e-9);
    }
    const auto verts = vertices(core);
    CHECK(verts.size() == poly.size());
    for (const Allocation& v : verts) CHECK(contains(core, v, 1e-7));
  }
}

TEST_CASE("scenario_core: adding samples never enlarges the core") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-2.0, 8.0);
  for (int trial = 0; trial < 30; ++trial) {
    const GameSpec spec = random_affine_game(3, 2, 6.0, rng);
    const PrivateSamples more = draw_private(unit_box(2), {8, 8, 8}, trial);
    PrivateSamples fewer = more;
    const int agent = trial % 3;
    fewer.per_agent[agent] = more.per_agent[agent].topRows(3);
    const ScenarioCoreDesc big = build_core(spec, tighten(spec, fewer));
    const ScenarioCoreDesc small = build_core(spec, tighten(spec, more));
    for (std::size_t k = 0; k < big.bounds.entries.size(); ++k) {
      CHECK(small.bounds.entries[k].value >= big.bounds.entries[k].value);
    }
    for (int p = 0; p < 200; ++p) {
      Allocation x(3);
      x << u(rng), u(rng), 0.0;
      x[2] = spec.grand_value - x[0] - x[1];
      if (contains(small, x)) CHECK(contains(big, x));
    }
  }
}

TEST_CASE("scenario_core: witness samples alone reproduce the bounds") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const GameSpec spec = random_affine_game(3, 3, 6.0, rng);
    const PrivateSamples samples = draw_private(unit_box(3), {6, 5, 7}, trial);
    const TightenedBounds full = tighten(spec, samples);
    SampleSelection keep = select_none(samples);
    for (const auto& e : full.entries) keep[e.witness->agent][e.witness->sample] = 1;
    const TightenedBounds again = tighten_selected(spec, samples, keep);
    for (std::size_t k = 0; k < full.entries.size(); ++k) {
      CHECK(again.entries[k].value == full.entries[k].value);
      CHECK(*again.entries[k].witness == *full.entries[k].witness);
    }
  }
}

TEST_CASE("scenario_core: lexmin allocation is the lexicographically smallest") {
  const Allocation x = lexmin_allocation(interval_core());
  CHECK(x[0] == doctest::Approx(5.0));
  CHECK(x[1] == doctest::Approx(5.0));
  CHECK_THROWS_AS(lexmin_allocation(make_core(2, 4.0, {{c1, 3.0}, {c2, 3.0}})),
                  EmptyCoreError);
}

TEST_CASE("scenario_core: same_core compares canonical bounds") {
  // {1,2} >= 1 is implied by the singletons.
  const Coalition c12 = Coalition::from_members({0, 1});
  const Coalition c3 = Coalition::singleton(2);
  const ScenarioCoreDesc a = make_core(
      3, 10.0, {{c1, 2.0}, {c2, 2.0}, {c3, 2.0}, {c12, 1.0}});
  const ScenarioCoreDesc b = make_core(
      3, 10.0, {{c1, 2.0}, {c2, 2.0}, {c3, 2.0}, {c12, 3.5}});
  const ScenarioCoreDesc c = make_core(
      3, 10.0, {{c1, 2.0}, {c2, 2.0}, {c3, 2.0}, {c12, 4.5}});
  CHECK(same_core(a, b));
  CHECK_FALSE(same_core(a, c));
}

}  // namespace coalisure
