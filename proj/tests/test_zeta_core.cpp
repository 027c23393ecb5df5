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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "coalisure/errors.hpp"
#include "test_support.hpp"

namespace coalisure {
namespace {

GameSpec constant_game(int n, double grand,
                       const std::vector<std::pair<Coalition, double>>& values) {
  GameSpec spec;
  spec.n_agents = n;
  spec.grand_value = grand;
  spec.uncertainty_dim = 1;
  spec.allowed = default_allowed(n);
  spec.value_model = ValueModel(1);
  for (const auto& [s, v] : values) spec.value_model.set_affine(s, v, Vector::Zero(1));
  validate(spec);
  return spec;
}

PrivateSamples zero_samples(const std::vector<int>& counts) {
  PrivateSamples out;
  for (int k : counts) out.per_agent.push_back(Matrix::Zero(k, 1));
  return out;
}

}  // namespace

TEST_CASE("zeta: two agents with one sample each") {
  const GameSpec spec = constant_game(
      2, 4.0, {{Coalition::singleton(0), 3.0}, {Coalition::singleton(1), 3.0}});
  const ZetaSolution sol = solve_zeta_program(spec, zero_samples({1, 1}));
  CHECK(sol.objective == doctest::Approx(2.0));
  CHECK(sol.x_star[0] == doctest::Approx(1.0));
  CHECK(sol.x_star[1] == doctest::Approx(3.0));
  CHECK(sol.zeta[0][0] == doctest::Approx(2.0));
  CHECK(sol.zeta[1][0] == doctest::Approx(0.0));
  CHECK(sol.s_star == std::vector<int>{1, 0});
  CHECK(sol.s_support == std::vector<int>{1, 1});
  CHECK(sol.zeta_bar[0] == doctest::Approx(2.0));
}

TEST_CASE("zeta: nonempty core gives zero objective") {
  const GameSpec spec = constant_game(
      2, 4.0, {{Coalition::singleton(0), 1.0}, {Coalition::singleton(1), 1.5}});
  const ZetaSolution sol = solve_zeta_program(spec, zero_samples({3, 2}));
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.s_star == std::vector<int>{0, 0});
  // Lexicographic tie break pins x_1 to its lower bound.
  CHECK(sol.x_star[0] == doctest::Approx(1.0));
}

TEST_CASE("zeta: objective matches the arrangement oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 2;
    const int d = 2;
    const double grand = trial % 3 == 0 ? 0.5 * n : 1.2 * n;
    const GameSpec spec = testing::random_affine_game(n, d, grand, rng);
    std::vector<int> counts(n);
    for (int i = 0; i < n; ++i) counts[i] = 1 + (trial + i) % 4;
    const PrivateSamples samples =
        draw_private(testing::unit_box(d), counts, 1000 + trial);
    const ZetaSolution sol = solve_zeta_program(spec, samples);
    const double oracle = testing::arrangement_minimum(spec, samples);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-7));
    CHECK(testing::total_slack(spec, samples, sol.x_star) ==
          doctest::Approx(sol.objective).epsilon(1e-7));
    CHECK(sol.x_star.sum() == doctest::Approx(grand));
    const ScenarioCoreDesc core = build_core(spec, tighten(spec, samples));
    CHECK((sol.objective <= 1e-9) == !is_empty(core));
    CHECK(zeta_membership(spec, agent_bound_table(spec, samples), sol.zeta_bar,
                          sol.x_star, 1e-7));
    for (int i = 0; i < n; ++i) {
      CHECK(sol.s_support[i] >= sol.s_star[i]);
      CHECK(sol.s_star_sensitivity[i] >= sol.s_star[i]);
    }
  }
}

TEST_CASE("zeta: solutions are deterministic") {
  std::mt19937_64 rng(4);
  const GameSpec spec = testing::random_affine_game(3, 3, 1.0, rng);
  const PrivateSamples samples = draw_private(testing::unit_box(3), {6, 5, 4}, 77);
  const ZetaSolution a = solve_zeta_program(spec, samples);
  const ZetaSolution b = solve_zeta_program(spec, samples);
  CHECK(a.x_star == b.x_star);
  for (int i = 0; i < 3; ++i) CHECK(a.zeta[i] == b.zeta[i]);
  CHECK(a.s_star == b.s_star);
}

TEST_CASE("zeta: complexity counts use a strict threshold") {
  ZetaSolution sol;
  sol.zeta = {Vector{{0.0, 1e-7, 2e-7}}, Vector{{5.0}}};
  CHECK(complexity_counts(sol, 1e-7) == std::vector<int>{1, 1});
  CHECK(complexity_counts(sol, 1e-8) == std::vector<int>{2, 1});
  CHECK(complexity_counts(sol, 10.0) == std::vector<int>{0, 0});
}

TEST_CASE("zeta: per-agent slack form") {
  const GameSpec spec = constant_game(
      2, 4.0, {{Coalition::singleton(0), 3.0}, {Coalition::singleton(1), 3.0}});
  const ZetaSolution sol =
      solve_zeta_program(spec, zero_samples({2, 1}), {SlackForm::kPerAgent});
  REQUIRE(sol.zeta[0].size() == 1);
  // Weighted by sample counts, the cheaper agent absorbs the shortfall.
  CHECK(sol.zeta[1][0] == doctest::Approx(2.0));
  CHECK(sol.zeta[0][0] == doctest::Approx(0.0));
  CHECK(sol.objective == doctest::Approx(2.0));
}

TEST_CASE("zeta: certificate") {
  const BetaSplit split = BetaSplit::equal(0.1, 2);
  const RiskCertificate full = zeta_certificate(split, {10, 0}, {10, 10});
  CHECK(full.epsilon == 1.0);
  CHECK(full.agents[0].epsilon == 1.0);
  REQUIRE(full.root_weight.has_value());
  CHECK(*full.root_weight == "samples");
  double prev = -1.0;
  for (int s = 0; s <= 30; ++s) {
    const RiskCertificate c = zeta_certificate(split, {s, 0}, {30, 30});
    CHECK(c.epsilon >= prev);
    CHECK(c.epsilon <= 1.0);
    CHECK(c.epsilon == doctest::Approx(std::min(
                           1.0, solve_campi_polynomial(30, 0.05, 2, s).epsilon_bar +
                                    solve_campi_polynomial(30, 0.05, 2, 0).epsilon_bar)));
    prev = c.epsilon;
  }
  const RiskCertificate atoms = zeta_certificate(split, {0, 0}, {30, 30}, false);
  CHECK_FALSE(atoms.warnings.empty());
  CHECK_THROWS_AS(zeta_certificate(split, {31, 0}, {30, 30}), std::invalid_argument);
  CHECK_THROWS_AS(zeta_certificate(split, {0, 0}, {100, 100}, true, RootWeight::kAgents)
                      .epsilon,
                  NoRootError);
}

TEST_CASE("zeta: membership") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const GameSpec spec = testing::random_affine_game(3, 2, 1.5, rng);
    const PrivateSamples samples =
        draw_private(testing::unit_box(2), {4, 4, 4}, 500 + trial);
    const ScenarioCoreDesc core = build_core(spec, tighten(spec, samples));
    const AgentBoundTable table = agent_bound_table(spec, samples);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    for (int m = 0; m < 50; ++m) {
      Vector x(3);
      x << u(rng), u(rng), 0.0;
      x[2] = 1.5 - x[0] - x[1];
      CHECK(zeta_membership(spec, table, {0.0, 0.0, 0.0}, x) == contains(core, x));
      CHECK(zeta_membership(spec, table, {1e6, 1e6, 1e6}, x));
    }
    Vector off(3);
    off << 0.0, 0.0, 0.0;
    CHECK_FALSE(zeta_membership(spec, table, {1e6, 1e6, 1e6}, off));
  }
}

}  // namespace coalisure
