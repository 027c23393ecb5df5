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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace coalisure {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector indicator(Coalition s, int n) {
  Vector row = Vector::Zero(n);
  for (int i : s.members()) row[i] = 1.0;
  return row;
}

bool allowed_for(const GameSpec& spec, int agent, Coalition s) {
  const auto& list = spec.allowed[agent];
  return std::binary_search(list.begin(), list.end(), s);
}

void check_samples(const GameSpec& spec, const PrivateSamples& samples) {
  if (samples.n_agents() != spec.n_agents) {
    throw std::invalid_argument("samples cover " +
                                std::to_string(samples.n_agents()) +
                                " agents, game has " +
                                std::to_string(spec.n_agents));
  }
  if (samples.dim() != spec.uncertainty_dim) {
    throw std::invalid_argument("sample dimension does not match the game");
  }
}

TightenedBounds tighten_impl(const GameSpec& spec,
                             const PrivateSamples& samples,
                             const SampleSelection* selection) {
  check_samples(spec, samples);
  TightenedBounds out;
  for (Coalition s : enumerate_subcoalitions(spec)) {
    BoundEntry entry{s, -kInf, std::nullopt};
    bool any_member = false;
    for (int i : s.members()) {
      if (!allowed_for(spec, i, s)) continue;
      if (samples.count(i) < 1) continue;
      any_member = true;
      for (int k = 0; k < samples.count(i); ++k) {
        if (selection && !(*selection)[i][k]) continue;
        const double v =
            coalition_value(spec.value_model, s, samples.sample(i, k));
        if (!entry.witness || v > entry.value) {
          entry.value = v;
          entry.witness = Witness{i, k};
        }
      }
    }
    if (!any_member) {
      throw std::invalid_argument("no member of " + s.to_string() +
                                  " holds samples for it");
    }
    out.entries.push_back(entry);
  }
  return out;
}

}  // namespace

const BoundEntry& TightenedBounds::at(Coalition s) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), s,
      [](const BoundEntry& e, Coalition c) { return e.coalition < c; });
  if (it == entries.end() || it->coalition != s) {
    throw std::invalid_argument("no bound for coalition " + s.to_string());
  }
  return *it;
}

SampleSelection select_all(const PrivateSamples& samples) {
  SampleSelection sel;
  for (int i = 0; i < samples.n_agents(); ++i) {
    sel.emplace_back(samples.count(i), 1);
  }
  return sel;
}

SampleSelection select_none(const PrivateSamples& samples) {
  SampleSelection sel;
  for (int i = 0; i < samples.n_agents(); ++i) {
    sel.emplace_back(samples.count(i), 0);
  }
  return sel;
}

std::vector<AgentBound> agent_bounds(const GameSpec& spec,
                                     const PrivateSamples& samples, int agent,
                                     const std::vector<char>* keep) {
  check_samples(spec, samples);
  std::vector<AgentBound> out;
  for (Coalition s : spec.allowed[agent]) {
    AgentBound b{s, -kInf, -1};
    for (int k = 0; k < samples.count(agent); ++k) {
      if (keep && !(*keep)[k]) continue;
      const double v =
          coalition_value(spec.value_model, s, samples.sample(agent, k));
      if (b.sample < 0 || v > b.value) {
        b.value = v;
        b.sample = k;
      }
    }
    out.push_back(b);
  }
  return out;
}

TightenedBounds tighten(const GameSpec& spec, const PrivateSamples& samples) {
  return tighten_impl(spec, samples, nullptr);
}

TightenedBounds tighten_selected(const GameSpec& spec,
                                 const PrivateSamples& samples,
                                 const SampleSelection& selection) {
  if (static_cast<int>(selection.size()) != samples.n_agents()) {
    throw std::invalid_argument("selection does not match samples");
  }
  for (int i = 0; i < samples.n_agents(); ++i) {
    if (static_cast<int>(selection[i].size()) != samples.count(i)) {
      throw std::invalid_argument("selection does not match samples");
    }
  }
  return tighten_impl(spec, samples, &selection);
}

ScenarioCoreDesc build_core(const GameSpec& spec, TightenedBounds bounds) {
  return ScenarioCoreDesc{spec.n_agents, spec.grand_value, std::move(bounds)};
}

bool contains(const ScenarioCoreDesc& core, const Allocation& x, double tol) {
  if (x.size() != core.n_agents) {
    throw std::invalid_argument("allocation has wrong length");
  }
  if (std::abs(x.sum() - core.grand_value) > tol) return false;
  for (const auto& e : core.bounds.entries) {
    if (e.coalition.sum(x) < e.value - tol) return false;
  }
  return true;
}

Lp core_program(const ScenarioCoreDesc& core) {
  const int n = core.n_agents;
  Lp lp(n);
  lp.add_equality(Vector::Ones(n), core.grand_value);
  for (const auto& e : core.bounds.entries) {
    if (std::isfinite(e.value)) {
      lp.add_inequality(indicator(e.coalition, n), e.value);
    }
  }
  return lp;
}

bool is_empty(const ScenarioCoreDesc& core) {
  return feasible(core_program(core)).status == LpStatus::kInfeasible;
}

double coalition_min(const ScenarioCoreDesc& core, Coalition s) {
  Lp lp = core_program(core);
  lp.objective = indicator(s, core.n_agents);
  const LpResult res = solve(lp);
  switch (res.status) {
    case LpStatus::kInfeasible: throw EmptyCoreError();
    case LpStatus::kUnbounded: return -kInf;
    case LpStatus::kOptimal: break;
  }
  return res.objective_value;
}

std::vector<double> canonical_bounds(const ScenarioCoreDesc& core) {
  std::vector<double> out;
  out.reserve(core.bounds.entries.size());
  for (const auto& e : core.bounds.entries) {
    out.push_back(coalition_min(core, e.coalition));
  }
  return out;
}

bool same_core(const ScenarioCoreDesc& a, const ScenarioCoreDesc& b,
               double tol) {
  if (a.n_agents != b.n_agents || a.grand_value != b.grand_value ||
      a.bounds.entries.size() != b.bounds.entries.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.bounds.entries.size(); ++k) {
    if (a.bounds.entries[k].coalition != b.bounds.entries[k].coalition) {
      return false;
    }
  }
  const bool empty_a = is_empty(a);
  const bool empty_b = is_empty(b);
  if (empty_a || empty_b) return empty_a == empty_b;
  const auto ca = canonical_bounds(a);
  const auto cb = canonical_bounds(b);
  for (std::size_t k = 0; k < ca.size(); ++k) {
    if (std::isinf(ca[k]) || std::isinf(cb[k])) {
      if (ca[k] != cb[k]) return false;
      continue;
    }
    if (std::abs(ca[k] - cb[k]) > tol * (1.0 + std::abs(ca[k]))) return false;
  }
  return true;
}

std::vector<Allocation> vertices(const ScenarioCoreDesc& core) {
  const int n = core.n_agents;
  if (n > kMaxVertexAgents) {
    throw std::invalid_argument("vertex enumeration is limited to " +
                                std::to_string(kMaxVertexAgents) + " agents");
  }
  std::vector<const BoundEntry*> rows;
  for (const auto& e : core.bounds.entries) {
    if (std::isfinite(e.value)) rows.push_back(&e);
  }
  std::vector<Allocation> found;
  const int need = n - 1;
  std::vector<int> pick;
  double scale = std::abs(core.grand_value);
  for (const auto* e : rows) scale = std::max(scale, std::abs(e->value));
  const double feas_tol = 1e-9 * (1.0 + scale);

  std::function<void(int)> recurse = [&](int start) {
    if (static_cast<int>(pick.size()) == need) {
      Matrix a(n, n);
      Vector b(n);
      a.row(0).setOnes();
      b[0] = core.grand_value;
      for (int r = 0; r < need; ++r) {
        a.row(r + 1) = indicator(rows[pick[r]]->coalition, n).transpose();
        b[r + 1] = rows[pick[r]]->value;
      }
      Eigen::FullPivLU<Matrix> lu(a);
      if (lu.rank() < n) return;
      const Allocation x = lu.solve(b);
      if (!contains(core, x, feas_tol)) return;
      for (const auto& v : found) {
        if ((v - x).cwiseAbs().maxCoeff() <= 1e-7) return;
      }
      found.push_back(x);
      return;
    }
    for (int r = start; r < static_cast<int>(rows.size()); ++r) {
      pick.push_back(r);
      recurse(r + 1);
      pick.pop_back();
    }
  };
  recurse(0);
  return found;
}

Allocation lexmin_allocation(const ScenarioCoreDesc& core) {
  const int n = core.n_agents;
  const Lp lp = core_program(core);
  std::vector<Vector> objectives;
  for (int i = 0; i < n; ++i) objectives.push_back(Vector::Unit(n, i));
  const LpResult res = solve_lexicographic(lp, objectives);
  if (res.status == LpStatus::kInfeasible) throw EmptyCoreError();
  if (res.status == LpStatus::kUnbounded) {
    throw std::runtime_error("core is unbounded; no lexicographic minimum");
  }
  return res.solution;
}

}  // namespace coalisure
