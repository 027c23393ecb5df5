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

#include "coalisure/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace coalisure {

Coalition Coalition::from_members(const std::vector<int>& members) {
  std::uint32_t mask = 0;
  for (int i : members) {
    if (i < 0 || i >= kMaxAgents) {
      throw std::invalid_argument("agent index out of range: " +
                                  std::to_string(i));
    }
    mask |= 1u << i;
  }
  return Coalition(mask);
}

int Coalition::size() const { return std::popcount(mask_); }

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

double Coalition::sum(const Allocation& x) const {
  double total = 0.0;
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
    total += x[std::countr_zero(m)];
  }
  return total;
}

std::string Coalition::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i : members()) {
    if (!first) os << ',';
    os << i + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

void ValueModel::set_affine(Coalition s, double intercept, Vector slope) {
  set_max_affine(s, {AffinePiece{intercept, std::move(slope)}});
}

void ValueModel::set_max_affine(Coalition s, std::vector<AffinePiece> pieces) {
  if (pieces.empty()) {
    throw std::invalid_argument("value form for " + s.to_string() +
                                " has no pieces");
  }
  for (const auto& p : pieces) {
    if (p.slope.size() != dim_) {
      throw std::invalid_argument("slope length mismatch for coalition " +
                                  s.to_string());
    }
    if (!std::isfinite(p.intercept) || !p.slope.allFinite()) {
      throw std::invalid_argument("non-finite value form for " +
                                  s.to_string());
    }
  }
  forms_[s.mask()] = std::move(pieces);
}

const std::vector<AffinePiece>& ValueModel::pieces(Coalition s) const {
  auto it = forms_.find(s.mask());
  if (it == forms_.end()) {
    throw std::invalid_argument("value model has no form for coalition " +
                                s.to_string());
  }
  return it->second;
}

std::vector<std::vector<Coalition>> default_allowed(int n_agents) {
  if (n_agents < 2 || n_agents > kMaxAgents) {
    throw std::invalid_argument("agent count out of range");
  }
  std::vector<std::vector<Coalition>> allowed(n_agents);
  const std::uint32_t full = Coalition::grand(n_agents).mask();
  for (std::uint32_t m = 1; m < full; ++m) {
    for (int i = 0; i < n_agents; ++i) {
      if ((m >> i) & 1u) allowed[i].emplace_back(m);
    }
  }
  return allowed;
}

std::vector<std::vector<Coalition>> allowed_from_coalitions(
    int n_agents, const std::vector<Coalition>& coalitions) {
  std::set<Coalition> unique(coalitions.begin(), coalitions.end());
  std::vector<std::vector<Coalition>> allowed(n_agents);
  for (Coalition s : unique) {
    if (!s.is_subcoalition(n_agents)) {
      throw std::invalid_argument("not a proper subcoalition: " +
                                  s.to_string());
    }
    for (int i : s.members()) allowed[i].push_back(s);
  }
  return allowed;
}

void validate(const GameSpec& spec) {
  const int n = spec.n_agents;
  if (n < 2 || n > kMaxAgents) {
    throw std::invalid_argument("n_agents must be in [2, " +
                                std::to_string(kMaxAgents) + "]");
  }
  if (!std::isfinite(spec.grand_value)) {
    throw std::invalid_argument("grand_value must be finite");
  }
  if (spec.uncertainty_dim < 1) {
    throw std::invalid_argument("uncertainty_dim must be positive");
  }
  if (spec.value_model.uncertainty_dim() != spec.uncertainty_dim) {
    throw std::invalid_argument("value model dimension mismatch");
  }
  if (static_cast<int>(spec.allowed.size()) != n) {
    throw std::invalid_argument("allowed must list one entry per agent");
  }
  for (int i = 0; i < n; ++i) {
    const auto& list = spec.allowed[i];
    if (!std::is_sorted(list.begin(), list.end()) ||
        std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw std::invalid_argument("allowed[" + std::to_string(i + 1) +
                                  "] must be strictly ascending");
    }
    for (Coalition s : list) {
      if (!s.is_subcoalition(n) || !s.contains(i)) {
        throw std::invalid_argument("allowed[" + std::to_string(i + 1) +
                                    "] holds invalid coalition " +
                                    s.to_string());
      }
      for (int j : s.members()) {
        if (!std::binary_search(spec.allowed[j].begin(),
                                spec.allowed[j].end(), s)) {
          throw std::invalid_argument("allowed structure not closed: " +
                                      s.to_string() + " missing for agent " +
                                      std::to_string(j + 1));
        }
      }
      if (!spec.value_model.has(s)) {
        throw std::invalid_argument("value model has no form for coalition " +
                                    s.to_string());
      }
    }
  }
}

std::vector<Coalition> enumerate_subcoalitions(const GameSpec& spec) {
  std::set<Coalition> unique;
  for (const auto& list : spec.allowed) unique.insert(list.begin(), list.end());
  return {unique.begin(), unique.end()};
}

double coalition_value(const ValueModel& model, Coalition s,
                       const Vector& xi) {
  const auto& pieces = model.pieces(s);
  if (xi.size() != model.uncertainty_dim()) {
    throw std::invalid_argument("uncertainty vector has wrong length");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) {
    best = std::max(best, p.intercept + p.slope.dot(xi));
  }
  return best;
}

double excess(const GameSpec& spec, Coalition s, const Allocation& x,
              const Vector& xi) {
  if (x.size() != spec.n_agents) {
    throw std::invalid_argument("allocation has wrong length");
  }
  return s.sum(x) - coalition_value(spec.value_model, s, xi);
}

std::int64_t m_budget(int n_agents) {
  return (std::int64_t{1} << n_agents) - 1;
}

std::int64_t m_enforced(int n_agents) {
  return (std::int64_t{1} << n_agents) - 2;
}

}  // namespace coalisure
