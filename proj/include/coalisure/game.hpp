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

#ifndef COALISURE_GAME_HPP_
#define COALISURE_GAME_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace coalisure {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// A payoff vector x in R^N.
using Allocation = Eigen::VectorXd;

inline constexpr int kMaxAgents = 20;

// Subset of agents as a bit set; bit i set iff agent i (0-based) is a member.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint32_t mask) : mask_(mask) {}

  static Coalition from_members(const std::vector<int>& members);
  static constexpr Coalition grand(int n_agents) {
    return Coalition((n_agents >= 32) ? ~0u : ((1u << n_agents) - 1u));
  }
  static constexpr Coalition singleton(int agent) {
    return Coalition(1u << agent);
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool contains(int agent) const { return (mask_ >> agent) & 1u; }
  constexpr bool empty() const { return mask_ == 0; }
  int size() const;
  // Members in ascending agent order.
  std::vector<int> members() const;
  // True iff nonempty and a strict subset of the grand coalition.
  constexpr bool is_subcoalition(int n_agents) const {
    return mask_ != 0 && mask_ != grand(n_agents).mask_ &&
           (mask_ & ~grand(n_agents).mask_) == 0;
  }
  // Sum of x over members.
  double sum(const Allocation& x) const;
  // 1-based member list, e.g. "{1,3}".
  std::string to_string() const;

  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  std::uint32_t mask_ = 0;
};

// One affine piece a + b . xi.
struct AffinePiece {
  double intercept = 0.0;
  Vector slope;
};

// u_S(xi) = max_r (a_r + b_r . xi). A single piece is the plain affine form.
class ValueModel {
 public:
  ValueModel() = default;
  explicit ValueModel(int uncertainty_dim) : dim_(uncertainty_dim) {}

  void set_affine(Coalition s, double intercept, Vector slope);
  void set_max_affine(Coalition s, std::vector<AffinePiece> pieces);

  bool has(Coalition s) const { return forms_.count(s.mask()) != 0; }
  const std::vector<AffinePiece>& pieces(Coalition s) const;
  int uncertainty_dim() const { return dim_; }
  const std::map<std::uint32_t, std::vector<AffinePiece>>& forms() const {
    return forms_;
  }

 private:
  int dim_ = 0;
  std::map<std::uint32_t, std::vector<AffinePiece>> forms_;
};

struct GameSpec {
  int n_agents = 0;
  double grand_value = 0.0;
  int uncertainty_dim = 0;
  // allowed[i]: subcoalitions agent i may join, ascending by mask.
  std::vector<std::vector<Coalition>> allowed;
  ValueModel value_model;
};

// Per-agent allowed structure containing every proper subset.
std::vector<std::vector<Coalition>> default_allowed(int n_agents);

// Per-agent structure induced by a list of coalitions: allowed[i] holds every
// listed coalition containing i. Symmetric closure holds by construction.
std::vector<std::vector<Coalition>> allowed_from_coalitions(
    int n_agents, const std::vector<Coalition>& coalitions);

// Throws std::invalid_argument on any violated GameSpec invariant.
void validate(const GameSpec& spec);

// Union of allowed[i] over agents, ascending by mask.
std::vector<Coalition> enumerate_subcoalitions(const GameSpec& spec);

double coalition_value(const ValueModel& model, Coalition s, const Vector& xi);

// sum_{i in S} x_i - u_S(xi); positive means strictly rational for S.
double excess(const GameSpec& spec, Coalition s, const Allocation& x,
              const Vector& xi);

// The coalition count M = 2^N - 1 used by the a priori core budget.
std::int64_t m_budget(int n_agents);
// Number of enforceable proper nonempty subcoalitions, 2^N - 2.
std::int64_t m_enforced(int n_agents);

}  // namespace coalisure

#endif  // COALISURE_GAME_HPP_
