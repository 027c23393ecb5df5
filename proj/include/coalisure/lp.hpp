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

#ifndef COALISURE_LP_HPP_
#define COALISURE_LP_HPP_

// Dense two-phase tableau simplex. Sized for desk-scale programs (a few
// hundred rows); all problems arising from coalition constraints fit.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalisure/errors.hpp"

namespace coalisure {

// minimize c.y  s.t.  a_eq y = b_eq,  a_ge y >= b_ge,  y >= lower.
// An empty `lower` leaves every variable free; -inf entries mark free ones.
template <typename Scalar>
struct LinearProgram {
  using VectorS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  VectorS objective;
  MatrixS a_eq;
  VectorS b_eq;
  MatrixS a_ge;
  VectorS b_ge;
  VectorS lower;

  LinearProgram() = default;
  explicit LinearProgram(int n_vars)
      : objective(VectorS::Zero(n_vars)),
        a_eq(0, n_vars),
        b_eq(0),
        a_ge(0, n_vars),
        b_ge(0) {}

  int num_variables() const { return static_cast<int>(objective.size()); }

  void add_equality(const VectorS& row, Scalar rhs) {
    append(a_eq, b_eq, row, rhs);
  }
  void add_inequality(const VectorS& row, Scalar rhs) {
    append(a_ge, b_ge, row, rhs);
  }
  void set_lower_bound(int var, Scalar value) {
    if (lower.size() == 0) {
      lower = VectorS::Constant(num_variables(),
                                -std::numeric_limits<Scalar>::infinity());
    }
    lower[var] = value;
  }

 private:
  static void append(MatrixS& a, VectorS& b, const VectorS& row, Scalar rhs) {
    const Eigen::Index r = a.rows();
    a.conservativeResize(r + 1, row.size());
    a.row(r) = row.transpose();
    b.conservativeResize(r + 1);
    b[r] = rhs;
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

enum class PivotRule {
  // Lowest-index entering column throughout.
  kBland,
  // Most negative reduced cost (ties to the lowest index); switches to Bland
  // for the rest of the phase after `stall_limit` consecutive degenerate
  // pivots.
  kDantzigBlandFallback,
};

struct LpOptions {
  double tolerance = 1e-9;
  double pivot_tolerance = 1e-11;
  PivotRule rule = PivotRule::kDantzigBlandFallback;
  int stall_limit = 50;
  long max_iterations = 2'000'000;
};

template <typename Scalar>
struct LpOutcome {
  using VectorS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LpStatus status = LpStatus::kInfeasible;
  VectorS solution;
  Scalar objective_value = 0;
  // Per-stage optimal values for lexicographic solves.
  std::vector<Scalar> stage_values;
  // a_eq y - b_eq.
  VectorS eq_residual;
  // a_ge y - b_ge; nonnegative up to tolerance at an optimal point.
  VectorS ge_slack;
  long iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

namespace detail {

template <typename Scalar>
class Tableau {
 public:
  using VectorS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Tableau(const LinearProgram<Scalar>& lp, const LpOptions& opts)
      : lp_(lp), opts_(opts), tol_(static_cast<Scalar>(opts.tolerance)) {
    build();
  }

  // Returns false when the feasible set is empty.
  bool phase_one() {
    if (n_art_ == 0) {
      finish_phase_one();
      return true;
    }
    VectorS cost = VectorS::Zero(n_cols_);
    for (int j = art_begin_; j < n_cols_; ++j) cost[j] = 1;
    set_objective(cost);
    if (!iterate()) {
      // Phase one is bounded below by zero.
      throw LpError("phase one reported unbounded");
    }
    const Scalar infeasibility = -t_(m_, n_cols_);
    if (infeasibility > tol_ * std::max<Scalar>(1, rhs_scale_)) return false;
    finish_phase_one();
    return true;
  }

  // Optimizes the given objective (over original variables) on the current
  // face. Returns false when unbounded.
  bool optimize(const VectorS& c_orig, Scalar* value) {
    VectorS cost = VectorS::Zero(n_cols_);
    Scalar offset = 0;
    for (int j = 0; j < n_orig_; ++j) {
      cost[pos_col_[j]] = c_orig[j];
      if (neg_col_[j] >= 0) {
        cost[neg_col_[j]] = -c_orig[j];
      } else {
        offset += c_orig[j] * shift_[j];
      }
    }
    set_objective(cost);
    if (!iterate()) return false;
    *value = -t_(m_, n_cols_) + offset;
    return true;
  }

  // Keeps later stages on the optimal face of the current objective.
  void restrict_to_optimal_face() {
    for (int j = 0; j < n_cols_; ++j) {
      if (!blocked_[j] && row_of_basic_[j] < 0 && t_(m_, j) > tol_) {
        blocked_[j] = 1;
      }
    }
  }

  VectorS solution() const {
    // Recompute basic values from the unpivoted system for accuracy.
    std::vector<int> rows;
    for (int r = 0; r < m_; ++r) {
      if (active_[r]) rows.push_back(r);
    }
    const int k = static_cast<int>(rows.size());
    VectorS x_std = VectorS::Zero(n_cols_);
    if (k > 0) {
      MatrixS basis(k, k);
      VectorS rhs(k);
      for (int a = 0; a < k; ++a) {
        rhs[a] = original_(rows[a], n_cols_);
        for (int b = 0; b < k; ++b) {
          basis(a, b) = original_(rows[a], basis_[rows[b]]);
        }
      }
      Eigen::PartialPivLU<MatrixS> lu(basis);
      VectorS xb = lu.solve(rhs);
      for (int b = 0; b < k; ++b) {
        const Scalar v = xb[b];
        const Scalar fallback = t_(rows[b], n_cols_);
        // Keep the tableau value if refinement went astray.
        const bool sane = std::isfinite(static_cast<double>(v)) &&
                          std::abs(v - fallback) <=
                              Scalar(1e-6) * (1 + std::abs(fallback));
        x_std[basis_[rows[b]]] = std::max<Scalar>(0, sane ? v : fallback);
      }
    }
    VectorS y(n_orig_);
    for (int j = 0; j < n_orig_; ++j) {
      y[j] = x_std[pos_col_[j]] + shift_[j];
      if (neg_col_[j] >= 0) y[j] -= x_std[neg_col_[j]];
    }
    return y;
  }

  long iterations() const { return iterations_; }

 private:
  void build() {
    n_orig_ = lp_.num_variables();
    const int m_eq = static_cast<int>(lp_.a_eq.rows());
    const int m_ge = static_cast<int>(lp_.a_ge.rows());
    m_ = m_eq + m_ge;

    pos_col_.assign(n_orig_, -1);
    neg_col_.assign(n_orig_, -1);
    shift_ = VectorS::Zero(n_orig_);
    int col = 0;
    for (int j = 0; j < n_orig_; ++j) {
      const bool bounded =
          lp_.lower.size() != 0 && std::isfinite(static_cast<double>(lp_.lower[j]));
      pos_col_[j] = col++;
      if (bounded) {
        shift_[j] = lp_.lower[j];
      } else {
        neg_col_[j] = col++;
      }
    }
    const int n_struct = col;
    const int surplus_begin = n_struct;

    // Row data in standard form before artificials.
    MatrixS rows = MatrixS::Zero(m_, n_struct + m_ge);
    VectorS rhs(m_);
    auto load = [&](int r, const auto& a_row, Scalar b) {
      Scalar shifted = b;
      for (int j = 0; j < n_orig_; ++j) {
        const Scalar a = a_row(j);
        rows(r, pos_col_[j]) = a;
        if (neg_col_[j] >= 0) rows(r, neg_col_[j]) = -a;
        shifted -= a * shift_[j];
      }
      rhs[r] = shifted;
    };
    for (int r = 0; r < m_eq; ++r) load(r, lp_.a_eq.row(r), lp_.b_eq[r]);
    for (int r = 0; r < m_ge; ++r) {
      load(m_eq + r, lp_.a_ge.row(r), lp_.b_ge[r]);
      rows(m_eq + r, surplus_begin + r) = -1;
    }

    // Orient rows so the rhs is nonnegative; a surplus column with +1 can
    // then start in the basis without an artificial.
    std::vector<int> needs_art;
    std::vector<int> start_basic(m_, -1);
    for (int r = 0; r < m_; ++r) {
      const bool is_ge = r >= m_eq;
      if (rhs[r] < 0 || (is_ge && rhs[r] == 0)) {
        rows.row(r) *= -1;
        rhs[r] = -rhs[r];
      }
      if (is_ge && rows(r, surplus_begin + (r - m_eq)) > 0) {
        start_basic[r] = surplus_begin + (r - m_eq);
      } else {
        needs_art.push_back(r);
      }
    }
    n_art_ = static_cast<int>(needs_art.size());
    art_begin_ = n_struct + m_ge;
    n_cols_ = art_begin_ + n_art_;

    t_ = MatrixS::Zero(m_ + 1, n_cols_ + 1);
    t_.topLeftCorner(m_, art_begin_) = rows;
    t_.block(0, n_cols_, m_, 1) = rhs;
    for (int a = 0; a < n_art_; ++a) {
      t_(needs_art[a], art_begin_ + a) = 1;
      start_basic[needs_art[a]] = art_begin_ + a;
    }
    rhs_scale_ = m_ > 0 ? rhs.cwiseAbs().maxCoeff() : Scalar(0);
    original_ = t_.topRows(m_);

    basis_ = start_basic;
    row_of_basic_.assign(n_cols_, -1);
    for (int r = 0; r < m_; ++r) row_of_basic_[basis_[r]] = r;
    blocked_.assign(n_cols_, 0);
    active_.assign(m_, 1);
  }

  void set_objective(const VectorS& cost) {
    t_.row(m_).setZero();
    t_.row(m_).head(n_cols_) = cost.transpose();
    for (int r = 0; r < m_; ++r) {
      if (!active_[r]) continue;
      const Scalar cb = cost[basis_[r]];
      if (cb != 0) t_.row(m_) -= cb * t_.row(r);
    }
  }

  void pivot(int r, int c) {
    const Scalar p = t_(r, c);
    t_.row(r) /= p;
    VectorS factors = t_.col(c);
    factors[r] = 0;
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> prow = t_.row(r);
    t_.noalias() -= factors * prow;
    t_.col(c).setZero();
    t_(r, c) = 1;
    row_of_basic_[basis_[r]] = -1;
    basis_[r] = c;
    row_of_basic_[c] = r;
    ++iterations_;
  }

  // Runs primal simplex on the current cost row. Returns false if unbounded.
  bool iterate() {
    bool bland = opts_.rule == PivotRule::kBland;
    int stalled = 0;
    const Scalar piv_tol = static_cast<Scalar>(opts_.pivot_tolerance);
    while (true) {
      if (iterations_ >= opts_.max_iterations) {
        throw LpError("simplex iteration limit reached");
      }
      int enter = -1;
      Scalar best = -tol_;
      for (int j = 0; j < n_cols_; ++j) {
        if (blocked_[j] || row_of_basic_[j] >= 0) continue;
        const Scalar d = t_(m_, j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      Scalar best_ratio = 0;
      for (int r = 0; r < m_; ++r) {
        if (!active_[r]) continue;
        const Scalar a = t_(r, enter);
        if (a <= piv_tol) continue;
        const Scalar ratio = std::max<Scalar>(0, t_(r, n_cols_)) / a;
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      if (best_ratio <= tol_) {
        if (++stalled > opts_.stall_limit) bland = true;
      } else {
        stalled = 0;
      }
      pivot(leave, enter);
    }
  }

  void finish_phase_one() {
    const Scalar piv_tol = static_cast<Scalar>(opts_.pivot_tolerance);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < art_begin_) continue;
      int best = -1;
      Scalar best_abs = std::max<Scalar>(piv_tol, tol_);
      for (int j = 0; j < art_begin_; ++j) {
        if (row_of_basic_[j] >= 0) continue;
        const Scalar a = std::abs(t_(r, j));
        if (a > best_abs) {
          best = j;
          best_abs = a;
        }
      }
      if (best >= 0) {
        pivot(r, best);
      } else {
        active_[r] = 0;  // redundant row
      }
    }
    for (int j = art_begin_; j < n_cols_; ++j) blocked_[j] = 1;
  }

  const LinearProgram<Scalar>& lp_;
  LpOptions opts_;
  Scalar tol_;
  int n_orig_ = 0;
  int m_ = 0;
  int n_cols_ = 0;
  int n_art_ = 0;
  int art_begin_ = 0;
  Scalar rhs_scale_ = 0;
  std::vector<int> pos_col_, neg_col_;
  VectorS shift_;
  MatrixS t_;
  MatrixS original_;
  std::vector<int> basis_;
  std::vector<int> row_of_basic_;
  std::vector<char> blocked_;
  std::vector<char> active_;
  long iterations_ = 0;
};

template <typename Scalar>
void check_well_formed(const LinearProgram<Scalar>& lp) {
  const auto n = lp.objective.size();
  if (lp.a_eq.cols() != n && lp.a_eq.rows() != 0) {
    throw std::invalid_argument("equality block has wrong column count");
  }
  if (lp.a_ge.cols() != n && lp.a_ge.rows() != 0) {
    throw std::invalid_argument("inequality block has wrong column count");
  }
  if (lp.a_eq.rows() != lp.b_eq.size() || lp.a_ge.rows() != lp.b_ge.size()) {
    throw std::invalid_argument("constraint rhs length mismatch");
  }
  if (lp.lower.size() != 0 && lp.lower.size() != n) {
    throw std::invalid_argument("lower bound vector has wrong length");
  }
  auto finite = [](const auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      if (!std::isfinite(static_cast<double>(m.data()[i]))) return false;
    }
    return true;
  };
  if (!finite(lp.objective) || !finite(lp.a_eq) || !finite(lp.b_eq) ||
      !finite(lp.a_ge) || !finite(lp.b_ge)) {
    throw std::invalid_argument("linear program has non-finite entries");
  }
  for (Eigen::Index j = 0; j < lp.lower.size(); ++j) {
    if (std::isnan(static_cast<double>(lp.lower[j])) ||
        lp.lower[j] == std::numeric_limits<Scalar>::infinity()) {
      throw std::invalid_argument("lower bound must be finite or -inf");
    }
  }
}

template <typename Scalar>
void fill_residuals(const LinearProgram<Scalar>& lp, LpOutcome<Scalar>& out,
                    const LpOptions& opts) {
  const auto& y = out.solution;
  out.eq_residual = lp.a_eq.rows() ? (lp.a_eq * y - lp.b_eq).eval()
                                   : typename LpOutcome<Scalar>::VectorS(0);
  out.ge_slack = lp.a_ge.rows() ? (lp.a_ge * y - lp.b_ge).eval()
                                : typename LpOutcome<Scalar>::VectorS(0);
  const Scalar tol = static_cast<Scalar>(opts.tolerance);
  Scalar worst = 0;
  if (out.eq_residual.size()) worst = out.eq_residual.cwiseAbs().maxCoeff();
  if (out.ge_slack.size()) worst = std::max(worst, -out.ge_slack.minCoeff());
  for (Eigen::Index j = 0; j < lp.lower.size(); ++j) {
    if (std::isfinite(static_cast<double>(lp.lower[j]))) {
      worst = std::max(worst, lp.lower[j] - y[j]);
    }
  }
  if (worst > tol) {
    throw LpError("optimal point violates constraints by " +
                  std::to_string(static_cast<double>(worst)));
  }
}

}  // namespace detail

// Optimizes objectives[0], then objectives[1] over the optimal face of the
// first, and so on.
template <typename Scalar>
LpOutcome<Scalar> solve_lexicographic(
    const LinearProgram<Scalar>& lp,
    const std::vector<typename LinearProgram<Scalar>::VectorS>& objectives,
    const LpOptions& opts = {}) {
  detail::check_well_formed(lp);
  for (const auto& c : objectives) {
    if (c.size() != lp.num_variables()) {
      throw std::invalid_argument("objective has wrong length");
    }
  }
  LpOutcome<Scalar> out;
  detail::Tableau<Scalar> tableau(lp, opts);
  if (!tableau.phase_one()) {
    out.status = LpStatus::kInfeasible;
    out.iterations = tableau.iterations();
    return out;
  }
  for (std::size_t k = 0; k < objectives.size(); ++k) {
    if (k > 0) tableau.restrict_to_optimal_face();
    Scalar value = 0;
    if (!tableau.optimize(objectives[k], &value)) {
      out.status = LpStatus::kUnbounded;
      out.iterations = tableau.iterations();
      return out;
    }
    out.stage_values.push_back(value);
  }
  out.status = LpStatus::kOptimal;
  out.solution = tableau.solution();
  out.objective_value =
      objectives.empty() ? Scalar(0) : objectives.front().dot(out.solution);
  out.iterations = tableau.iterations();
  detail::fill_residuals(lp, out, opts);
  return out;
}

template <typename Scalar>
LpOutcome<Scalar> solve(const LinearProgram<Scalar>& lp,
                        const LpOptions& opts = {}) {
  return solve_lexicographic<Scalar>(lp, {lp.objective}, opts);
}

// Any feasible point; the objective is ignored.
template <typename Scalar>
LpOutcome<Scalar> feasible(const LinearProgram<Scalar>& lp,
                           const LpOptions& opts = {}) {
  return solve_lexicographic<Scalar>(lp, {}, opts);
}

using Lp = LinearProgram<double>;
using LpResult = LpOutcome<double>;

}  // namespace coalisure

#endif  // COALISURE_LP_HPP_
