/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solgen {

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
    case LpStatus::numerical_error: return "numerical_error";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-10;
constexpr int kBlandTrigger = 50;

// Column layout: [0, n) structural, [n, n+m) surplus for Ax - s = b,
// [n+m, n+2m) artificials (activated per row in phase 1, then fixed to 0).
class Tableau {
 public:
  Tableau(const MilpInstance& inst, int max_iterations)
      : inst_(inst),
        n_(inst.num_vars()),
        m_(inst.num_rows()),
        total_(inst.num_vars() + 2 * inst.num_rows()),
        max_iterations_(max_iterations) {}

  LpResult run() {
    build_initial_basis();

    // Phase 1: drive artificial infeasibility to zero.
    if (has_artificials_) {
      std::vector<double> phase1_cost(total_, 0.0);
      for (int i = 0; i < m_; ++i) {
        if (artificial_active_[i]) phase1_cost[n_ + m_ + i] = 1.0;
      }
      const LpStatus st = iterate(phase1_cost, /*phase1=*/true);
      if (st != LpStatus::optimal) return finish(st);
      double infeas = 0.0;
      for (int i = 0; i < m_; ++i) {
        const int k = basis_[i];
        if (k >= n_ + m_) infeas += beta_[i];
      }
      double bscale = 1.0;
      for (double bi : inst_.b) bscale = std::max(bscale, std::abs(bi));
      if (infeas > tol::feasibility * bscale) return finish(LpStatus::infeasible);
      // Artificials are pinned at zero for phase 2.
      for (int i = 0; i < m_; ++i) upper_[n_ + m_ + i] = 0.0;
    }

    std::vector<double> cost(total_, 0.0);
    for (int j = 0; j < n_; ++j) cost[j] = inst_.c[j];
    const LpStatus st = iterate(cost, /*phase1=*/false);
    return finish(st);
  }

 private:
  void build_initial_basis() {
    lower_.assign(total_, 0.0);
    upper_.assign(total_, kInf);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = inst_.lower[j];
      upper_[j] = inst_.upper[j];
    }
    // value_ holds nonbasic values; basics are read from beta_.
    value_.assign(total_, 0.0);
    at_upper_.assign(total_, 0);
    for (int j = 0; j < n_; ++j) value_[j] = initial_value(lower_[j], upper_[j], &at_upper_[j]);

    std::vector<double> residual(m_);
    for (int i = 0; i < m_; ++i) {
      double ax = 0.0;
      for (int k = inst_.A.row_start[i]; k < inst_.A.row_start[i + 1]; ++k) {
        ax += inst_.A.value[k] * value_[inst_.A.col_index[k]];
      }
      residual[i] = inst_.b[i] - ax;
    }

    basis_.resize(m_);
    beta_.resize(m_);
    artificial_active_.assign(m_, 0);
    has_artificials_ = false;
    is_basic_.assign(total_, 0);
    // Row signs: surplus column is -e_i, artificial +e_i, so the initial
    // basis inverse is the diagonal of these signs.
    std::vector<double> row_sign(m_);
    for (int i = 0; i < m_; ++i) {
      if (residual[i] <= 0.0) {
        basis_[i] = n_ + i;  // surplus s_i = -residual >= 0
        beta_[i] = -residual[i];
        row_sign[i] = -1.0;
      } else {
        basis_[i] = n_ + m_ + i;
        beta_[i] = residual[i];
        row_sign[i] = 1.0;
        artificial_active_[i] = 1;
        has_artificials_ = true;
        upper_[n_ + m_ + i] = kInf;
      }
      is_basic_[basis_[i]] = 1;
    }
    for (int i = 0; i < m_; ++i) {
      if (!artificial_active_[i]) upper_[n_ + m_ + i] = 0.0;
    }

    tab_.assign(static_cast<size_t>(m_) * total_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double* row = tab(i);
      for (int k = inst_.A.row_start[i]; k < inst_.A.row_start[i + 1]; ++k) {
        row[inst_.A.col_index[k]] = row_sign[i] * inst_.A.value[k];
      }
      row[n_ + i] = row_sign[i] * -1.0;
      row[n_ + m_ + i] = row_sign[i];
    }
  }

  static double initial_value(double lo, double up, uint8_t* at_upper) {
    *at_upper = 0;
    if (lo == -kInf && up == kInf) return 0.0;  // free, pinned at 0
    if (lo == -kInf) {
      *at_upper = 1;
      return up;
    }
    if (up == kInf) return lo;
    if (std::abs(lo) <= std::abs(up)) return lo;
    *at_upper = 1;
    return up;
  }

  double* tab(int i) { return tab_.data() + static_cast<size_t>(i) * total_; }

  // Reduced costs d_j = c_j - c_B^T tab_j for all columns.
  void reduced_costs(const std::vector<double>& cost, std::vector<double>& d) {
    d = cost;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = tab(i);
      for (int j = 0; j < total_; ++j) d[j] -= cb * row[j];
    }
  }

  LpStatus iterate(const std::vector<double>& cost, bool phase1) {
    std::vector<double> d;
    int degenerate_streak = 0;
    bool bland = false;

    while (true) {
      if (iterations_ >= max_iterations_) return LpStatus::iteration_limit;
      reduced_costs(cost, d);

      int entering = -1;
      double best_score = tol::optimality;
      for (int j = 0; j < total_; ++j) {
        if (is_basic_[j]) continue;
        if (lower_[j] == upper_[j]) continue;  // fixed, includes retired artificials
        const bool free_var = lower_[j] == -kInf && upper_[j] == kInf;
        double score = 0.0;
        if (free_var) {
          score = std::abs(d[j]);
        } else if (!at_upper_[j] && d[j] < 0.0) {
          score = -d[j];
        } else if (at_upper_[j] && d[j] > 0.0) {
          score = d[j];
        }
        if (score <= tol::optimality) continue;
        if (bland) {
          entering = j;
          break;
        }
        if (score > best_score) {
          best_score = score;
          entering = j;
        }
      }
      if (entering < 0) return LpStatus::optimal;

      const bool free_var = lower_[entering] == -kInf && upper_[entering] == kInf;
      const double sign =
          free_var ? (d[entering] < 0.0 ? 1.0 : -1.0) : (at_upper_[entering] ? -1.0 : 1.0);

      // Ratio test against basic bounds, plus the entering bound flip.
      double t_limit = kInf;
      if (lower_[entering] != -kInf && upper_[entering] != kInf) {
        t_limit = upper_[entering] - lower_[entering];
      }
      int leave_row = -1;
      double leave_alpha = 0.0;
      double t_best = t_limit;
      for (int i = 0; i < m_; ++i) {
        const double alpha = sign * tab(i)[entering];
        if (std::abs(alpha) <= kPivotTol) continue;
        const int k = basis_[i];
        double t_i;
        if (alpha > 0.0) {
          if (lower_[k] == -kInf) continue;
          t_i = (beta_[i] - lower_[k]) / alpha;
        } else {
          if (upper_[k] == kInf) continue;
          t_i = (upper_[k] - beta_[i]) / (-alpha);
        }
        if (t_i < 0.0) t_i = 0.0;
        bool take;
        if (leave_row < 0) {
          take = t_i <= t_best;  // also beats an equal bound-flip step
        } else if (t_i < t_best - 1e-12) {
          take = true;
        } else if (t_i <= t_best + 1e-12) {
          // tie: Bland leaves by smallest index, else keep the best pivot
          take = bland ? basis_[i] < basis_[leave_row]
                       : std::abs(alpha) > std::abs(leave_alpha);
        } else {
          take = false;
        }
        if (take) {
          t_best = std::min(t_best, t_i);
          leave_row = i;
          leave_alpha = alpha;
        }
      }

      ++iterations_;

      if (leave_row < 0) {
        if (t_limit == kInf) {
          // No blocking row and no opposite bound: a true ray. Phase 1 has a
          // bounded objective, so flag it as numerical trouble there.
          return phase1 ? LpStatus::numerical_error : LpStatus::unbounded;
        }
        // Bound flip.
        const double t = t_limit;
        for (int i = 0; i < m_; ++i) beta_[i] -= sign * tab(i)[entering] * t;
        at_upper_[entering] = !at_upper_[entering];
        value_[entering] = at_upper_[entering] ? upper_[entering] : lower_[entering];
        degenerate_streak = 0;
        continue;
      }

      const double t = t_best;
      const int leaving = basis_[leave_row];
      // Leaving variable lands on the bound it blocked at.
      at_upper_[leaving] = leave_alpha < 0.0;
      value_[leaving] = at_upper_[leaving] ? upper_[leaving] : lower_[leaving];
      const double entering_value = value_[entering] + sign * t;

      for (int i = 0; i < m_; ++i) {
        if (i != leave_row) beta_[i] -= sign * tab(i)[entering] * t;
      }

      const double pivot = tab(leave_row)[entering];
      double* prow = tab(leave_row);
      const double inv = 1.0 / pivot;
      for (int j = 0; j < total_; ++j) prow[j] *= inv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        double* row = tab(i);
        const double f = row[entering];
        if (f == 0.0) continue;
        for (int j = 0; j < total_; ++j) row[j] -= f * prow[j];
      }

      is_basic_[leaving] = 0;
      is_basic_[entering] = 1;
      basis_[leave_row] = entering;
      beta_[leave_row] = entering_value;

      if (t <= kDegenerateStep) {
        if (++degenerate_streak >= kBlandTrigger) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
    }
  }

  LpResult finish(LpStatus status) {
    LpResult res;
    res.status = status;
    res.iterations = iterations_;
    if (status == LpStatus::infeasible) return res;

    std::vector<double> full = value_;
    for (int i = 0; i < m_; ++i) full[basis_[i]] = beta_[i];
    res.x.assign(full.begin(), full.begin() + n_);
    res.objective = 0.0;
    for (int j = 0; j < n_; ++j) res.objective += inst_.c[j] * res.x[j];

    if (status == LpStatus::optimal) {
      // Sanity check: assembled point must satisfy rows and bounds. A failed
      // check is reported, never silently returned as optimal.
      for (int j = 0; j < n_; ++j) {
        if (res.x[j] < inst_.lower[j] - 1e-6 || res.x[j] > inst_.upper[j] + 1e-6) {
          res.status = LpStatus::numerical_error;
          return res;
        }
      }
      for (int i = 0; i < m_; ++i) {
        if (inst_.A.row_dot(i, res.x) < inst_.b[i] - 1e-6 * std::max(1.0, std::abs(inst_.b[i]))) {
          res.status = LpStatus::numerical_error;
          return res;
        }
      }
      std::vector<double> cost(total_, 0.0);
      for (int j = 0; j < n_; ++j) cost[j] = inst_.c[j];
      std::vector<double> d;
      reduced_costs(cost, d);
      res.duals.assign(m_, 0.0);
      for (int i = 0; i < m_; ++i) res.duals[i] = d[n_ + i];
      res.reduced_costs.assign(d.begin(), d.begin() + n_);
    }
    return res;
  }

  const MilpInstance& inst_;
  int n_, m_, total_;
  int max_iterations_;
  int iterations_ = 0;

  std::vector<double> tab_;
  std::vector<double> lower_, upper_, value_, beta_;
  std::vector<int> basis_;
  std::vector<uint8_t> at_upper_, is_basic_, artificial_active_;
  bool has_artificials_ = false;
};

}  // namespace

LpResult solve_lp(const MilpInstance& inst, const LpLimits& limits) {
  inst.validate();
  if (!inst.is_canonical_min()) {
    throw std::invalid_argument("solve_lp: instance must be canonical-min (Ax >= b, minimize)");
  }
  Tableau t(inst, limits.max_iterations);
  return t.run();
}

double lp_dual_objective(const MilpInstance& inst, const LpResult& result) {
  double v = 0.0;
  for (int i = 0; i < inst.num_rows(); ++i) v += inst.b[i] * result.duals[i];
  for (int j = 0; j < inst.num_vars(); ++j) {
    const double d = result.reduced_costs[j];
    if (d > 0.0 && inst.lower[j] != -kInf) {
      v += d * inst.lower[j];
    } else if (d < 0.0 && inst.upper[j] != kInf) {
      v += d * inst.upper[j];
    }
  }
  return v;
}

}  // namespace solgen
