/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <vector>

#include "solgen/milp.hpp"

namespace solgen {

enum class LpStatus : uint8_t {
  optimal,
  infeasible,
  unbounded,
  iteration_limit,
  numerical_error,
};

const char* lp_status_name(LpStatus s);

struct LpLimits {
  int max_iterations = 50000;
};

struct LpResult {
  LpStatus status = LpStatus::numerical_error;
  std::vector<double> x;
  double objective = 0.0;
  // One dual per row, >= 0 at optimality for active Ax >= b rows; zero on
  // slack rows (complementary slackness).
  std::vector<double> duals;
  // Structural reduced costs c - A^T y at the final basis.
  std::vector<double> reduced_costs;
  int iterations = 0;
};

// Bounded-variable primal simplex on a dense tableau, two-phase (no big-M).
// Requires a canonical-min instance (throws std::invalid_argument otherwise);
// integrality is ignored. Deterministic: largest-coefficient pricing with a
// Bland fallback after a degeneracy streak of 50 pivots.
LpResult solve_lp(const MilpInstance& inst, const LpLimits& limits = {});

// b.y + sum_j max(d_j,0) l_j + min(d_j,0) u_j for the result's duals; a lower
// bound on the optimal objective (weak duality) whenever status == optimal.
double lp_dual_objective(const MilpInstance& inst, const LpResult& result);

}  // namespace solgen
