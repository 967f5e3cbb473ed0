/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <vector>

#include "solgen/milp.hpp"
#include "solgen/simplex.hpp"

namespace solgen {

struct SolveLimits {
  double time_limit = kInf;       // seconds
  long node_limit = 1000000000L;  // explored nodes
  double gap_tolerance = 1e-4;    // relative |primal - dual| / max(1, |primal|)

  void validate() const;
};

enum class MilpStatus : uint8_t { optimal, feasible, infeasible, limit_hit };

const char* milp_status_name(MilpStatus s);

struct TrajectoryPoint {
  double time = 0.0;  // seconds since solve start (informational)
  long nodes = 0;
  double bound = 0.0;  // best primal bound, non-increasing for canonical-min
};

struct SearchResult {
  MilpStatus status = MilpStatus::limit_hit;
  Solution incumbent;
  long nodes = 0;
  double wall_time = 0.0;
  double dual_bound = -kInf;
  std::vector<TrajectoryPoint> trajectory;
};

// Exact branch-and-bound on the LP relaxation. Requires canonical-min input.
// Branching: most-fractional variable, ties by lowest index. Node selection:
// depth-first plunging until the first incumbent, then best-bound. Runs with
// the same node limit are bit-deterministic; time-limited runs are not.
// `warm_start`, when non-null and feasible, seeds the incumbent.
SearchResult solve_milp(const MilpInstance& inst, const SolveLimits& limits,
                        const Solution* warm_start = nullptr);

struct TrustRegionSpec {
  std::vector<double> center;  // one entry per integer index, in index order
  int radius = 0;
};

// Appends one row encoding the Hamming ball |x_I - center|_1 <= radius in
// canonical >= orientation; the original rows are untouched. Requires a
// binary 0/1 center; the effective radius is capped at |I|.
MilpInstance add_trust_region(const MilpInstance& inst, const TrustRegionSpec& spec);

struct RepairConfig {
  // Confident fraction fixed in the first round. Small at desk scale: with
  // weakly conditioned predictions a confidently wrong fixing locks its cost
  // in, while the residual exact solve stays sub-second anyway; the time
  // budget is what truncates the residual solve on larger instances.
  double start_fraction = 0.05;
  int max_rounds = 5;  // halvings; the final round fixes nothing
  long node_limit_per_round = 20000;
};

// Fix-and-optimize repair: rounds integer coordinates, fixes the most
// confident fraction, solves the residual MILP under the budget, halving the
// fixed fraction on infeasibility. Returns the best feasible solution found
// or an explicit infeasible report (never silent).
Solution repair_heuristic(const MilpInstance& inst, const std::vector<double>& x_relaxed,
                          double budget_seconds, const RepairConfig& cfg = {});

std::string search_result_to_json_string(const SearchResult& result);

}  // namespace solgen
