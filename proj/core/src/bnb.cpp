/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <json.hpp>

namespace solgen {

void SolveLimits::validate() const {
  if (time_limit < 0.0 || node_limit < 0 || gap_tolerance < 0.0) {
    throw std::invalid_argument("SolveLimits: limits must be nonnegative");
  }
  if (time_limit == kInf && node_limit >= 1000000000L * 1000L) {
    throw std::invalid_argument("SolveLimits: at least one of time/node limit must be finite");
  }
}

const char* milp_status_name(MilpStatus s) {
  switch (s) {
    case MilpStatus::optimal: return "optimal";
    case MilpStatus::feasible: return "feasible";
    case MilpStatus::infeasible: return "infeasible";
    case MilpStatus::limit_hit: return "limit_hit";
  }
  return "unknown";
}

namespace {

struct Node {
  std::vector<double> lower;
  std::vector<double> upper;
  double bound;  // parent LP objective, valid lower bound for the subtree
  long id;
};

struct BestBoundOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;                                // FIFO tie-break
  }
};

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int pick_branching_variable(const MilpInstance& inst, const std::vector<double>& x) {
  int best = -1;
  double best_frac = tol::integrality;
  for (int j = 0; j < inst.num_vars(); ++j) {
    if (!inst.integrality[j]) continue;
    const double f = std::abs(x[j] - std::floor(x[j] + 0.5));
    if (f > best_frac) {
      best_frac = f;
      best = j;
    }
  }
  return best;
}

}  // namespace

SearchResult solve_milp(const MilpInstance& inst, const SolveLimits& limits,
                        const Solution* warm_start) {
  inst.validate();
  limits.validate();
  if (!inst.is_canonical_min()) {
    throw std::invalid_argument("solve_milp: instance must be canonical-min");
  }
  const auto start = std::chrono::steady_clock::now();

  SearchResult res;
  bool have_incumbent = false;
  double inc_obj = kInf;

  auto record_incumbent = [&](const std::vector<double>& x, double obj) {
    res.incumbent = evaluate_solution(inst, x);
    inc_obj = obj;
    have_incumbent = true;
    res.trajectory.push_back({elapsed_seconds(start), res.nodes, obj});
  };

  if (warm_start != nullptr && warm_start->feasible &&
      is_feasible(inst, warm_start->x, tol::integrality)) {
    record_incumbent(warm_start->x, evaluate_objective(inst, warm_start->x));
  }

  MilpInstance work = inst;

  std::vector<Node> dfs;
  std::priority_queue<Node, std::vector<Node>, BestBoundOrder> heap;
  long next_id = 0;
  dfs.push_back({inst.lower, inst.upper, -kInf, next_id++});

  bool limit_reached = false;

  // Min bound over open nodes; the root carries -inf before its LP solve.
  auto open_dual_bound = [&]() {
    double d = kInf;
    for (const Node& nd : dfs) d = std::min(d, nd.bound);
    if (!heap.empty()) d = std::min(d, heap.top().bound);
    return d;
  };

  while (!dfs.empty() || !heap.empty()) {
    if (res.nodes >= limits.node_limit || elapsed_seconds(start) > limits.time_limit) {
      limit_reached = true;
      break;
    }
    if (have_incumbent) {
      const double dual = open_dual_bound();
      if (dual > -kInf && dual < kInf &&
          (inc_obj - dual) / std::max(1.0, std::abs(inc_obj)) <= limits.gap_tolerance) {
        break;  // proven within gap
      }
    }

    Node node;
    if (!have_incumbent && !dfs.empty()) {
      node = std::move(dfs.back());
      dfs.pop_back();
    } else if (!heap.empty()) {
      node = heap.top();
      heap.pop();
    } else {
      node = std::move(dfs.back());
      dfs.pop_back();
    }

    const double prune_eps = 1e-9 * std::max(1.0, std::abs(inc_obj));
    if (have_incumbent && node.bound >= inc_obj - prune_eps) continue;

    work.lower = node.lower;
    work.upper = node.upper;
    ++res.nodes;
    const LpResult lp = solve_lp(work);
    if (lp.status == LpStatus::infeasible) continue;
    if (lp.status == LpStatus::unbounded) {
      throw std::runtime_error("solve_milp: LP relaxation unbounded");
    }
    if (lp.status != LpStatus::optimal) {
      throw std::runtime_error(std::string("solve_milp: LP relaxation failed: ") +
                               lp_status_name(lp.status));
    }
    if (have_incumbent && lp.objective >= inc_obj - prune_eps) continue;

    const int branch_var = pick_branching_variable(inst, lp.x);
    if (branch_var < 0) {
      // Integral relaxation: snap integer coordinates and accept.
      std::vector<double> x = lp.x;
      for (int j = 0; j < inst.num_vars(); ++j) {
        if (inst.integrality[j]) x[j] = std::floor(x[j] + 0.5);
      }
      const double obj = evaluate_objective(inst, x);
      if (is_feasible(inst, x, 1e-5) && (!have_incumbent || obj < inc_obj)) {
        record_incumbent(x, obj);
        // Migrate any pending plunge nodes to best-bound selection.
        for (Node& nd : dfs) heap.push(std::move(nd));
        dfs.clear();
      }
      continue;
    }

    const double xv = lp.x[branch_var];
    Node down{node.lower, node.upper, lp.objective, next_id++};
    down.upper[branch_var] = std::floor(xv);
    Node up{std::move(node.lower), std::move(node.upper), lp.objective, next_id++};
    up.lower[branch_var] = std::ceil(xv);
    if (!have_incumbent) {
      dfs.push_back(std::move(up));
      dfs.push_back(std::move(down));  // plunge on the down child first
    } else {
      heap.push(std::move(down));
      heap.push(std::move(up));
    }
  }

  res.wall_time = elapsed_seconds(start);
  const bool exhausted = dfs.empty() && heap.empty();

  if (!have_incumbent) {
    if (exhausted && !limit_reached) {
      res.status = MilpStatus::infeasible;
      res.dual_bound = kInf;
    } else {
      res.status = MilpStatus::limit_hit;
      const double d = open_dual_bound();
      res.dual_bound = d == kInf ? -kInf : d;
    }
    return res;
  }

  if (exhausted && !limit_reached) {
    // Every subtree was either explored or pruned against the incumbent.
    res.dual_bound = inc_obj;
    res.status = MilpStatus::optimal;
    return res;
  }

  const double d = open_dual_bound();
  res.dual_bound = d == kInf ? inc_obj : d;
  const double gap = (inc_obj - res.dual_bound) / std::max(1.0, std::abs(inc_obj));
  res.status = !limit_reached && gap <= limits.gap_tolerance ? MilpStatus::optimal
                                                             : MilpStatus::feasible;
  return res;
}

MilpInstance add_trust_region(const MilpInstance& inst, const TrustRegionSpec& spec) {
  if (spec.radius < 0) throw std::invalid_argument("add_trust_region: radius must be >= 0");
  const std::vector<int> idx = inst.integer_indices();
  if (spec.center.size() != idx.size()) {
    throw std::invalid_argument("add_trust_region: center size must equal |I|");
  }
  for (size_t k = 0; k < idx.size(); ++k) {
    const double v = spec.center[k];
    if (std::abs(v) > tol::integrality && std::abs(v - 1.0) > tol::integrality) {
      throw std::invalid_argument("add_trust_region: center entries must be binary");
    }
    const int j = idx[k];
    if (inst.lower[j] < -tol::integrality || inst.upper[j] > 1.0 + tol::integrality) {
      throw std::invalid_argument("add_trust_region: integer variables must be binary");
    }
  }
  const int radius = std::min<int>(spec.radius, static_cast<int>(idx.size()));

  // sum_{center=0} x_i + sum_{center=1} (1 - x_i) <= radius
  // in >= form: sum_{center=1} x_i - sum_{center=0} x_i >= |ones| - radius
  MilpInstance out = inst;
  std::vector<int> cols;
  std::vector<double> vals;
  int ones = 0;
  for (size_t k = 0; k < idx.size(); ++k) {
    const bool is_one = spec.center[k] > 0.5;
    ones += is_one;
    cols.push_back(idx[k]);
    vals.push_back(is_one ? 1.0 : -1.0);
  }
  out.A.add_row(cols, vals);
  out.b.push_back(static_cast<double>(ones - radius));
  out.row_sense.push_back(RowSense::geq);
  out.validate();
  return out;
}

Solution repair_heuristic(const MilpInstance& inst, const std::vector<double>& x_relaxed,
                          double budget_seconds, const RepairConfig& cfg) {
  if (x_relaxed.size() != static_cast<size_t>(inst.num_vars())) {
    throw std::invalid_argument("repair_heuristic: x_relaxed has wrong dimension");
  }
  if (!inst.is_canonical_min()) {
    throw std::invalid_argument("repair_heuristic: instance must be canonical-min");
  }
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> rounded = x_relaxed;
  for (int j = 0; j < inst.num_vars(); ++j) {
    if (inst.integrality[j]) rounded[j] = std::floor(x_relaxed[j] + 0.5);
    rounded[j] = std::clamp(rounded[j], inst.lower[j], inst.upper[j]);
  }
  const bool already_integral = [&] {
    for (int j = 0; j < inst.num_vars(); ++j) {
      if (inst.integrality[j] &&
          std::abs(x_relaxed[j] - rounded[j]) > tol::integrality) {
        return false;
      }
    }
    return true;
  }();
  Solution best;
  best.feasible = false;
  if (is_feasible(inst, rounded, tol::integrality)) {
    best = evaluate_solution(inst, rounded);
    // an input that was already integral and feasible is returned as-is
    if (already_integral) return best;
  }

  const std::vector<int> idx = inst.integer_indices();
  std::vector<int> by_confidence(idx.size());
  std::iota(by_confidence.begin(), by_confidence.end(), 0);
  std::stable_sort(by_confidence.begin(), by_confidence.end(), [&](int a, int b) {
    return std::abs(x_relaxed[idx[a]] - rounded[idx[a]]) <
           std::abs(x_relaxed[idx[b]] - rounded[idx[b]]);
  });

  double fraction = cfg.start_fraction;
  for (int round = 0; round < cfg.max_rounds; ++round, fraction *= 0.5) {
    const double remaining = budget_seconds - elapsed_seconds(start);
    if (remaining <= 0.0) break;
    // Last round drops all fixings: the essential-variable case where every
    // confidence prefix is infeasible still ends at the plain MILP.
    const int fix_count = round == cfg.max_rounds - 1
                              ? 0
                              : static_cast<int>(fraction * static_cast<double>(idx.size()));

    MilpInstance sub = inst;
    for (int k = 0; k < fix_count; ++k) {
      const int j = idx[by_confidence[k]];
      sub.lower[j] = rounded[j];
      sub.upper[j] = rounded[j];
    }
    SolveLimits limits;
    limits.time_limit = remaining;
    limits.node_limit = cfg.node_limit_per_round;
    limits.gap_tolerance = 1e-4;
    SearchResult sr;
    try {
      sr = solve_milp(sub, limits, best.feasible ? &best : nullptr);
    } catch (const std::runtime_error&) {
      continue;  // numerical trouble in a sub-MILP: try a looser fixing
    }
    if ((sr.status == MilpStatus::optimal || sr.status == MilpStatus::feasible) &&
        sr.incumbent.feasible && is_feasible(inst, sr.incumbent.x, tol::integrality)) {
      return evaluate_solution(inst, sr.incumbent.x);
    }
  }
  if (best.feasible) return best;

  Solution fail = evaluate_solution(inst, rounded);
  fail.feasible = false;
  return fail;
}

std::string search_result_to_json_string(const SearchResult& result) {
  nlohmann::json j;
  j["status"] = milp_status_name(result.status);
  j["objective"] = result.incumbent.objective;
  j["feasible"] = result.incumbent.feasible;
  j["max_violation"] = result.incumbent.max_violation;
  j["x"] = result.incumbent.x;
  j["nodes"] = result.nodes;
  j["wall_time"] = result.wall_time;
  j["dual_bound"] = result.dual_bound == -kInf ? nlohmann::json("-inf")
                                               : nlohmann::json(result.dual_bound);
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& p : result.trajectory) {
    traj.push_back({{"time", p.time}, {"nodes", p.nodes}, {"bound", p.bound}});
  }
  j["trajectory"] = traj;
  return j.dump(2);
}

}  // namespace solgen
