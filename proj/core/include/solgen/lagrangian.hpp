/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <utility>
#include <vector>

#include "solgen/grid.hpp"
#include "solgen/milp.hpp"
#include "solgen/schedule.hpp"

namespace solgen {

enum class StepSchedule : uint8_t { harmonic, constant_then_harmonic };

struct SubgradientConfig {
  int max_iterations = 200;
  StepSchedule schedule = StepSchedule::harmonic;
  double step_scale = 1.0;  // a in alpha_k = a/k
  int constant_steps = 50;  // warmup length for constant_then_harmonic
  std::vector<double> lambda0;  // optional initializer (LP duals); empty = zeros
};

struct DualState {
  std::vector<double> lambda;  // >= 0 elementwise, projection enforced
  double dual_bound = 0.0;     // best L(lambda_k) seen
  std::vector<double> best_lambda;
  std::vector<std::pair<int, double>> history;  // (iteration, L(lambda_k))
  bool unbounded = false;  // some L(lambda_k) = -inf was encountered
};

struct LagrangianValue {
  double value = 0.0;
  std::vector<double> x;  // box minimizer
  bool unbounded = false;
};

// min over the box-and-integrality set of cx + lambda^T (b - Ax), solved
// coordinatewise via reduced costs r = c - A^T lambda. Integer coordinates
// are restricted to the integer grid points of [l, u]. An unbounded
// coordinate with nonzero reduced cost makes the value -inf (flagged).
LagrangianValue lagrangian_value(const MilpInstance& inst, const std::vector<double>& lambda);

// Projected subgradient ascent lambda <- max(0, lambda + alpha_k (b - Ax_k)).
DualState subgradient_solve(const MilpInstance& inst, const SubgradientConfig& cfg);

// O(x) = || c .* (x - x_star) ||_1
double optimality_term(const std::vector<double>& x, const std::vector<double>& x_star,
                       const std::vector<double>& c);

// P(x) = lambda^T max{b - Ax, 0}; requires a canonical-min instance.
double penalty_term(const std::vector<double>& x, const MilpInstance& inst,
                    const std::vector<double>& lambda);

struct GuidanceConfig {
  enum class Mode : uint8_t { standard, generalized };
  double gamma_o = 1.0;
  double gamma_c = 1.0;
  Mode mode = Mode::standard;
  // When false, keeps the row indicator 1_{Ax<b} in the constraint gradient
  // instead of the simplified all-rows push (ablation only).
  bool simplified_constraint_gradient = true;

  void validate() const;  // standard mode requires gamma_c >= 0, gamma_o >= 0
};

// w(x) = exp(-gamma_o O(x) - gamma_c P(x)), in (0,1] under standard mode.
double quality_weight(const std::vector<double>& x, const std::vector<double>& x_star,
                      const MilpInstance& inst, const std::vector<double>& lambda,
                      const GuidanceConfig& g);

// p_tilde(x) = p(x) w(x) / Z over the supplied finite support; throws if the
// normalizer underflows.
std::vector<double> refined_target_pmf(const std::vector<std::vector<double>>& points,
                                       const std::vector<double>& base_pmf,
                                       const std::vector<double>& x_star,
                                       const MilpInstance& inst,
                                       const std::vector<double>& lambda,
                                       const GuidanceConfig& g);

// Training target eps_t - gamma_o sqrt(abar_t) c.*delta + gamma_c sqrt(abar_t) A^T lambda,
// with delta = sign(c .* (round(x_t) - x_star)) and sign(0) = 0; rounding
// applies to integer-masked coordinates only. Zero on padded cells. With
// gamma_o = gamma_c = 0 the result equals eps bit-for-bit.
GridTensor guided_target_score(const GridTensor& x_t, int t, const GridTensor& eps,
                               const std::vector<double>& x_star, const MilpInstance& inst,
                               const std::vector<double>& lambda, const NoiseSchedule& schedule,
                               const GuidanceConfig& g);

}  // namespace solgen
