/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solgen {

namespace {

void require_canonical(const MilpInstance& inst, const char* where) {
  if (!inst.is_canonical_min()) {
    throw std::invalid_argument(std::string(where) + ": instance must be canonical-min");
  }
}

void require_lambda(const MilpInstance& inst, const std::vector<double>& lambda,
                    const char* where) {
  if (lambda.size() != static_cast<size_t>(inst.num_rows())) {
    throw std::invalid_argument(std::string(where) + ": lambda has wrong dimension");
  }
  for (double l : lambda) {
    if (l < 0.0) throw std::invalid_argument(std::string(where) + ": lambda must be >= 0");
  }
}

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

LagrangianValue lagrangian_value(const MilpInstance& inst, const std::vector<double>& lambda) {
  require_canonical(inst, "lagrangian_value");
  require_lambda(inst, lambda, "lagrangian_value");
  const int n = inst.num_vars();

  const std::vector<double> at_lambda = inst.A.multiply_transpose(lambda);
  LagrangianValue out;
  out.x.assign(n, 0.0);
  double value = 0.0;
  for (int i = 0; i < inst.num_rows(); ++i) value += lambda[i] * inst.b[i];

  for (int j = 0; j < n; ++j) {
    const double r = inst.c[j] - at_lambda[j];
    double lo = inst.lower[j];
    double hi = inst.upper[j];
    if (inst.integrality[j]) {
      lo = lo == -kInf ? -kInf : std::ceil(lo - tol::integrality);
      hi = hi == kInf ? kInf : std::floor(hi + tol::integrality);
    }
    double xj;
    if (r > 0.0) {
      if (lo == -kInf) {
        out.unbounded = true;
        out.value = -kInf;
        return out;
      }
      xj = lo;
    } else if (r < 0.0) {
      if (hi == kInf) {
        out.unbounded = true;
        out.value = -kInf;
        return out;
      }
      xj = hi;
    } else {
      xj = lo != -kInf ? lo : 0.0;
    }
    out.x[j] = xj;
    value += r * xj;
  }
  out.value = value;
  return out;
}

DualState subgradient_solve(const MilpInstance& inst, const SubgradientConfig& cfg) {
  require_canonical(inst, "subgradient_solve");
  const int m = inst.num_rows();
  DualState state;
  state.lambda.assign(m, 0.0);
  if (!cfg.lambda0.empty()) {
    require_lambda(inst, cfg.lambda0, "subgradient_solve");
    state.lambda = cfg.lambda0;
  }
  state.dual_bound = -kInf;

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    const LagrangianValue lv = lagrangian_value(inst, state.lambda);
    if (lv.unbounded) {
      state.unbounded = true;
      state.dual_bound = -kInf;
      state.history.push_back({k, -kInf});
      return state;
    }
    state.history.push_back({k, lv.value});
    if (lv.value > state.dual_bound) {
      state.dual_bound = lv.value;
      state.best_lambda = state.lambda;
    }

    double step;
    if (cfg.schedule == StepSchedule::harmonic) {
      step = cfg.step_scale / k;
    } else {
      step = k <= cfg.constant_steps ? cfg.step_scale
                                     : cfg.step_scale / (k - cfg.constant_steps);
    }
    const std::vector<double> ax = inst.A.multiply(lv.x);
    for (int i = 0; i < m; ++i) {
      state.lambda[i] = std::max(0.0, state.lambda[i] + step * (inst.b[i] - ax[i]));
    }
  }
  if (state.best_lambda.empty()) state.best_lambda = state.lambda;
  return state;
}

double optimality_term(const std::vector<double>& x, const std::vector<double>& x_star,
                       const std::vector<double>& c) {
  if (x.size() != x_star.size() || x.size() != c.size()) {
    throw std::invalid_argument("optimality_term: dimension mismatch");
  }
  double s = 0.0;
  for (size_t j = 0; j < x.size(); ++j) s += std::abs(c[j] * (x[j] - x_star[j]));
  return s;
}

double penalty_term(const std::vector<double>& x, const MilpInstance& inst,
                    const std::vector<double>& lambda) {
  require_canonical(inst, "penalty_term");
  require_lambda(inst, lambda, "penalty_term");
  const auto v = violation_vector(inst, x);
  double s = 0.0;
  for (size_t i = 0; i < v.size(); ++i) s += lambda[i] * v[i];
  return s;
}

void GuidanceConfig::validate() const {
  if (gamma_o < 0.0) throw std::invalid_argument("GuidanceConfig: gamma_o must be >= 0");
  if (mode == Mode::standard && gamma_c < 0.0) {
    throw std::invalid_argument("GuidanceConfig: gamma_c must be >= 0 in standard mode");
  }
}

double quality_weight(const std::vector<double>& x, const std::vector<double>& x_star,
                      const MilpInstance& inst, const std::vector<double>& lambda,
                      const GuidanceConfig& g) {
  g.validate();
  return std::exp(-g.gamma_o * optimality_term(x, x_star, inst.c) -
                  g.gamma_c * penalty_term(x, inst, lambda));
}

std::vector<double> refined_target_pmf(const std::vector<std::vector<double>>& points,
                                       const std::vector<double>& base_pmf,
                                       const std::vector<double>& x_star,
                                       const MilpInstance& inst,
                                       const std::vector<double>& lambda,
                                       const GuidanceConfig& g) {
  if (points.size() != base_pmf.size()) {
    throw std::invalid_argument("refined_target_pmf: points/base_pmf size mismatch");
  }
  std::vector<double> out(points.size());
  double z = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    out[i] = base_pmf[i] * quality_weight(points[i], x_star, inst, lambda, g);
    z += out[i];
  }
  if (!(z > 1e-300)) {
    throw std::runtime_error("refined_target_pmf: normalization constant underflow");
  }
  for (double& v : out) v /= z;
  return out;
}

GridTensor guided_target_score(const GridTensor& x_t, int t, const GridTensor& eps,
                               const std::vector<double>& x_star, const MilpInstance& inst,
                               const std::vector<double>& lambda, const NoiseSchedule& schedule,
                               const GuidanceConfig& g) {
  g.validate();
  require_canonical(inst, "guided_target_score");
  require_lambda(inst, lambda, "guided_target_score");
  if (t < 1 || t > schedule.T) {
    throw std::out_of_range("guided_target_score: timestep out of schedule range");
  }
  if (x_t.channels != 1 || eps.channels != 1 || x_t.h != eps.h || x_t.w != eps.w) {
    throw std::invalid_argument("guided_target_score: shape mismatch");
  }
  const int n = inst.num_vars();
  const std::vector<double> x_flat = flatten_from_grid(x_t);
  if (static_cast<int>(x_flat.size()) != n || static_cast<int>(x_star.size()) != n) {
    throw std::invalid_argument("guided_target_score: grid does not match instance size");
  }

  GridTensor target = eps;
  target.pad_mask = x_t.pad_mask;
  const double root_abar = std::sqrt(schedule.alpha_bar_at(t));

  if (g.gamma_o != 0.0) {
    std::vector<double> corr(n);
    for (int j = 0; j < n; ++j) {
      const double xr = inst.integrality[j] ? std::floor(x_flat[j] + 0.5) : x_flat[j];
      corr[j] = g.gamma_o * root_abar * inst.c[j] * sign0(inst.c[j] * (xr - x_star[j]));
    }
    int j = 0;
    for (int p = 0; p < target.cells(); ++p) {
      if (target.pad_mask[p]) target.values[p] -= corr[j++];
    }
  }
  if (g.gamma_c != 0.0) {
    std::vector<double> row_scale(inst.num_rows(), 1.0);
    if (!g.simplified_constraint_gradient) {
      const std::vector<double> ax = inst.A.multiply(x_flat);
      for (int i = 0; i < inst.num_rows(); ++i) row_scale[i] = ax[i] < inst.b[i] ? 1.0 : 0.0;
    }
    std::vector<double> scaled_lambda(lambda);
    for (int i = 0; i < inst.num_rows(); ++i) scaled_lambda[i] *= row_scale[i];
    const std::vector<double> at_lambda = inst.A.multiply_transpose(scaled_lambda);
    int j = 0;
    for (int p = 0; p < target.cells(); ++p) {
      if (target.pad_mask[p]) target.values[p] += g.gamma_c * root_abar * at_lambda[j++];
    }
  }
  target.zero_pads();
  return target;
}

}  // namespace solgen
