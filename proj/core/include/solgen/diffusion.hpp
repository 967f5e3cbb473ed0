/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <vector>

#include "solgen/graph_encoder.hpp"
#include "solgen/grid.hpp"
#include "solgen/lagrangian.hpp"
#include "solgen/milp.hpp"
#include "solgen/nn.hpp"
#include "solgen/schedule.hpp"
#include "solgen/score_net.hpp"

namespace solgen {

// Per-variable affine map between normalized diffusion space and instance
// space: x_inst = offset + scale * x_norm. Identity for binary and [0,1]
// variables; min-max for continuous variables with finite ranges.
struct ValueTransform {
  std::vector<double> offset;
  std::vector<double> scale;

  static ValueTransform identity(int n);
  static ValueTransform from_bounds(const MilpInstance& inst);
  bool is_identity() const;
  std::vector<double> to_instance(const std::vector<double>& x_norm) const;
  std::vector<double> to_normalized(const std::vector<double>& x_inst) const;
};

// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps, elementwise on the grid.
GridTensor forward_sample(const GridTensor& x0, int t, const GridTensor& eps,
                          const NoiseSchedule& schedule);

// Straight-through rounding: hard round on integer-masked entries with the
// sigmoid-tempered soft gradient; continuous entries pass through.
struct SteRound {
  std::vector<double> value;
  std::vector<double> grad;  // d(soft)/dx, used in place of the hard round's zero
};
SteRound ste_round(const std::vector<double>& x, const std::vector<uint8_t>& integrality,
                   double temperature);

struct DatasetEntry {
  MilpInstance instance;  // canonical-min
  std::vector<double> x_star;
  std::vector<double> lambda;
  ConditionEmbedding embedding;
  bool optimal = true;  // label solved to proven optimality
};

struct TrainConfig {
  int grid_h = 0;
  int grid_w = 0;
  int T = 20;
  int channels = 32;
  int heads = 4;
  GuidanceConfig guidance;
  int batch_size = 32;
  double learning_rate = 1e-3;
  int epochs = 100;
  uint64_t seed = 0;
  double ste_temperature = 0.5;
  double beta_start = 1e-4;
  // beta_end <= 0 calibrates the linear schedule so that
  // alpha_bar_T == terminal_alpha_bar; sampling starts from N(0, I), so the
  // forward process must actually reach it within the configured T.
  double beta_end = 0.0;
  double terminal_alpha_bar = 5e-3;

  void validate() const;
};

// Largest-beta_end linear schedule hitting alpha_bar_T == terminal target
// (bisection on the cumulative product).
NoiseSchedule make_calibrated_schedule(int T, double beta_start, double terminal_alpha_bar);

struct TrainOutput {
  ParamSet params;
  DenoiserConfig net;
  NoiseSchedule schedule;
  // loss_curve[0] is the pre-training evaluation; entries 1.. are per-epoch
  // mean losses.
  std::vector<double> loss_curve;
};

// Guided score-matching training. Deterministic given cfg.seed; aborts with
// the offending epoch/batch on NaN loss.
TrainOutput train(const std::vector<DatasetEntry>& dataset, const TrainConfig& cfg);

// Mean per-cell squared error between s_theta and the guided target over the
// dataset, with the per-sample (t, eps) draws derived from pass_seed exactly
// as train() derives them.
double evaluate_loss(const ParamSet& params, const DenoiserConfig& net,
                     const std::vector<DatasetEntry>& dataset, const TrainConfig& cfg,
                     const NoiseSchedule& schedule, uint64_t pass_seed);

// Deterministic per-(pass, sample) draw used by train/evaluate_loss.
void draw_timestep_and_noise(uint64_t pass_seed, size_t sample_index, int T,
                             const GridTensor& shape_like, int* t_out, GridTensor* eps_out);

// DDPM reverse sampling over the full schedule; deterministic per seed.
// When non-null, *trajectory receives the flattened initial noise followed
// by each iterate down to the final sample.
std::vector<double> sample_ddpm(const ParamSet& params, const DenoiserConfig& net, int n,
                                const ConditionEmbedding& emb, const NoiseSchedule& schedule,
                                uint64_t seed,
                                std::vector<std::vector<double>>* trajectory = nullptr);

// Deterministic DDIM over an evenly strided subsequence of sample_steps
// timesteps, truncated at stop_index (in schedule-step units): stop_index = 0
// runs the full trajectory, stop_index = T returns the initial noise.
std::vector<double> sample_ddim_earlystop(const ParamSet& params, const DenoiserConfig& net,
                                          int n, const ConditionEmbedding& emb,
                                          const NoiseSchedule& schedule, int sample_steps,
                                          int stop_index, uint64_t seed,
                                          std::vector<std::vector<double>>* trajectory = nullptr);

struct SampleConfig {
  enum class Sampler : uint8_t { ddpm, ddim_earlystop };
  Sampler sampler = Sampler::ddpm;
  int sample_steps = 0;     // DDIM subsequence length; 0 = schedule T
  int early_stop_index = 0;
  int k = 1;                // diverse candidate count
  uint64_t seed = 0;
  int trust_radius = 0;     // Delta for the downstream search

  void validate(int T) const;
};

struct DiverseResult {
  std::vector<std::vector<double>> candidates;  // instance-space vectors
  std::vector<double> penalties;
  int best_index = -1;
};

// k independent samples from per-candidate seed streams; best by lowest
// penalty, ties by objective, then by candidate index.
DiverseResult generate_diverse(const ParamSet& params, const DenoiserConfig& net,
                               const ConditionEmbedding& emb, const NoiseSchedule& schedule,
                               const SampleConfig& cfg, const MilpInstance& inst,
                               const std::vector<double>& lambda,
                               const ValueTransform* transform = nullptr);

}  // namespace solgen
