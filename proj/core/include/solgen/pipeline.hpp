/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solgen/bnb.hpp"
#include "solgen/diffusion.hpp"
#include "solgen/generators.hpp"
#include "solgen/graph_encoder.hpp"
#include "solgen/milp.hpp"
#include "solgen/score_net.hpp"

namespace solgen {

struct ExperimentConfig {
  GeneratorConfig generator;
  int train_count = 60;
  int test_count = 20;
  TrainConfig train_cfg;
  SampleConfig sample_cfg;
  EncoderConfig encoder_cfg;
  SolveLimits search_limits;  // shared by baseline and guided search
  double repair_budget_seconds = 1.0;
  int subgradient_iterations = 200;
  double subgradient_step = 1.0;
  std::string output_dir = "out";
  uint64_t master_seed = 0;

  void validate() const;
};

// Desk-scale defaults per benchmark; grid keeps h*w = n, diffusion steps and
// guidance weights follow the per-family defaults, the trust radius and
// sampler step count are scaled proportionally from the reference sizes.
ExperimentConfig desk_config(Benchmark b, uint64_t master_seed);

struct DatasetPaths {
  std::string root;
  std::string manifest() const { return root + "/dataset.json"; }
  std::string encoder_file() const { return root + "/encoder.json"; }
  std::string split_dir(const std::string& split) const { return root + "/" + split; }
  std::string instances_dir(const std::string& split) const {
    return root + "/" + split + "/instances";
  }
  std::string labels_dir(const std::string& split) const { return root + "/" + split + "/labels"; }
  std::string embeddings_dir(const std::string& split) const {
    return root + "/" + split + "/embeddings";
  }
  std::string checkpoint_file() const { return root + "/checkpoints/model.ckpt"; }
  std::string results_dir() const { return root + "/results"; }
};

// Generates and writes the train/test instances for cfg (no labels).
void generate_instances(const ExperimentConfig& cfg);

// Solves every instance to labeled optimality (flagging any limit hits),
// caches subgradient multipliers and condition embeddings. Requires
// generate_instances to have run.
void label_dataset(const ExperimentConfig& cfg);

// generate_instances + label_dataset.
void make_dataset(const ExperimentConfig& cfg);

std::vector<DatasetEntry> load_split(const ExperimentConfig& cfg, const std::string& split);

// Trains the denoiser on the train split and writes the model checkpoint;
// returns its path.
std::string train_model(const ExperimentConfig& cfg);

struct GuidedSolveOutcome {
  SearchResult search;
  bool fallback = false;  // trust region unusable; solved unrestricted
  int best_candidate = -1;
  std::vector<double> candidate_penalties;
  std::vector<double> penalty_trajectory;  // P(x_t) of the selected sample path
  Solution repaired_center;
  double generate_seconds = 0.0;
  double repair_seconds = 0.0;
};

// embed -> generate_diverse -> repair -> Hamming trust region -> search.
GuidedSolveOutcome run_guided_solve(const MilpInstance& canonical, const ModelCheckpoint& model,
                                    const SampleConfig& sample_cfg, double repair_budget_seconds,
                                    const SolveLimits& search_limits,
                                    const std::vector<double>& lambda);

// Rescales a multiplier vector for use in the guidance terms so that
// max_j |(A^T lambda)_j| <= 1. Subgradient multipliers carry the dual price
// scale of the instance; the per-coordinate guidance strength is gamma_c
// itself only after this calibration. Pure downscaling: ranking by
// penalty_term is unchanged and the raw lambda keeps its dual-bound role.
std::vector<double> guidance_multiplier(const MilpInstance& inst,
                                        const std::vector<double>& lambda);

// (gap_baseline - gap_method) / |gap_baseline| * 100 with gap_m = obj_m - obj_ref;
// nullopt when gap_baseline == 0 (undefined).
std::optional<double> gap_improvement(double obj_baseline, double obj_method, double obj_ref);

struct MetricsRow {
  std::string method;
  double mean_objective = 0.0;
  double std_objective = 0.0;
  double mean_nodes = 0.0;
  double feasibility_rate = 0.0;
  double mean_generate_seconds = 0.0;
  double mean_repair_seconds = 0.0;
  double mean_search_seconds = 0.0;
  double std_search_seconds = 0.0;
};

// Runs the requested methods ("baseline", "guided") over the test split
// under identical SolveLimits, writes results/metrics.csv and a per-instance
// log, and returns the rows. Objectives are reported in the original sense.
std::vector<MetricsRow> evaluate(const ExperimentConfig& cfg,
                                 const std::vector<std::string>& methods);

std::string metrics_to_csv(const std::vector<MetricsRow>& rows);

// Re-reads the results log and regenerates the SVG plots (bit-identical for
// the same log).
void emit_plots(const std::string& results_dir);

struct ToyStats {
  double initial_mean_distance = 0.0;
  double final_mean_distance = 0.0;
  std::vector<double> mean_distance_per_step;
};

struct ToyConfig {
  int train_instances = 1000;
  int epochs = 40;
  int batch_size = 64;
  int steps = 50;  // diffusion steps, training and sampling
  double gamma_o = 0.1;
  double gamma_c = 0.3;
  int sample_count = 64;
  uint64_t seed = 0;
  std::string output_dir = "out_toy";
};

// Trains on random 2D LPs, samples on the fixed reference LP, writes the
// per-step scatter SVG and distance statistics.
ToyStats toy_experiment(const ToyConfig& cfg);

}  // namespace solgen
