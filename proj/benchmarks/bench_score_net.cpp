/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include <benchmark/benchmark.h>

#include "solgen/generators.hpp"
#include "solgen/graph_encoder.hpp"
#include "solgen/rng.hpp"
#include "solgen/score_net.hpp"

namespace {

void BM_DenoiserForward(benchmark::State& state) {
  solgen::DenoiserConfig cfg;
  cfg.grid_h = 6;
  cfg.grid_w = 8;
  solgen::Rng rng(1);
  const solgen::ParamSet params = solgen::make_denoiser_params(cfg, rng);
  solgen::ConditionEmbedding emb;
  emb.L = 48;
  emb.D = cfg.token_dim;
  emb.tokens.resize(static_cast<size_t>(emb.L) * emb.D);
  for (double& v : emb.tokens) v = rng.normal();
  std::vector<double> x(48);
  for (double& v : x) v = rng.normal();
  const solgen::GridTensor x_t = solgen::reshape_to_grid(x, 6, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solgen::denoiser_forward(params, cfg, x_t, 5, emb));
  }
}
BENCHMARK(BM_DenoiserForward)->Unit(benchmark::kMicrosecond);

void BM_EncoderForward(benchmark::State& state) {
  solgen::GeneratorConfig cfg;
  cfg.sc_sets = 48;
  cfg.sc_elements = 30;
  cfg.sc_density = 0.15;
  cfg.seed = 2;
  const solgen::MilpInstance inst = solgen::gen_set_cover(cfg);
  const solgen::BipartiteGraph graph = solgen::build_bipartite(inst);
  solgen::EncoderConfig ecfg;
  solgen::Rng rng(3);
  const solgen::ParamSet params = solgen::make_encoder_params(ecfg, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solgen::encode(graph, params, ecfg));
  }
}
BENCHMARK(BM_EncoderForward)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
