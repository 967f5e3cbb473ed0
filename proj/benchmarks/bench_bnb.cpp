/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include <benchmark/benchmark.h>

#include "solgen/bnb.hpp"
#include "solgen/generators.hpp"

namespace {

void BM_BranchAndBoundMis(benchmark::State& state) {
  solgen::GeneratorConfig cfg;
  cfg.benchmark = solgen::Benchmark::mis;
  cfg.mis_nodes = static_cast<int>(state.range(0));
  cfg.mis_edge_prob = 0.1;
  cfg.seed = 3;
  const solgen::MilpInstance inst =
      solgen::to_canonical_min(solgen::gen_max_independent_set(cfg));
  solgen::SolveLimits limits;
  limits.gap_tolerance = 0.0;
  limits.node_limit = 1000000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solgen::solve_milp(inst, limits));
  }
}
BENCHMARK(BM_BranchAndBoundMis)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TrustRegionRestrictedSolve(benchmark::State& state) {
  solgen::GeneratorConfig cfg;
  cfg.sc_sets = 48;
  cfg.sc_elements = 30;
  cfg.sc_density = 0.15;
  cfg.seed = 5;
  const solgen::MilpInstance inst = solgen::gen_set_cover(cfg);
  solgen::TrustRegionSpec spec;
  spec.center.assign(48, 1.0);
  spec.radius = 10;
  const solgen::MilpInstance ball = solgen::add_trust_region(inst, spec);
  solgen::SolveLimits limits;
  limits.node_limit = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solgen::solve_milp(ball, limits));
  }
}
BENCHMARK(BM_TrustRegionRestrictedSolve)->Unit(benchmark::kMillisecond);

}  // namespace
