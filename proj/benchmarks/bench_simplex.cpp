/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include <benchmark/benchmark.h>

#include "solgen/generators.hpp"
#include "solgen/simplex.hpp"

namespace {

void BM_SimplexToy2D(benchmark::State& state) {
  const solgen::MilpInstance inst = solgen::fixed_toy_instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solgen::solve_lp(inst));
  }
}
BENCHMARK(BM_SimplexToy2D);

void BM_SimplexSetCoverRelaxation(benchmark::State& state) {
  solgen::GeneratorConfig cfg;
  cfg.sc_sets = static_cast<int>(state.range(0));
  cfg.sc_elements = static_cast<int>(state.range(0) * 2 / 3);
  cfg.sc_density = 0.15;
  cfg.seed = 7;
  const solgen::MilpInstance inst = solgen::gen_set_cover(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solgen::solve_lp(inst));
  }
}
BENCHMARK(BM_SimplexSetCoverRelaxation)->Arg(48)->Arg(96)->Arg(192);

}  // namespace
