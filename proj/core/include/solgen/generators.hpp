/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <string>

#include "solgen/milp.hpp"

namespace solgen {

enum class Benchmark : uint8_t { set_cover, mis, ca, cfl, toy2d };

std::string benchmark_name(Benchmark b);
Benchmark benchmark_from_name(const std::string& name);

// Scale and weight-range knobs for every instance family. Weight ranges
// beyond the global [0,20] cost range are project defaults.
struct GeneratorConfig {
  Benchmark benchmark = Benchmark::set_cover;
  uint64_t seed = 0;

  // set cover: n sets over m elements, Bernoulli incidence
  int sc_sets = 48;
  int sc_elements = 30;
  double sc_density = 0.15;
  double sc_cost_min = 0.0;
  double sc_cost_max = 20.0;

  // maximum independent set: Erdos-Renyi G(n, p)
  int mis_nodes = 45;
  double mis_edge_prob = 0.08;
  bool mis_weighted = false;
  double mis_weight_min = 1.0;
  double mis_weight_max = 20.0;

  // combinatorial auction: B bids over M items
  int ca_bids = 48;
  int ca_items = 24;
  int ca_bundle_min = 2;
  int ca_bundle_max = 4;
  double ca_value_min = 1.0;
  double ca_value_max = 20.0;

  // capacitated facility location
  int cfl_facilities = 3;
  int cfl_customers = 4;
  double cfl_fixed_min = 5.0;
  double cfl_fixed_max = 20.0;
  double cfl_transport_min = 1.0;
  double cfl_transport_max = 10.0;
  double cfl_demand_min = 1.0;
  double cfl_demand_max = 5.0;
  double cfl_capacity_min = 4.0;
  double cfl_capacity_max = 12.0;

  // toy 2D LP: random unit-norm rows plus the four box rows
  int toy_rows = 12;

  void validate() const;

  // Medium-scale presets (variables, constraints) per family:
  // SC (500, 1000), MIS (500, ~7820), CA (500, ~1095), CFL (2550, 2600).
  static GeneratorConfig medium(Benchmark b, uint64_t seed);
};

MilpInstance gen_set_cover(const GeneratorConfig& cfg);
MilpInstance gen_max_independent_set(const GeneratorConfig& cfg);
MilpInstance gen_combinatorial_auction(const GeneratorConfig& cfg);
MilpInstance gen_capacitated_facility(const GeneratorConfig& cfg);
MilpInstance gen_toy_2d_lp(uint64_t seed, int random_rows = 12);

// The 16-constraint reference 2D LP, coefficients reproduced exactly.
MilpInstance fixed_toy_instance();

// Dispatch on cfg.benchmark.
MilpInstance generate(const GeneratorConfig& cfg);

}  // namespace solgen
