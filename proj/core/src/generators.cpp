/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "solgen/rng.hpp"

namespace solgen {

std::string benchmark_name(Benchmark b) {
  switch (b) {
    case Benchmark::set_cover: return "set_cover";
    case Benchmark::mis: return "mis";
    case Benchmark::ca: return "ca";
    case Benchmark::cfl: return "cfl";
    case Benchmark::toy2d: return "toy2d";
  }
  throw std::invalid_argument("benchmark_name: unknown benchmark");
}

Benchmark benchmark_from_name(const std::string& name) {
  if (name == "set_cover" || name == "sc") return Benchmark::set_cover;
  if (name == "mis") return Benchmark::mis;
  if (name == "ca") return Benchmark::ca;
  if (name == "cfl") return Benchmark::cfl;
  if (name == "toy2d" || name == "toy") return Benchmark::toy2d;
  throw std::invalid_argument("unknown benchmark name: " + name);
}

void GeneratorConfig::validate() const {
  auto positive = [](int v, const char* what) {
    if (v < 1) throw std::invalid_argument(std::string("GeneratorConfig: ") + what);
  };
  positive(sc_sets, "sc_sets must be >= 1");
  positive(sc_elements, "sc_elements must be >= 1");
  positive(mis_nodes, "mis_nodes must be >= 1");
  positive(ca_bids, "ca_bids must be >= 1");
  positive(ca_items, "ca_items must be >= 1");
  positive(cfl_facilities, "cfl_facilities must be >= 1");
  positive(cfl_customers, "cfl_customers must be >= 1");
  if (sc_density <= 0.0 || sc_density > 1.0) {
    throw std::invalid_argument("GeneratorConfig: sc_density must be in (0,1]");
  }
  if (mis_edge_prob <= 0.0 || mis_edge_prob > 1.0) {
    throw std::invalid_argument("GeneratorConfig: mis_edge_prob must be in (0,1]");
  }
  if (sc_cost_min > sc_cost_max || ca_value_min > ca_value_max ||
      mis_weight_min > mis_weight_max || cfl_fixed_min > cfl_fixed_max ||
      cfl_transport_min > cfl_transport_max || cfl_demand_min > cfl_demand_max ||
      cfl_capacity_min > cfl_capacity_max) {
    throw std::invalid_argument("GeneratorConfig: empty weight range");
  }
  if (ca_bundle_min < 1 || ca_bundle_min > ca_bundle_max) {
    throw std::invalid_argument("GeneratorConfig: bad bundle size range");
  }
}

GeneratorConfig GeneratorConfig::medium(Benchmark b, uint64_t seed) {
  GeneratorConfig cfg;
  cfg.benchmark = b;
  cfg.seed = seed;
  switch (b) {
    case Benchmark::set_cover:
      cfg.sc_sets = 500;
      cfg.sc_elements = 1000;
      cfg.sc_density = 0.05;
      break;
    case Benchmark::mis:
      cfg.mis_nodes = 500;
      cfg.mis_edge_prob = 0.0627;  // ~7820 edges on 500 nodes
      break;
    case Benchmark::ca:
      cfg.ca_bids = 500;
      cfg.ca_items = 1095;
      cfg.ca_bundle_min = 4;
      cfg.ca_bundle_max = 10;
      break;
    case Benchmark::cfl:
      cfg.cfl_facilities = 50;
      cfg.cfl_customers = 50;
      break;
    case Benchmark::toy2d:
      break;
  }
  return cfg;
}

MilpInstance gen_set_cover(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const int n = cfg.sc_sets;
  const int m = cfg.sc_elements;

  // incidence[i][j] = element i covered by set j
  std::vector<std::vector<uint8_t>> incidence(m, std::vector<uint8_t>(n, 0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) incidence[i][j] = rng.uniform() < cfg.sc_density;
  }
  for (int i = 0; i < m; ++i) {
    int retries = 0;
    while (std::find(incidence[i].begin(), incidence[i].end(), uint8_t{1}) ==
           incidence[i].end()) {
      if (++retries > 100) {
        throw std::runtime_error("gen_set_cover: element uncoverable after 100 retries");
      }
      for (int j = 0; j < n; ++j) incidence[i][j] = rng.uniform() < cfg.sc_density;
    }
  }

  MilpInstance inst;
  inst.name = "sc_n" + std::to_string(n) + "_m" + std::to_string(m) + "_s" +
              std::to_string(cfg.seed);
  inst.sense = Sense::minimize;
  inst.c.resize(n);
  for (int j = 0; j < n; ++j) inst.c[j] = rng.uniform(cfg.sc_cost_min, cfg.sc_cost_max);
  inst.A.cols = n;
  for (int i = 0; i < m; ++i) {
    std::vector<int> cols;
    std::vector<double> vals;
    for (int j = 0; j < n; ++j) {
      if (incidence[i][j]) {
        cols.push_back(j);
        vals.push_back(1.0);
      }
    }
    inst.A.add_row(cols, vals);
    inst.b.push_back(1.0);
    inst.row_sense.push_back(RowSense::geq);
  }
  inst.lower.assign(n, 0.0);
  inst.upper.assign(n, 1.0);
  inst.integrality.assign(n, 1);
  inst.validate();
  return inst;
}

MilpInstance gen_max_independent_set(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const int n = cfg.mis_nodes;

  MilpInstance inst;
  inst.name = "mis_n" + std::to_string(n) + "_s" + std::to_string(cfg.seed);
  inst.sense = Sense::maximize;
  inst.c.resize(n, 1.0);
  if (cfg.mis_weighted) {
    for (int i = 0; i < n; ++i) inst.c[i] = rng.uniform(cfg.mis_weight_min, cfg.mis_weight_max);
  }
  inst.A.cols = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < cfg.mis_edge_prob) {
        inst.A.add_row({i, j}, {1.0, 1.0});
        inst.b.push_back(1.0);
        inst.row_sense.push_back(RowSense::leq);
      }
    }
  }
  inst.lower.assign(n, 0.0);
  inst.upper.assign(n, 1.0);
  inst.integrality.assign(n, 1);
  inst.validate();
  return inst;
}

MilpInstance gen_combinatorial_auction(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const int bids = cfg.ca_bids;
  const int items = cfg.ca_items;

  std::vector<std::vector<int>> bundles(bids);
  for (int b = 0; b < bids; ++b) {
    const int size = std::min(items, rng.uniform_int(cfg.ca_bundle_min, cfg.ca_bundle_max));
    std::set<int> bundle;
    while (static_cast<int>(bundle.size()) < size) bundle.insert(rng.uniform_int(0, items - 1));
    bundles[b].assign(bundle.begin(), bundle.end());
  }

  MilpInstance inst;
  inst.name = "ca_b" + std::to_string(bids) + "_i" + std::to_string(items) + "_s" +
              std::to_string(cfg.seed);
  inst.sense = Sense::maximize;
  inst.c.resize(bids);
  for (int b = 0; b < bids; ++b) inst.c[b] = rng.uniform(cfg.ca_value_min, cfg.ca_value_max);
  inst.A.cols = bids;
  for (int item = 0; item < items; ++item) {
    std::vector<int> cols;
    for (int b = 0; b < bids; ++b) {
      if (std::binary_search(bundles[b].begin(), bundles[b].end(), item)) cols.push_back(b);
    }
    if (cols.empty()) continue;  // item requested by no bid
    inst.A.add_row(cols, std::vector<double>(cols.size(), 1.0));
    inst.b.push_back(1.0);
    inst.row_sense.push_back(RowSense::leq);
  }
  inst.lower.assign(bids, 0.0);
  inst.upper.assign(bids, 1.0);
  inst.integrality.assign(bids, 1);
  inst.validate();
  return inst;
}

MilpInstance gen_capacitated_facility(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const int F = cfg.cfl_facilities;
  const int C = cfg.cfl_customers;
  const int n = F + F * C;  // y_i first, then x_ij in row-major (i*C + j)
  auto xvar = [&](int i, int j) { return F + i * C + j; };

  std::vector<double> fixed(F), capacity(F), demand(C);
  std::vector<std::vector<double>> transport(F, std::vector<double>(C));
  for (int i = 0; i < F; ++i) fixed[i] = rng.uniform(cfg.cfl_fixed_min, cfg.cfl_fixed_max);
  for (int i = 0; i < F; ++i) {
    for (int j = 0; j < C; ++j) transport[i][j] = rng.uniform(cfg.cfl_transport_min, cfg.cfl_transport_max);
  }
  for (int j = 0; j < C; ++j) demand[j] = rng.uniform(cfg.cfl_demand_min, cfg.cfl_demand_max);
  for (int i = 0; i < F; ++i) capacity[i] = rng.uniform(cfg.cfl_capacity_min, cfg.cfl_capacity_max);

  // Scale capacities up if the instance cannot serve total demand.
  double total_demand = 0.0, total_capacity = 0.0;
  for (double d : demand) total_demand += d;
  for (double k : capacity) total_capacity += k;
  if (total_capacity < 1.2 * total_demand) {
    const double scale = 1.2 * total_demand / total_capacity;
    for (double& k : capacity) k *= scale;
  }

  MilpInstance inst;
  inst.name = "cfl_f" + std::to_string(F) + "_c" + std::to_string(C) + "_s" +
              std::to_string(cfg.seed);
  inst.sense = Sense::minimize;
  inst.c.assign(n, 0.0);
  for (int i = 0; i < F; ++i) inst.c[i] = fixed[i];
  for (int i = 0; i < F; ++i) {
    for (int j = 0; j < C; ++j) inst.c[xvar(i, j)] = transport[i][j];
  }
  inst.A.cols = n;
  // demand rows: sum_i x_ij >= 1
  for (int j = 0; j < C; ++j) {
    std::vector<int> cols;
    for (int i = 0; i < F; ++i) cols.push_back(xvar(i, j));
    inst.A.add_row(cols, std::vector<double>(F, 1.0));
    inst.b.push_back(1.0);
    inst.row_sense.push_back(RowSense::geq);
  }
  // capacity rows: sum_j d_j x_ij - K_i y_i <= 0
  for (int i = 0; i < F; ++i) {
    std::vector<int> cols{i};
    std::vector<double> vals{-capacity[i]};
    for (int j = 0; j < C; ++j) {
      cols.push_back(xvar(i, j));
      vals.push_back(demand[j]);
    }
    inst.A.add_row(cols, vals);
    inst.b.push_back(0.0);
    inst.row_sense.push_back(RowSense::leq);
  }
  // linking rows: x_ij - y_i <= 0
  for (int i = 0; i < F; ++i) {
    for (int j = 0; j < C; ++j) {
      inst.A.add_row({i, xvar(i, j)}, {-1.0, 1.0});
      inst.b.push_back(0.0);
      inst.row_sense.push_back(RowSense::leq);
    }
  }
  inst.lower.assign(n, 0.0);
  inst.upper.assign(n, 1.0);
  inst.integrality.assign(n, 0);
  for (int i = 0; i < F; ++i) inst.integrality[i] = 1;
  inst.validate();
  return inst;
}

MilpInstance gen_toy_2d_lp(uint64_t seed, int random_rows) {
  Rng rng(seed);
  MilpInstance inst;
  inst.name = "toy2d_s" + std::to_string(seed);
  inst.sense = Sense::minimize;
  inst.c = {rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0)};
  inst.A.cols = 2;

  // Rows pass on one side of an interior point, so the region is nonempty.
  const double px = rng.uniform(0.15, 0.85);
  const double py = rng.uniform(0.15, 0.85);
  for (int i = 0; i < random_rows; ++i) {
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    const double ax = std::cos(theta);
    const double ay = std::sin(theta);
    const double margin = rng.uniform(0.02, 0.4);
    inst.A.add_row({0, 1}, {ax, ay});
    inst.b.push_back(ax * px + ay * py - margin);
    inst.row_sense.push_back(RowSense::geq);
  }
  // Box rows, matching the reference instance layout.
  inst.A.add_row({0, 1}, {1.0, 0.0});
  inst.b.push_back(0.0);
  inst.A.add_row({0, 1}, {0.0, 1.0});
  inst.b.push_back(0.0);
  inst.A.add_row({0, 1}, {-1.0, 0.0});
  inst.b.push_back(-1.0);
  inst.A.add_row({0, 1}, {0.0, -1.0});
  inst.b.push_back(-1.0);
  for (int i = 0; i < 4; ++i) inst.row_sense.push_back(RowSense::geq);

  inst.lower = {0.0, 0.0};
  inst.upper = {1.0, 1.0};
  inst.integrality = {0, 0};
  inst.validate();
  return inst;
}

MilpInstance fixed_toy_instance() {
  MilpInstance inst;
  inst.name = "toy2d_fixed";
  inst.sense = Sense::minimize;
  inst.c = {2.0828, 4.0374};
  inst.A.cols = 2;
  const double rows[16][3] = {
      {-0.9915, 0.1300, -0.6248}, {-0.8228, -0.5683, -0.9940}, {-0.4874, -0.8732, -0.8212},
      {0.0760, -0.9971, -0.6067}, {0.4869, -0.8735, -0.4103},  {0.9011, -0.4335, 0.0208},
      {1.0000, -0.0052, 0.1056},  {0.8423, 0.5390, 0.3568},    {0.5048, 0.8632, 0.2732},
      {-0.0174, 0.9998, 0.0117},  {-0.4281, 0.9037, -0.1279},  {-0.8852, 0.4653, -0.4563},
      {1.0000, 0.0000, 0.0000},   {0.0000, 1.0000, 0.0000},    {-1.0000, 0.0000, -1.0000},
      {0.0000, -1.0000, -1.0000}};
  for (const auto& r : rows) {
    inst.A.add_row({0, 1}, {r[0], r[1]});
    inst.b.push_back(r[2]);
    inst.row_sense.push_back(RowSense::geq);
  }
  inst.lower = {0.0, 0.0};
  inst.upper = {1.0, 1.0};
  inst.integrality = {0, 0};
  inst.validate();
  return inst;
}

MilpInstance generate(const GeneratorConfig& cfg) {
  switch (cfg.benchmark) {
    case Benchmark::set_cover: return gen_set_cover(cfg);
    case Benchmark::mis: return gen_max_independent_set(cfg);
    case Benchmark::ca: return gen_combinatorial_auction(cfg);
    case Benchmark::cfl: return gen_capacitated_facility(cfg);
    case Benchmark::toy2d: return gen_toy_2d_lp(cfg.seed, cfg.toy_rows);
  }
  throw std::invalid_argument("generate: unknown benchmark");
}

}  // namespace solgen
