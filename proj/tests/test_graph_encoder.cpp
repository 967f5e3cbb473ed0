/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "solgen/generators.hpp"
#include "solgen/graph_encoder.hpp"
#include "solgen/instance_io.hpp"
#include "test_util.hpp"

using namespace solgen;
using solgen::testing::make_binary_instance;
using solgen::testing::make_instance;
using solgen::testing::RowSpec;

TEST_CASE("bipartite graph mirrors the nonzero structure") {
  const MilpInstance inst = make_instance({1.0}, {{{2.0}, RowSense::geq, 1.0}}, {0.0}, {1.0},
                                          {1});
  const BipartiteGraph g = build_bipartite(inst);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].row == 0);
  CHECK(g.edges[0].col == 0);
  CHECK(g.edges[0].value == 2.0);
  CHECK(g.var_features[4] == 1.0);  // degree
  CHECK(g.con_features[2] == 1.0);  // row nnz
}

TEST_CASE("variable degrees equal column counts on a set cover") {
  GeneratorConfig cfg;
  cfg.sc_sets = 15;
  cfg.sc_elements = 10;
  cfg.sc_density = 0.3;
  cfg.seed = 3;
  const MilpInstance inst = gen_set_cover(cfg);
  const BipartiteGraph g = build_bipartite(inst);
  std::vector<int> count(inst.num_vars(), 0);
  for (const auto& e : g.edges) ++count[e.col];
  for (int j = 0; j < inst.num_vars(); ++j) {
    CHECK(g.var_features[j * BipartiteGraph::kVarFeatures + 4] == count[j]);
  }
  CHECK(static_cast<int>(g.edges.size()) == inst.A.nnz());
}

TEST_CASE("embedding tokens have one row per variable") {
  GeneratorConfig cfg;
  cfg.benchmark = Benchmark::ca;
  cfg.ca_bids = 9;
  cfg.ca_items = 6;
  cfg.seed = 8;
  const MilpInstance inst = to_canonical_min(gen_combinatorial_auction(cfg));
  EncoderConfig ecfg;
  Rng rng(4);
  const ParamSet params = make_encoder_params(ecfg, rng);
  const ConditionEmbedding emb = encode(build_bipartite(inst), params, ecfg);
  CHECK(emb.L == inst.num_vars());
  CHECK(emb.D == ecfg.dim);
  for (double v : emb.tokens) CHECK(std::isfinite(v));
}

TEST_CASE("zero weights broadcast the bias through the stack") {
  const MilpInstance inst = make_binary_instance(
      {1.0, 2.0, 3.0}, {{{1.0, 1.0, 0.0}, RowSense::geq, 1.0}});
  EncoderConfig ecfg;
  ecfg.dim = 8;
  Rng rng(1);
  ParamSet params = make_encoder_params(ecfg, rng);
  for (size_t t = 0; t < params.tensors.size(); ++t) {
    const bool is_bias = params.tensors[t].shape.size() == 1;
    for (double& v : params.tensors[t].data) v = is_bias ? v : 0.0;
  }
  const ConditionEmbedding emb = encode(build_bipartite(inst), params, ecfg);
  for (int l = 1; l < emb.L; ++l) {
    for (int d = 0; d < emb.D; ++d) CHECK(emb.at(l, d) == emb.at(0, d));
  }
}

TEST_CASE("permuting variables permutes token rows identically") {
  GeneratorConfig cfg;
  cfg.sc_sets = 7;
  cfg.sc_elements = 5;
  cfg.sc_density = 0.4;
  cfg.seed = 5;
  const MilpInstance inst = gen_set_cover(cfg);
  EncoderConfig ecfg;
  ecfg.dim = 16;
  Rng rng(2);
  const ParamSet params = make_encoder_params(ecfg, rng);
  const ConditionEmbedding base = encode(build_bipartite(inst), params, ecfg);

  // reverse the variable order
  const int n = inst.num_vars();
  MilpInstance perm = inst;
  for (int j = 0; j < n; ++j) {
    perm.c[j] = inst.c[n - 1 - j];
    perm.lower[j] = inst.lower[n - 1 - j];
    perm.upper[j] = inst.upper[n - 1 - j];
    perm.integrality[j] = inst.integrality[n - 1 - j];
  }
  perm.A = SparseMatrix{};
  perm.A.cols = n;
  for (int i = 0; i < inst.A.rows; ++i) {
    std::vector<int> cols;
    std::vector<double> vals;
    for (int k = inst.A.row_start[i]; k < inst.A.row_start[i + 1]; ++k) {
      cols.push_back(n - 1 - inst.A.col_index[k]);
      vals.push_back(inst.A.value[k]);
    }
    perm.A.add_row(cols, vals);
  }
  const ConditionEmbedding permuted = encode(build_bipartite(perm), params, ecfg);
  for (int l = 0; l < n; ++l) {
    for (int d = 0; d < ecfg.dim; ++d) {
      CHECK(permuted.at(l, d) == doctest::Approx(base.at(n - 1 - l, d)).epsilon(1e-12));
    }
  }
}

TEST_CASE("encoder backward matches finite differences") {
  GeneratorConfig cfg;
  cfg.sc_sets = 6;
  cfg.sc_elements = 4;
  cfg.sc_density = 0.5;
  cfg.seed = 12;
  const MilpInstance inst = gen_set_cover(cfg);
  const BipartiteGraph graph = build_bipartite(inst);
  EncoderConfig ecfg;
  ecfg.dim = 6;
  Rng rng(9);
  const ParamSet params = make_encoder_params(ecfg, rng);

  // random linear head over tokens
  std::vector<double> head(static_cast<size_t>(inst.num_vars()) * ecfg.dim);
  for (double& v : head) v = rng.normal();

  auto scalar = [&](const ParamSet& p) {
    const ConditionEmbedding emb = encode(graph, p, ecfg);
    double s = 0.0;
    for (size_t i = 0; i < head.size(); ++i) s += head[i] * emb.tokens[i];
    return s;
  };
  const ParamSet analytic = encode_backward(graph, params, ecfg, head);
  const ParamSet numeric = oracles::finite_difference_grads(params, scalar, 1e-6);
  CHECK(oracles::max_rel_error(analytic, numeric) < 1e-4);
}

TEST_CASE("encoding is deterministic given parameters") {
  const MilpInstance inst = to_canonical_min(fixed_toy_instance());
  EncoderConfig ecfg;
  Rng rng(30);
  const ParamSet params = make_encoder_params(ecfg, rng);
  const ConditionEmbedding a = encode(build_bipartite(inst), params, ecfg);
  const ConditionEmbedding b = encode(build_bipartite(inst), params, ecfg);
  CHECK(a.tokens == b.tokens);
}
