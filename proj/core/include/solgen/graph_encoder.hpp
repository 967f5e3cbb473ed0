/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <vector>

#include "solgen/milp.hpp"
#include "solgen/nn.hpp"

namespace solgen {

// Variable-constraint bipartite graph with fixed, documented feature sets:
//   variable node: c_j, lower, upper, integrality flag, degree,
//                  column 2-norm, column mean, column-rhs correlation
//   constraint node: b_i, row 2-norm, degree
// Infinite bounds are clamped to +-kFeatureBoundClamp so features stay finite.
// Features carry raw magnitudes, so encodings are NOT invariant to row or
// cost rescaling.
struct BipartiteGraph {
  static constexpr int kVarFeatures = 8;
  static constexpr int kConFeatures = 3;
  static constexpr double kFeatureBoundClamp = 1e3;

  struct Edge {
    int row;
    int col;
    double value;
  };

  int num_vars = 0;
  int num_cons = 0;
  std::vector<double> var_features;  // num_vars x kVarFeatures, row-major
  std::vector<double> con_features;  // num_cons x kConFeatures
  std::vector<Edge> edges;           // one per nonzero of A
};

BipartiteGraph build_bipartite(const MilpInstance& inst);

struct ConditionEmbedding {
  int L = 0;  // one token per variable
  int D = 0;
  std::vector<double> tokens;  // L x D, row-major
  std::string instance_id;

  double at(int l, int d) const { return tokens[static_cast<size_t>(l) * D + d]; }
};

struct EncoderConfig {
  int dim = 32;    // token width D
  int rounds = 2;  // message-passing rounds (var->con then con->var each)
};

// Parameter layout is fixed by the config; tanh nonlinearity, mean
// aggregation weighted by the coefficient value.
ParamSet make_encoder_params(const EncoderConfig& cfg, Rng& rng);

ConditionEmbedding encode(const BipartiteGraph& graph, const ParamSet& params,
                          const EncoderConfig& cfg);

// Gradients of a scalar loss w.r.t. encoder parameters given d(loss)/d(tokens).
ParamSet encode_backward(const BipartiteGraph& graph, const ParamSet& params,
                         const EncoderConfig& cfg, const std::vector<double>& d_tokens);

}  // namespace solgen
