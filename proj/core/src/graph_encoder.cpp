/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/graph_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solgen {

BipartiteGraph build_bipartite(const MilpInstance& inst) {
  inst.validate();
  BipartiteGraph g;
  g.num_vars = inst.num_vars();
  g.num_cons = inst.num_rows();
  g.var_features.assign(static_cast<size_t>(g.num_vars) * BipartiteGraph::kVarFeatures, 0.0);
  g.con_features.assign(static_cast<size_t>(g.num_cons) * BipartiteGraph::kConFeatures, 0.0);

  std::vector<int> var_degree(g.num_vars, 0);
  std::vector<double> col_norm2(g.num_vars, 0.0), col_sum(g.num_vars, 0.0),
      col_rhs(g.num_vars, 0.0);
  for (int i = 0; i < inst.A.rows; ++i) {
    for (int k = inst.A.row_start[i]; k < inst.A.row_start[i + 1]; ++k) {
      const int j = inst.A.col_index[k];
      const double a = inst.A.value[k];
      g.edges.push_back({i, j, a});
      ++var_degree[j];
      col_norm2[j] += a * a;
      col_sum[j] += a;
      col_rhs[j] += a * inst.b[i];
    }
  }

  auto clamp_bound = [](double v) {
    return std::clamp(v, -BipartiteGraph::kFeatureBoundClamp, BipartiteGraph::kFeatureBoundClamp);
  };
  for (int j = 0; j < g.num_vars; ++j) {
    double* f = &g.var_features[static_cast<size_t>(j) * BipartiteGraph::kVarFeatures];
    f[0] = inst.c[j];
    f[1] = clamp_bound(inst.lower[j]);
    f[2] = clamp_bound(inst.upper[j]);
    f[3] = inst.integrality[j] ? 1.0 : 0.0;
    f[4] = static_cast<double>(var_degree[j]);
    f[5] = std::sqrt(col_norm2[j]);
    f[6] = var_degree[j] > 0 ? col_sum[j] / var_degree[j] : 0.0;
    f[7] = var_degree[j] > 0 ? col_rhs[j] / var_degree[j] : 0.0;
  }
  for (int i = 0; i < g.num_cons; ++i) {
    double norm2 = 0.0;
    for (int k = inst.A.row_start[i]; k < inst.A.row_start[i + 1]; ++k) {
      norm2 += inst.A.value[k] * inst.A.value[k];
    }
    double* f = &g.con_features[static_cast<size_t>(i) * BipartiteGraph::kConFeatures];
    f[0] = inst.b[i];
    f[1] = std::sqrt(norm2);
    f[2] = static_cast<double>(inst.A.row_start[i + 1] - inst.A.row_start[i]);
  }
  return g;
}

namespace {

// hidden = tanh(X W + M Wm + b); plain matrix helpers over row-major buffers
void affine_tanh(const std::vector<double>& x, int rows, int in_dim, const Tensor& w,
                 const std::vector<double>* msg, const Tensor* wm, const Tensor& b, int out_dim,
                 std::vector<double>& out) {
  out.assign(static_cast<size_t>(rows) * out_dim, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int o = 0; o < out_dim; ++o) {
      double s = b[o];
      for (int i = 0; i < in_dim; ++i) s += x[static_cast<size_t>(r) * in_dim + i] * w.at(i, o);
      if (msg != nullptr) {
        for (int i = 0; i < out_dim; ++i) {
          s += (*msg)[static_cast<size_t>(r) * out_dim + i] * wm->at(i, o);
        }
      }
      out[static_cast<size_t>(r) * out_dim + o] = std::tanh(s);
    }
  }
}

struct Adjacency {
  // per constraint: (variable, a_ij); per variable: (constraint, a_ij)
  std::vector<std::vector<std::pair<int, double>>> con_nbrs;
  std::vector<std::vector<std::pair<int, double>>> var_nbrs;
};

Adjacency make_adjacency(const BipartiteGraph& g) {
  Adjacency adj;
  adj.con_nbrs.resize(g.num_cons);
  adj.var_nbrs.resize(g.num_vars);
  for (const auto& e : g.edges) {
    adj.con_nbrs[e.row].push_back({e.col, e.value});
    adj.var_nbrs[e.col].push_back({e.row, e.value});
  }
  return adj;
}

// mean over neighbors of a_ij * h[nbr]
void aggregate(const std::vector<std::vector<std::pair<int, double>>>& nbrs,
               const std::vector<double>& h, int dim, std::vector<double>& out) {
  out.assign(nbrs.size() * dim, 0.0);
  for (size_t r = 0; r < nbrs.size(); ++r) {
    if (nbrs[r].empty()) continue;
    const double inv = 1.0 / static_cast<double>(nbrs[r].size());
    for (const auto& [src, a] : nbrs[r]) {
      for (int d = 0; d < dim; ++d) {
        out[r * dim + d] += a * inv * h[static_cast<size_t>(src) * dim + d];
      }
    }
  }
}

struct ForwardCache {
  std::vector<std::vector<double>> hv;  // rounds+1 states, n x D
  std::vector<std::vector<double>> hc;  // rounds+1 states, m x D
  std::vector<std::vector<double>> mc;  // per round, m x D (var -> con messages)
  std::vector<std::vector<double>> mv;  // per round, n x D (con -> var messages)
};

ForwardCache run_forward(const BipartiteGraph& g, const ParamSet& params,
                         const EncoderConfig& cfg) {
  const int D = cfg.dim;
  Adjacency adj = make_adjacency(g);
  ForwardCache cache;
  cache.hv.resize(cfg.rounds + 1);
  cache.hc.resize(cfg.rounds + 1);
  cache.mc.resize(cfg.rounds);
  cache.mv.resize(cfg.rounds);

  affine_tanh(g.var_features, g.num_vars, BipartiteGraph::kVarFeatures, params.at("var_embed_w"),
              nullptr, nullptr, params.at("var_embed_b"), D, cache.hv[0]);
  affine_tanh(g.con_features, g.num_cons, BipartiteGraph::kConFeatures, params.at("con_embed_w"),
              nullptr, nullptr, params.at("con_embed_b"), D, cache.hc[0]);

  for (int r = 0; r < cfg.rounds; ++r) {
    const std::string sr = std::to_string(r);
    aggregate(adj.con_nbrs, cache.hv[r], D, cache.mc[r]);
    affine_tanh(cache.hc[r], g.num_cons, D, params.at("con_self_w" + sr), &cache.mc[r],
                &params.at("con_msg_w" + sr), params.at("con_b" + sr), D, cache.hc[r + 1]);
    aggregate(adj.var_nbrs, cache.hc[r + 1], D, cache.mv[r]);
    affine_tanh(cache.hv[r], g.num_vars, D, params.at("var_self_w" + sr), &cache.mv[r],
                &params.at("var_msg_w" + sr), params.at("var_b" + sr), D, cache.hv[r + 1]);
  }
  return cache;
}

}  // namespace

ParamSet make_encoder_params(const EncoderConfig& cfg, Rng& rng) {
  const int D = cfg.dim;
  ParamSet p;
  p.add("var_embed_w", {BipartiteGraph::kVarFeatures, D});
  p.add("var_embed_b", {D});
  p.add("con_embed_w", {BipartiteGraph::kConFeatures, D});
  p.add("con_embed_b", {D});
  for (int r = 0; r < cfg.rounds; ++r) {
    const std::string sr = std::to_string(r);
    p.add("con_self_w" + sr, {D, D});
    p.add("con_msg_w" + sr, {D, D});
    p.add("con_b" + sr, {D});
    p.add("var_self_w" + sr, {D, D});
    p.add("var_msg_w" + sr, {D, D});
    p.add("var_b" + sr, {D});
  }
  for (size_t i = 0; i < p.tensors.size(); ++i) {
    const bool bias = p.tensors[i].shape.size() == 1;
    init_uniform(p.tensors[i], bias ? 0 : p.tensors[i].shape[0], rng);
  }
  return p;
}

ConditionEmbedding encode(const BipartiteGraph& g, const ParamSet& params,
                          const EncoderConfig& cfg) {
  ForwardCache cache = run_forward(g, params, cfg);
  ConditionEmbedding emb;
  emb.L = g.num_vars;
  emb.D = cfg.dim;
  emb.tokens = cache.hv[cfg.rounds];
  return emb;
}

ParamSet encode_backward(const BipartiteGraph& g, const ParamSet& params,
                         const EncoderConfig& cfg, const std::vector<double>& d_tokens) {
  const int D = cfg.dim;
  if (d_tokens.size() != static_cast<size_t>(g.num_vars) * D) {
    throw std::invalid_argument("encode_backward: d_tokens has wrong size");
  }
  Adjacency adj = make_adjacency(g);
  ForwardCache cache = run_forward(g, params, cfg);
  ParamSet grads = params.zeros_like();

  std::vector<std::vector<double>> d_hv(cfg.rounds + 1), d_hc(cfg.rounds + 1);
  for (int r = 0; r <= cfg.rounds; ++r) {
    d_hv[r].assign(static_cast<size_t>(g.num_vars) * D, 0.0);
    d_hc[r].assign(static_cast<size_t>(g.num_cons) * D, 0.0);
  }
  d_hv[cfg.rounds] = d_tokens;

  auto backprop_affine = [&](const std::vector<double>& d_h, const std::vector<double>& h_out,
                             const std::vector<double>& x_in, int rows, int in_dim,
                             const Tensor& w, Tensor& dw, const std::vector<double>* msg,
                             const Tensor* wm, Tensor* dwm, Tensor& db,
                             std::vector<double>* d_x, std::vector<double>* d_msg) {
    // z-grad through tanh, then accumulate into weights and inputs
    for (int r = 0; r < rows; ++r) {
      for (int o = 0; o < D; ++o) {
        const double y = h_out[static_cast<size_t>(r) * D + o];
        const double dz = d_h[static_cast<size_t>(r) * D + o] * (1.0 - y * y);
        if (dz == 0.0) continue;
        db[o] += dz;
        for (int i = 0; i < in_dim; ++i) {
          dw.at(i, o) += x_in[static_cast<size_t>(r) * in_dim + i] * dz;
          if (d_x != nullptr) {
            (*d_x)[static_cast<size_t>(r) * in_dim + i] += w.at(i, o) * dz;
          }
        }
        if (msg != nullptr) {
          for (int i = 0; i < D; ++i) {
            dwm->at(i, o) += (*msg)[static_cast<size_t>(r) * D + i] * dz;
            (*d_msg)[static_cast<size_t>(r) * D + i] += wm->at(i, o) * dz;
          }
        }
      }
    }
  };

  // transpose of aggregate(): scatter message grads back to source states
  auto backprop_aggregate = [&](const std::vector<std::vector<std::pair<int, double>>>& nbrs,
                                const std::vector<double>& d_msg, std::vector<double>& d_src) {
    for (size_t r = 0; r < nbrs.size(); ++r) {
      if (nbrs[r].empty()) continue;
      const double inv = 1.0 / static_cast<double>(nbrs[r].size());
      for (const auto& [src, a] : nbrs[r]) {
        for (int d = 0; d < D; ++d) {
          d_src[static_cast<size_t>(src) * D + d] += a * inv * d_msg[r * D + d];
        }
      }
    }
  };

  for (int r = cfg.rounds - 1; r >= 0; --r) {
    const std::string sr = std::to_string(r);
    std::vector<double> d_mv(static_cast<size_t>(g.num_vars) * D, 0.0);
    backprop_affine(d_hv[r + 1], cache.hv[r + 1], cache.hv[r], g.num_vars, D,
                    params.at("var_self_w" + sr), grads.at("var_self_w" + sr), &cache.mv[r],
                    &params.at("var_msg_w" + sr), &grads.at("var_msg_w" + sr),
                    grads.at("var_b" + sr), &d_hv[r], &d_mv);
    backprop_aggregate(adj.var_nbrs, d_mv, d_hc[r + 1]);

    std::vector<double> d_mc(static_cast<size_t>(g.num_cons) * D, 0.0);
    backprop_affine(d_hc[r + 1], cache.hc[r + 1], cache.hc[r], g.num_cons, D,
                    params.at("con_self_w" + sr), grads.at("con_self_w" + sr), &cache.mc[r],
                    &params.at("con_msg_w" + sr), &grads.at("con_msg_w" + sr),
                    grads.at("con_b" + sr), &d_hc[r], &d_mc);
    backprop_aggregate(adj.con_nbrs, d_mc, d_hv[r]);
  }

  backprop_affine(d_hv[0], cache.hv[0], g.var_features, g.num_vars,
                  BipartiteGraph::kVarFeatures, params.at("var_embed_w"),
                  grads.at("var_embed_w"), nullptr, nullptr, nullptr, grads.at("var_embed_b"),
                  nullptr, nullptr);
  backprop_affine(d_hc[0], cache.hc[0], g.con_features, g.num_cons,
                  BipartiteGraph::kConFeatures, params.at("con_embed_w"),
                  grads.at("con_embed_w"), nullptr, nullptr, nullptr, grads.at("con_embed_b"),
                  nullptr, nullptr);
  return grads;
}

}  // namespace solgen
