/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <vector>

#include "solgen/graph_encoder.hpp"
#include "solgen/grid.hpp"
#include "solgen/lagrangian.hpp"
#include "solgen/nn.hpp"
#include "solgen/schedule.hpp"

namespace solgen {

// Desk-scale conditional denoiser: stem conv, two residual down blocks with
// a 2x pooling step between them (per dimension, only when even), a single
// variable-wise cross-attention at the bottleneck, unpool + skip, two
// residual up blocks, head conv. Timestep embeddings are sinusoidal and
// added per block. Output is zero on padded cells.
struct DenoiserConfig {
  int channels = 32;   // C
  int heads = 4;       // attention heads m, d_k = C/m
  int token_dim = 32;  // D, must match the encoder width
  int grid_h = 0;
  int grid_w = 0;

  void validate() const;
};

ParamSet make_denoiser_params(const DenoiserConfig& cfg, Rng& rng);

// All intermediates needed by the backward pass.
struct DenoiserTrace {
  int h = 0, w = 0, h2 = 0, w2 = 0;
  bool pool_h = false, pool_w = false;
  std::vector<double> input;      // masked input, 1 x h x w
  std::vector<double> temb;       // sinusoidal embedding, C
  std::vector<double> stem_out;   // C x h x w
  // residual blocks: pre-activation of conv1 (+temb), silu output, block output
  struct Block {
    std::vector<double> in;
    std::vector<double> pre1;
    std::vector<double> act1;
    std::vector<double> out;
  };
  Block d1, d2, u1, u2;
  std::vector<double> pooled;     // C x h2 x w2
  std::vector<double> xbar;       // n2 x C (bottleneck cells as rows)
  std::vector<double> attn_q;     // n2 x C
  std::vector<double> attn_k;     // L x C
  std::vector<double> attn_v;     // L x C
  std::vector<double> attn_p;     // heads x n2 x L softmax rows
  std::vector<double> attn_out;   // n2 x C (pre-residual)
  std::vector<double> bottleneck; // C x h2 x w2 after attention residual
  std::vector<double> unpooled;   // C x h x w
  std::vector<double> skip_sum;   // unpooled + d1.out
};

// s_theta(x_t, t, g). Throws on shape mismatch or NaN in the output.
GridTensor denoiser_forward(const ParamSet& params, const DenoiserConfig& cfg,
                            const GridTensor& x_t, int t, const ConditionEmbedding& emb,
                            DenoiserTrace* trace = nullptr);

// Parameter gradients for d(loss)/d(output); the condition tokens are fixed.
ParamSet denoiser_backward(const ParamSet& params, const DenoiserConfig& cfg,
                           const DenoiserTrace& trace, const ConditionEmbedding& emb,
                           const GridTensor& d_out);

// Primitive layers, exposed for the per-layer gradient tests.
namespace layers {

void conv3x3_forward(const std::vector<double>& in, int in_ch, int h, int w,
                     const Tensor& weight, const Tensor& bias, std::vector<double>& out);
void conv3x3_backward(const std::vector<double>& in, int in_ch, int h, int w,
                      const Tensor& weight, const std::vector<double>& d_out, Tensor& d_weight,
                      Tensor& d_bias, std::vector<double>* d_in);

void avgpool_forward(const std::vector<double>& in, int ch, int h, int w, bool pool_h,
                     bool pool_w, std::vector<double>& out);
void avgpool_backward(const std::vector<double>& d_out, int ch, int h, int w, bool pool_h,
                      bool pool_w, std::vector<double>& d_in);
void unpool_forward(const std::vector<double>& in, int ch, int h, int w, bool pool_h,
                    bool pool_w, std::vector<double>& out);
void unpool_backward(const std::vector<double>& d_out, int ch, int h, int w, bool pool_h,
                     bool pool_w, std::vector<double>& d_in);

// rows x C queries against L x D tokens; P rows are probability vectors.
void cross_attention_forward(const std::vector<double>& xbar, int rows, int C,
                             const std::vector<double>& tokens, int L, int D, const Tensor& wq,
                             const Tensor& wk, const Tensor& wv, int heads,
                             std::vector<double>& q, std::vector<double>& k,
                             std::vector<double>& v, std::vector<double>& p,
                             std::vector<double>& out);
void cross_attention_backward(const std::vector<double>& xbar, int rows, int C,
                              const std::vector<double>& tokens, int L, int D, const Tensor& wq,
                              const Tensor& wk, const Tensor& wv, int heads,
                              const std::vector<double>& q, const std::vector<double>& k,
                              const std::vector<double>& v, const std::vector<double>& p,
                              const std::vector<double>& d_out, Tensor& d_wq, Tensor& d_wk,
                              Tensor& d_wv, std::vector<double>& d_xbar);

std::vector<double> sinusoidal_embedding(int t, int dim);

}  // namespace layers

// Versioned binary container: magic + JSON header (configs, tensor shapes,
// benchmark tag) followed by raw little-endian float32 tensor blobs.
struct ModelCheckpoint {
  DenoiserConfig denoiser_cfg;
  EncoderConfig encoder_cfg;
  GuidanceConfig guidance;
  ParamSet denoiser;
  ParamSet encoder;
  NoiseSchedule schedule;
  std::string benchmark;
};

void save_checkpoint(const ModelCheckpoint& ckpt, const std::string& path);
ModelCheckpoint load_checkpoint(const std::string& path);

}  // namespace solgen
