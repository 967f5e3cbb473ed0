/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/score_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace solgen {

void DenoiserConfig::validate() const {
  if (channels < 1 || heads < 1 || token_dim < 1 || grid_h < 1 || grid_w < 1) {
    throw std::invalid_argument("DenoiserConfig: all dimensions must be positive");
  }
  if (channels % heads != 0) {
    throw std::invalid_argument("DenoiserConfig: channels must be divisible by heads");
  }
  if (channels % 2 != 0) {
    throw std::invalid_argument("DenoiserConfig: channels must be even (sinusoidal embedding)");
  }
}

namespace layers {

void conv3x3_forward(const std::vector<double>& in, int in_ch, int h, int w,
                     const Tensor& weight, const Tensor& bias, std::vector<double>& out) {
  const int out_ch = weight.shape[0];
  out.assign(static_cast<size_t>(out_ch) * h * w, 0.0);
  for (int o = 0; o < out_ch; ++o) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double s = bias[o];
        for (int i = 0; i < in_ch; ++i) {
          for (int dy = 0; dy < 3; ++dy) {
            const int yy = y + dy - 1;
            if (yy < 0 || yy >= h) continue;
            for (int dx = 0; dx < 3; ++dx) {
              const int xx = x + dx - 1;
              if (xx < 0 || xx >= w) continue;
              s += in[(static_cast<size_t>(i) * h + yy) * w + xx] *
                   weight.data[((static_cast<size_t>(o) * in_ch + i) * 3 + dy) * 3 + dx];
            }
          }
        }
        out[(static_cast<size_t>(o) * h + y) * w + x] = s;
      }
    }
  }
}

void conv3x3_backward(const std::vector<double>& in, int in_ch, int h, int w,
                      const Tensor& weight, const std::vector<double>& d_out, Tensor& d_weight,
                      Tensor& d_bias, std::vector<double>* d_in) {
  const int out_ch = weight.shape[0];
  if (d_in != nullptr) d_in->assign(static_cast<size_t>(in_ch) * h * w, 0.0);
  for (int o = 0; o < out_ch; ++o) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double g = d_out[(static_cast<size_t>(o) * h + y) * w + x];
        if (g == 0.0) continue;
        d_bias[o] += g;
        for (int i = 0; i < in_ch; ++i) {
          for (int dy = 0; dy < 3; ++dy) {
            const int yy = y + dy - 1;
            if (yy < 0 || yy >= h) continue;
            for (int dx = 0; dx < 3; ++dx) {
              const int xx = x + dx - 1;
              if (xx < 0 || xx >= w) continue;
              const size_t widx = ((static_cast<size_t>(o) * in_ch + i) * 3 + dy) * 3 + dx;
              d_weight.data[widx] += in[(static_cast<size_t>(i) * h + yy) * w + xx] * g;
              if (d_in != nullptr) {
                (*d_in)[(static_cast<size_t>(i) * h + yy) * w + xx] += weight.data[widx] * g;
              }
            }
          }
        }
      }
    }
  }
}

void avgpool_forward(const std::vector<double>& in, int ch, int h, int w, bool pool_h,
                     bool pool_w, std::vector<double>& out) {
  const int fh = pool_h ? 2 : 1, fw = pool_w ? 2 : 1;
  const int h2 = h / fh, w2 = w / fw;
  const double inv = 1.0 / (fh * fw);
  out.assign(static_cast<size_t>(ch) * h2 * w2, 0.0);
  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < h2; ++y) {
      for (int x = 0; x < w2; ++x) {
        double s = 0.0;
        for (int a = 0; a < fh; ++a) {
          for (int b = 0; b < fw; ++b) {
            s += in[(static_cast<size_t>(c) * h + y * fh + a) * w + x * fw + b];
          }
        }
        out[(static_cast<size_t>(c) * h2 + y) * w2 + x] = s * inv;
      }
    }
  }
}

void avgpool_backward(const std::vector<double>& d_out, int ch, int h, int w, bool pool_h,
                      bool pool_w, std::vector<double>& d_in) {
  const int fh = pool_h ? 2 : 1, fw = pool_w ? 2 : 1;
  const int h2 = h / fh, w2 = w / fw;
  const double inv = 1.0 / (fh * fw);
  d_in.assign(static_cast<size_t>(ch) * h * w, 0.0);
  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < h2; ++y) {
      for (int x = 0; x < w2; ++x) {
        const double g = d_out[(static_cast<size_t>(c) * h2 + y) * w2 + x] * inv;
        for (int a = 0; a < fh; ++a) {
          for (int b = 0; b < fw; ++b) {
            d_in[(static_cast<size_t>(c) * h + y * fh + a) * w + x * fw + b] += g;
          }
        }
      }
    }
  }
}

void unpool_forward(const std::vector<double>& in, int ch, int h, int w, bool pool_h,
                    bool pool_w, std::vector<double>& out) {
  const int fh = pool_h ? 2 : 1, fw = pool_w ? 2 : 1;
  const int h2 = h / fh, w2 = w / fw;
  out.assign(static_cast<size_t>(ch) * h * w, 0.0);
  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out[(static_cast<size_t>(c) * h + y) * w + x] =
            in[(static_cast<size_t>(c) * h2 + y / fh) * w2 + x / fw];
      }
    }
  }
}

void unpool_backward(const std::vector<double>& d_out, int ch, int h, int w, bool pool_h,
                     bool pool_w, std::vector<double>& d_in) {
  const int fh = pool_h ? 2 : 1, fw = pool_w ? 2 : 1;
  const int h2 = h / fh, w2 = w / fw;
  d_in.assign(static_cast<size_t>(ch) * h2 * w2, 0.0);
  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        d_in[(static_cast<size_t>(c) * h2 + y / fh) * w2 + x / fw] +=
            d_out[(static_cast<size_t>(c) * h + y) * w + x];
      }
    }
  }
}

void cross_attention_forward(const std::vector<double>& xbar, int rows, int C,
                             const std::vector<double>& tokens, int L, int D, const Tensor& wq,
                             const Tensor& wk, const Tensor& wv, int heads,
                             std::vector<double>& q, std::vector<double>& k,
                             std::vector<double>& v, std::vector<double>& p,
                             std::vector<double>& out) {
  const int dk = C / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  auto matmul = [](const std::vector<double>& a, int ar, int ac, const Tensor& w_,
                   std::vector<double>& o) {
    const int oc = w_.shape[1];
    o.assign(static_cast<size_t>(ar) * oc, 0.0);
    for (int r = 0; r < ar; ++r) {
      for (int i = 0; i < ac; ++i) {
        const double av = a[static_cast<size_t>(r) * ac + i];
        if (av == 0.0) continue;
        for (int c = 0; c < oc; ++c) o[static_cast<size_t>(r) * oc + c] += av * w_.at(i, c);
      }
    }
  };
  matmul(xbar, rows, C, wq, q);
  matmul(tokens, L, D, wk, k);
  matmul(tokens, L, D, wv, v);

  p.assign(static_cast<size_t>(heads) * rows * L, 0.0);
  out.assign(static_cast<size_t>(rows) * C, 0.0);
  std::vector<double> s(L);
  for (int hd = 0; hd < heads; ++hd) {
    const int off = hd * dk;
    for (int r = 0; r < rows; ++r) {
      double mx = -kInf;
      for (int l = 0; l < L; ++l) {
        double dot = 0.0;
        for (int d = 0; d < dk; ++d) {
          dot += q[static_cast<size_t>(r) * C + off + d] * k[static_cast<size_t>(l) * C + off + d];
        }
        s[l] = dot * scale;
        mx = std::max(mx, s[l]);
      }
      double z = 0.0;
      for (int l = 0; l < L; ++l) {
        s[l] = std::exp(s[l] - mx);
        z += s[l];
      }
      double* prow = &p[(static_cast<size_t>(hd) * rows + r) * L];
      for (int l = 0; l < L; ++l) prow[l] = s[l] / z;
      for (int l = 0; l < L; ++l) {
        const double pl = prow[l];
        if (pl == 0.0) continue;
        for (int d = 0; d < dk; ++d) {
          out[static_cast<size_t>(r) * C + off + d] +=
              pl * v[static_cast<size_t>(l) * C + off + d];
        }
      }
    }
  }
}

void cross_attention_backward(const std::vector<double>& xbar, int rows, int C,
                              const std::vector<double>& tokens, int L, int D, const Tensor& wq,
                              const Tensor& wk, const Tensor& wv, int heads,
                              const std::vector<double>& q, const std::vector<double>& k,
                              const std::vector<double>& v, const std::vector<double>& p,
                              const std::vector<double>& d_out, Tensor& d_wq, Tensor& d_wk,
                              Tensor& d_wv, std::vector<double>& d_xbar) {
  const int dk = C / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  std::vector<double> d_q(static_cast<size_t>(rows) * C, 0.0);
  std::vector<double> d_k(static_cast<size_t>(L) * C, 0.0);
  std::vector<double> d_v(static_cast<size_t>(L) * C, 0.0);
  std::vector<double> d_p(L), d_s(L);

  for (int hd = 0; hd < heads; ++hd) {
    const int off = hd * dk;
    for (int r = 0; r < rows; ++r) {
      const double* prow = &p[(static_cast<size_t>(hd) * rows + r) * L];
      double dot_dp_p = 0.0;
      for (int l = 0; l < L; ++l) {
        double dp = 0.0;
        for (int d = 0; d < dk; ++d) {
          const double g = d_out[static_cast<size_t>(r) * C + off + d];
          dp += g * v[static_cast<size_t>(l) * C + off + d];
          d_v[static_cast<size_t>(l) * C + off + d] += prow[l] * g;
        }
        d_p[l] = dp;
        dot_dp_p += dp * prow[l];
      }
      for (int l = 0; l < L; ++l) d_s[l] = prow[l] * (d_p[l] - dot_dp_p);
      for (int l = 0; l < L; ++l) {
        const double ds = d_s[l] * scale;
        if (ds == 0.0) continue;
        for (int d = 0; d < dk; ++d) {
          d_q[static_cast<size_t>(r) * C + off + d] += ds * k[static_cast<size_t>(l) * C + off + d];
          d_k[static_cast<size_t>(l) * C + off + d] += ds * q[static_cast<size_t>(r) * C + off + d];
        }
      }
    }
  }

  d_xbar.assign(static_cast<size_t>(rows) * C, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int i = 0; i < C; ++i) {
      const double xv = xbar[static_cast<size_t>(r) * C + i];
      for (int c = 0; c < C; ++c) {
        const double dq = d_q[static_cast<size_t>(r) * C + c];
        d_wq.at(i, c) += xv * dq;
        d_xbar[static_cast<size_t>(r) * C + i] += wq.at(i, c) * dq;
      }
    }
  }
  for (int l = 0; l < L; ++l) {
    for (int i = 0; i < D; ++i) {
      const double tv = tokens[static_cast<size_t>(l) * D + i];
      if (tv == 0.0) continue;
      for (int c = 0; c < C; ++c) {
        d_wk.at(i, c) += tv * d_k[static_cast<size_t>(l) * C + c];
        d_wv.at(i, c) += tv * d_v[static_cast<size_t>(l) * C + c];
      }
    }
  }
}

std::vector<double> sinusoidal_embedding(int t, int dim) {
  std::vector<double> e(dim, 0.0);
  const int half = dim / 2;
  for (int i = 0; i < half; ++i) {
    const double freq =
        std::exp(-std::log(10000.0) * static_cast<double>(i) / std::max(1, half - 1));
    e[i] = std::sin(t * freq);
    e[half + i] = std::cos(t * freq);
  }
  return e;
}

}  // namespace layers

namespace {

const char* kBlockNames[4] = {"d1", "d2", "u1", "u2"};

}  // namespace

ParamSet make_denoiser_params(const DenoiserConfig& cfg, Rng& rng) {
  cfg.validate();
  const int C = cfg.channels, D = cfg.token_dim;
  ParamSet p;
  p.add("stem_w", {C, 1, 3, 3});
  p.add("stem_b", {C});
  for (const char* blk : kBlockNames) {
    const std::string b(blk);
    p.add(b + "_conv1_w", {C, C, 3, 3});
    p.add(b + "_conv1_b", {C});
    p.add(b + "_conv2_w", {C, C, 3, 3});
    p.add(b + "_conv2_b", {C});
    p.add(b + "_time_w", {C, C});
    p.add(b + "_time_b", {C});
  }
  p.add("attn_wq", {C, C});
  p.add("attn_wk", {D, C});
  p.add("attn_wv", {D, C});
  p.add("head_w", {1, C, 3, 3});
  p.add("head_b", {1});

  for (size_t i = 0; i < p.tensors.size(); ++i) {
    Tensor& t = p.tensors[i];
    int fan_in = 0;
    if (t.shape.size() == 4) {
      fan_in = t.shape[1] * 9;
    } else if (t.shape.size() == 2) {
      fan_in = t.shape[0];
    }
    init_uniform(t, fan_in, rng);
  }
  return p;
}

namespace {

using layers::conv3x3_backward;
using layers::conv3x3_forward;

// out = in + conv2(silu(conv1(in) + time_proj))
void resblock_forward(const ParamSet& params, const std::string& blk,
                      const std::vector<double>& temb, const std::vector<double>& in, int C,
                      int h, int w, DenoiserTrace::Block& cache) {
  cache.in = in;
  conv3x3_forward(in, C, h, w, params.at(blk + "_conv1_w"), params.at(blk + "_conv1_b"),
                  cache.pre1);
  const Tensor& tw = params.at(blk + "_time_w");
  const Tensor& tb = params.at(blk + "_time_b");
  for (int c = 0; c < C; ++c) {
    double tp = tb[c];
    for (int i = 0; i < C; ++i) tp += temb[i] * tw.at(i, c);
    for (int pix = 0; pix < h * w; ++pix) cache.pre1[static_cast<size_t>(c) * h * w + pix] += tp;
  }
  cache.act1.resize(cache.pre1.size());
  for (size_t i = 0; i < cache.pre1.size(); ++i) cache.act1[i] = silu(cache.pre1[i]);
  conv3x3_forward(cache.act1, C, h, w, params.at(blk + "_conv2_w"), params.at(blk + "_conv2_b"),
                  cache.out);
  for (size_t i = 0; i < cache.out.size(); ++i) cache.out[i] += in[i];
}

// returns d(in); accumulates parameter grads
std::vector<double> resblock_backward(const ParamSet& params, ParamSet& grads,
                                      const std::string& blk, const std::vector<double>& temb,
                                      const DenoiserTrace::Block& cache, int C, int h, int w,
                                      const std::vector<double>& d_block_out) {
  std::vector<double> d_act1;
  conv3x3_backward(cache.act1, C, h, w, params.at(blk + "_conv2_w"), d_block_out,
                   grads.at(blk + "_conv2_w"), grads.at(blk + "_conv2_b"), &d_act1);
  std::vector<double> d_pre1(d_act1.size());
  for (size_t i = 0; i < d_act1.size(); ++i) d_pre1[i] = d_act1[i] * silu_grad(cache.pre1[i]);

  Tensor& d_tw = grads.at(blk + "_time_w");
  Tensor& d_tb = grads.at(blk + "_time_b");
  for (int c = 0; c < C; ++c) {
    double s = 0.0;
    for (int pix = 0; pix < h * w; ++pix) s += d_pre1[static_cast<size_t>(c) * h * w + pix];
    d_tb[c] += s;
    for (int i = 0; i < C; ++i) d_tw.at(i, c) += temb[i] * s;
  }

  std::vector<double> d_in;
  conv3x3_backward(cache.in, C, h, w, params.at(blk + "_conv1_w"), d_pre1,
                   grads.at(blk + "_conv1_w"), grads.at(blk + "_conv1_b"), &d_in);
  for (size_t i = 0; i < d_in.size(); ++i) d_in[i] += d_block_out[i];  // residual path
  return d_in;
}

}  // namespace

GridTensor denoiser_forward(const ParamSet& params, const DenoiserConfig& cfg,
                            const GridTensor& x_t, int t, const ConditionEmbedding& emb,
                            DenoiserTrace* trace) {
  cfg.validate();
  if (x_t.channels != 1 || x_t.h != cfg.grid_h || x_t.w != cfg.grid_w) {
    throw std::invalid_argument("denoiser_forward: grid shape mismatch");
  }
  if (emb.D != cfg.token_dim) {
    throw std::invalid_argument("denoiser_forward: token width mismatch");
  }
  const int C = cfg.channels, h = cfg.grid_h, w = cfg.grid_w;
  DenoiserTrace local;
  DenoiserTrace& tr = trace != nullptr ? *trace : local;
  tr.h = h;
  tr.w = w;
  tr.pool_h = h % 2 == 0;
  tr.pool_w = w % 2 == 0;
  tr.h2 = tr.pool_h ? h / 2 : h;
  tr.w2 = tr.pool_w ? w / 2 : w;
  if (tr.h2 * tr.w2 < 2) {
    // keep at least two bottleneck cells so attention queries can
    // differentiate variables on tiny grids
    tr.pool_h = tr.pool_w = false;
    tr.h2 = h;
    tr.w2 = w;
  }
  const int n2 = tr.h2 * tr.w2;

  // Padded input cells are zeroed on entry, so pad perturbations cannot
  // reach any real cell.
  tr.input = x_t.values;
  for (int pix = 0; pix < h * w; ++pix) {
    if (!x_t.pad_mask[pix]) tr.input[pix] = 0.0;
  }
  tr.temb = layers::sinusoidal_embedding(t, C);

  conv3x3_forward(tr.input, 1, h, w, params.at("stem_w"), params.at("stem_b"), tr.stem_out);
  resblock_forward(params, "d1", tr.temb, tr.stem_out, C, h, w, tr.d1);
  layers::avgpool_forward(tr.d1.out, C, h, w, tr.pool_h, tr.pool_w, tr.pooled);
  resblock_forward(params, "d2", tr.temb, tr.pooled, C, tr.h2, tr.w2, tr.d2);

  tr.xbar.assign(static_cast<size_t>(n2) * C, 0.0);
  for (int c = 0; c < C; ++c) {
    for (int pix = 0; pix < n2; ++pix) {
      tr.xbar[static_cast<size_t>(pix) * C + c] = tr.d2.out[static_cast<size_t>(c) * n2 + pix];
    }
  }
  layers::cross_attention_forward(tr.xbar, n2, C, emb.tokens, emb.L, cfg.token_dim,
                                  params.at("attn_wq"), params.at("attn_wk"),
                                  params.at("attn_wv"), cfg.heads, tr.attn_q, tr.attn_k,
                                  tr.attn_v, tr.attn_p, tr.attn_out);
  tr.bottleneck = tr.d2.out;
  for (int c = 0; c < C; ++c) {
    for (int pix = 0; pix < n2; ++pix) {
      tr.bottleneck[static_cast<size_t>(c) * n2 + pix] +=
          tr.attn_out[static_cast<size_t>(pix) * C + c];
    }
  }

  layers::unpool_forward(tr.bottleneck, C, h, w, tr.pool_h, tr.pool_w, tr.unpooled);
  tr.skip_sum = tr.unpooled;
  for (size_t i = 0; i < tr.skip_sum.size(); ++i) tr.skip_sum[i] += tr.d1.out[i];
  resblock_forward(params, "u1", tr.temb, tr.skip_sum, C, h, w, tr.u1);
  resblock_forward(params, "u2", tr.temb, tr.u1.out, C, h, w, tr.u2);

  std::vector<double> head;
  conv3x3_forward(tr.u2.out, C, h, w, params.at("head_w"), params.at("head_b"), head);

  GridTensor out(1, h, w);
  out.pad_mask = x_t.pad_mask;
  out.values = head;
  out.zero_pads();
  for (double v : out.values) {
    if (std::isnan(v) || std::isinf(v)) {
      throw std::runtime_error("denoiser_forward: non-finite output at t=" + std::to_string(t));
    }
  }
  return out;
}

ParamSet denoiser_backward(const ParamSet& params, const DenoiserConfig& cfg,
                           const DenoiserTrace& tr, const ConditionEmbedding& emb,
                           const GridTensor& d_out) {
  const int C = cfg.channels, h = tr.h, w = tr.w;
  const int n2 = tr.h2 * tr.w2;
  ParamSet grads = params.zeros_like();

  // Masked output: pad-cell gradients are dropped.
  std::vector<double> d_head = d_out.values;
  for (int pix = 0; pix < h * w; ++pix) {
    if (!d_out.pad_mask[pix]) d_head[pix] = 0.0;
  }

  std::vector<double> d_u2out;
  conv3x3_backward(tr.u2.out, C, h, w, params.at("head_w"), d_head, grads.at("head_w"),
                   grads.at("head_b"), &d_u2out);
  std::vector<double> d_u1out =
      resblock_backward(params, grads, "u2", tr.temb, tr.u2, C, h, w, d_u2out);
  std::vector<double> d_skip =
      resblock_backward(params, grads, "u1", tr.temb, tr.u1, C, h, w, d_u1out);

  std::vector<double> d_d1out = d_skip;  // skip connection
  std::vector<double> d_bottleneck;
  layers::unpool_backward(d_skip, C, h, w, tr.pool_h, tr.pool_w, d_bottleneck);

  // attention residual: bottleneck = d2.out + attn(rows of d2.out)
  std::vector<double> d_attn_rows(static_cast<size_t>(n2) * C, 0.0);
  for (int c = 0; c < C; ++c) {
    for (int pix = 0; pix < n2; ++pix) {
      d_attn_rows[static_cast<size_t>(pix) * C + c] =
          d_bottleneck[static_cast<size_t>(c) * n2 + pix];
    }
  }
  std::vector<double> d_xbar;
  layers::cross_attention_backward(tr.xbar, n2, C, emb.tokens, emb.L, cfg.token_dim,
                                   params.at("attn_wq"), params.at("attn_wk"),
                                   params.at("attn_wv"), cfg.heads, tr.attn_q, tr.attn_k,
                                   tr.attn_v, tr.attn_p, d_attn_rows, grads.at("attn_wq"),
                                   grads.at("attn_wk"), grads.at("attn_wv"), d_xbar);
  std::vector<double> d_d2out = d_bottleneck;  // direct residual path
  for (int c = 0; c < C; ++c) {
    for (int pix = 0; pix < n2; ++pix) {
      d_d2out[static_cast<size_t>(c) * n2 + pix] += d_xbar[static_cast<size_t>(pix) * C + c];
    }
  }

  std::vector<double> d_pooled =
      resblock_backward(params, grads, "d2", tr.temb, tr.d2, C, tr.h2, tr.w2, d_d2out);
  std::vector<double> d_from_pool;
  layers::avgpool_backward(d_pooled, C, h, w, tr.pool_h, tr.pool_w, d_from_pool);
  for (size_t i = 0; i < d_d1out.size(); ++i) d_d1out[i] += d_from_pool[i];

  std::vector<double> d_stem =
      resblock_backward(params, grads, "d1", tr.temb, tr.d1, C, h, w, d_d1out);
  conv3x3_backward(tr.input, 1, h, w, params.at("stem_w"), d_stem, grads.at("stem_w"),
                   grads.at("stem_b"), nullptr);
  return grads;
}

namespace {

constexpr uint32_t kCheckpointVersion = 1;
constexpr char kMagic[4] = {'S', 'G', 'C', 'K'};

void write_tensors_f32(std::ofstream& out, const ParamSet& p) {
  for (const Tensor& t : p.tensors) {
    std::vector<float> buf(t.data.begin(), t.data.end());
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
}

void read_tensors_f32(std::ifstream& in, ParamSet& p) {
  for (Tensor& t : p.tensors) {
    std::vector<float> buf(t.size());
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!in) throw std::runtime_error("load_checkpoint: truncated tensor data");
    t.data.assign(buf.begin(), buf.end());
  }
}

nlohmann::json shapes_json(const ParamSet& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (size_t i = 0; i < p.names.size(); ++i) {
    arr.push_back({{"name", p.names[i]}, {"shape", p.tensors[i].shape}});
  }
  return arr;
}

ParamSet paramset_from_json(const nlohmann::json& arr) {
  ParamSet p;
  for (const auto& e : arr) {
    p.add(e.at("name").get<std::string>(), e.at("shape").get<std::vector<int>>());
  }
  return p;
}

}  // namespace

void save_checkpoint(const ModelCheckpoint& ckpt, const std::string& path) {
  nlohmann::json hdr;
  hdr["version"] = kCheckpointVersion;
  hdr["benchmark"] = ckpt.benchmark;
  hdr["denoiser_cfg"] = {{"channels", ckpt.denoiser_cfg.channels},
                         {"heads", ckpt.denoiser_cfg.heads},
                         {"token_dim", ckpt.denoiser_cfg.token_dim},
                         {"grid_h", ckpt.denoiser_cfg.grid_h},
                         {"grid_w", ckpt.denoiser_cfg.grid_w}};
  hdr["encoder_cfg"] = {{"dim", ckpt.encoder_cfg.dim}, {"rounds", ckpt.encoder_cfg.rounds}};
  hdr["guidance"] = {{"gamma_o", ckpt.guidance.gamma_o},
                     {"gamma_c", ckpt.guidance.gamma_c},
                     {"generalized", ckpt.guidance.mode == GuidanceConfig::Mode::generalized},
                     {"simplified", ckpt.guidance.simplified_constraint_gradient}};
  hdr["schedule"] = {{"T", ckpt.schedule.T}, {"beta", ckpt.schedule.beta}};
  hdr["denoiser_tensors"] = shapes_json(ckpt.denoiser);
  hdr["encoder_tensors"] = shapes_json(ckpt.encoder);
  const std::string header = hdr.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out.write(kMagic, 4);
  const uint64_t len = header.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  write_tensors_f32(out, ckpt.denoiser);
  write_tensors_f32(out, ckpt.encoder);
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

ModelCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("load_checkpoint: not a solgen checkpoint");
  }
  uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  std::string header(len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::runtime_error("load_checkpoint: truncated header");
  nlohmann::json hdr = nlohmann::json::parse(header);
  if (hdr.at("version").get<uint32_t>() != kCheckpointVersion) {
    throw std::runtime_error("load_checkpoint: unsupported checkpoint version");
  }

  ModelCheckpoint ckpt;
  ckpt.benchmark = hdr.at("benchmark").get<std::string>();
  const auto& dc = hdr.at("denoiser_cfg");
  ckpt.denoiser_cfg.channels = dc.at("channels").get<int>();
  ckpt.denoiser_cfg.heads = dc.at("heads").get<int>();
  ckpt.denoiser_cfg.token_dim = dc.at("token_dim").get<int>();
  ckpt.denoiser_cfg.grid_h = dc.at("grid_h").get<int>();
  ckpt.denoiser_cfg.grid_w = dc.at("grid_w").get<int>();
  const auto& ec = hdr.at("encoder_cfg");
  ckpt.encoder_cfg.dim = ec.at("dim").get<int>();
  ckpt.encoder_cfg.rounds = ec.at("rounds").get<int>();
  const auto& gc = hdr.at("guidance");
  ckpt.guidance.gamma_o = gc.at("gamma_o").get<double>();
  ckpt.guidance.gamma_c = gc.at("gamma_c").get<double>();
  ckpt.guidance.mode = gc.at("generalized").get<bool>() ? GuidanceConfig::Mode::generalized
                                                        : GuidanceConfig::Mode::standard;
  ckpt.guidance.simplified_constraint_gradient = gc.at("simplified").get<bool>();
  const auto& sc = hdr.at("schedule");
  ckpt.schedule.T = sc.at("T").get<int>();
  ckpt.schedule.beta = sc.at("beta").get<std::vector<double>>();
  ckpt.schedule.alpha.resize(ckpt.schedule.beta.size());
  ckpt.schedule.alpha_bar.resize(ckpt.schedule.beta.size());
  double prod = 1.0;
  for (size_t i = 0; i < ckpt.schedule.beta.size(); ++i) {
    ckpt.schedule.alpha[i] = 1.0 - ckpt.schedule.beta[i];
    prod *= ckpt.schedule.alpha[i];
    ckpt.schedule.alpha_bar[i] = prod;
  }
  ckpt.denoiser = paramset_from_json(hdr.at("denoiser_tensors"));
  ckpt.encoder = paramset_from_json(hdr.at("encoder_tensors"));
  read_tensors_f32(in, ckpt.denoiser);
  read_tensors_f32(in, ckpt.encoder);
  return ckpt;
}

}  // namespace solgen
