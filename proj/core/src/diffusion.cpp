/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "solgen/rng.hpp"

namespace solgen {

NoiseSchedule make_schedule(int T, double beta_start, double beta_end) {
  if (T < 1) throw std::invalid_argument("make_schedule: T must be >= 1");
  if (!(beta_start > 0.0) || !(beta_end < 1.0) || beta_start > beta_end) {
    throw std::invalid_argument("make_schedule: need 0 < beta_start <= beta_end < 1");
  }
  NoiseSchedule s;
  s.T = T;
  s.beta.resize(T);
  s.alpha.resize(T);
  s.alpha_bar.resize(T);
  double prod = 1.0;
  for (int t = 0; t < T; ++t) {
    s.beta[t] = T == 1 ? beta_end
                       : beta_start + (beta_end - beta_start) * static_cast<double>(t) /
                             static_cast<double>(T - 1);
    s.alpha[t] = 1.0 - s.beta[t];
    prod *= s.alpha[t];
    s.alpha_bar[t] = prod;
  }
  return s;
}

NoiseSchedule make_calibrated_schedule(int T, double beta_start, double terminal_alpha_bar) {
  if (!(terminal_alpha_bar > 0.0) || terminal_alpha_bar >= 1.0) {
    throw std::invalid_argument("make_calibrated_schedule: terminal_alpha_bar in (0,1)");
  }
  auto terminal = [&](double beta_end) {
    const NoiseSchedule s = make_schedule(T, std::min(beta_start, beta_end), beta_end);
    return s.alpha_bar_at(T);
  };
  double lo = beta_start, hi = 0.995;
  if (terminal(hi) > terminal_alpha_bar) {
    return make_schedule(T, beta_start, hi);  // as mixed as a linear schedule gets
  }
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (terminal(mid) > terminal_alpha_bar) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return make_schedule(T, beta_start, hi);
}

ValueTransform ValueTransform::identity(int n) {
  ValueTransform t;
  t.offset.assign(n, 0.0);
  t.scale.assign(n, 1.0);
  return t;
}

ValueTransform ValueTransform::from_bounds(const MilpInstance& inst) {
  ValueTransform t = identity(inst.num_vars());
  for (int j = 0; j < inst.num_vars(); ++j) {
    if (inst.integrality[j]) continue;
    const double lo = inst.lower[j], up = inst.upper[j];
    if (lo == -kInf || up == kInf) continue;  // unbounded: leave raw
    t.offset[j] = lo;
    t.scale[j] = up - lo;  // may be 0 for fixed variables
  }
  return t;
}

bool ValueTransform::is_identity() const {
  for (double o : offset) {
    if (o != 0.0) return false;
  }
  for (double s : scale) {
    if (s != 1.0) return false;
  }
  return true;
}

std::vector<double> ValueTransform::to_instance(const std::vector<double>& x_norm) const {
  std::vector<double> x(x_norm.size());
  for (size_t j = 0; j < x.size(); ++j) x[j] = offset[j] + scale[j] * x_norm[j];
  return x;
}

std::vector<double> ValueTransform::to_normalized(const std::vector<double>& x_inst) const {
  std::vector<double> x(x_inst.size());
  for (size_t j = 0; j < x.size(); ++j) {
    x[j] = scale[j] != 0.0 ? (x_inst[j] - offset[j]) / scale[j] : 0.0;
  }
  return x;
}

GridTensor forward_sample(const GridTensor& x0, int t, const GridTensor& eps,
                          const NoiseSchedule& schedule) {
  if (x0.h != eps.h || x0.w != eps.w || x0.channels != eps.channels) {
    throw std::invalid_argument("forward_sample: shape mismatch");
  }
  const double abar = schedule.alpha_bar_at(t);
  const double a = std::sqrt(abar);
  const double b = std::sqrt(1.0 - abar);
  GridTensor out = x0;
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = a * x0.values[i] + b * eps.values[i];
  out.zero_pads();
  return out;
}

SteRound ste_round(const std::vector<double>& x, const std::vector<uint8_t>& integrality,
                   double temperature) {
  if (x.size() != integrality.size()) {
    throw std::invalid_argument("ste_round: mask size mismatch");
  }
  if (!(temperature > 0.0)) throw std::invalid_argument("ste_round: temperature must be > 0");
  SteRound out;
  out.value.resize(x.size());
  out.grad.resize(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    if (!integrality[j]) {
      out.value[j] = x[j];
      out.grad[j] = 1.0;
      continue;
    }
    out.value[j] = std::floor(x[j] + 0.5);
    // soft(x) = floor(x) + sigmoid((frac - 0.5)/tau): pass its slope through
    const double frac = x[j] - std::floor(x[j]);
    const double z = (frac - 0.5) / temperature;
    const double s = 1.0 / (1.0 + std::exp(-z));
    out.grad[j] = s * (1.0 - s) / temperature;
  }
  return out;
}

namespace {

GridTensor masked_noise(int h, int w, const std::vector<uint8_t>& pad_mask, Rng& rng) {
  GridTensor g(1, h, w);
  g.pad_mask = pad_mask;
  for (int p = 0; p < h * w; ++p) {
    if (g.pad_mask[p]) g.values[p] = rng.normal();
  }
  return g;
}

constexpr uint64_t kInitPassTag = 0x1217;
constexpr uint64_t kEpochTagBase = 0x5EED;

}  // namespace

void draw_timestep_and_noise(uint64_t pass_seed, size_t sample_index, int T,
                             const GridTensor& shape_like, int* t_out, GridTensor* eps_out) {
  Rng rng(mix_seed(pass_seed, sample_index));
  *t_out = rng.uniform_int(1, T);
  *eps_out = masked_noise(shape_like.h, shape_like.w, shape_like.pad_mask, rng);
}

void TrainConfig::validate() const {
  if (grid_h < 1 || grid_w < 1 || T < 1 || channels < 1 || heads < 1 || batch_size < 1 ||
      epochs < 0 || !(learning_rate > 0.0) || !(ste_temperature > 0.0)) {
    throw std::invalid_argument("TrainConfig: invalid value");
  }
  if (beta_end <= 0.0 && !(terminal_alpha_bar > 0.0 && terminal_alpha_bar < 1.0)) {
    throw std::invalid_argument("TrainConfig: terminal_alpha_bar must be in (0,1)");
  }
  guidance.validate();
}

namespace {

NoiseSchedule schedule_for(const TrainConfig& cfg) {
  return cfg.beta_end > 0.0
             ? make_schedule(cfg.T, cfg.beta_start, cfg.beta_end)
             : make_calibrated_schedule(cfg.T, cfg.beta_start, cfg.terminal_alpha_bar);
}

}  // namespace

void SampleConfig::validate(int T) const {
  if (k < 1) throw std::invalid_argument("SampleConfig: k must be >= 1");
  if (sample_steps < 0 || sample_steps > T) {
    throw std::invalid_argument("SampleConfig: sample_steps must be in [0, T]");
  }
  if (early_stop_index < 0 || early_stop_index > T) {
    throw std::invalid_argument("SampleConfig: early_stop_index must be in [0, T]");
  }
  if (trust_radius < 0) throw std::invalid_argument("SampleConfig: trust_radius must be >= 0");
}

namespace {

struct SampleLoss {
  double loss = 0.0;  // mean per-real-cell squared error
};

// Shared by train and evaluate_loss so recorded losses are replayable.
SampleLoss sample_loss_and_grad(const ParamSet& params, const DenoiserConfig& net,
                                const DatasetEntry& entry, const TrainConfig& cfg,
                                const NoiseSchedule& schedule, uint64_t pass_seed,
                                size_t sample_index, ParamSet* grads, double grad_scale) {
  const GridTensor x0 = reshape_to_grid(entry.x_star, cfg.grid_h, cfg.grid_w);
  int t = 0;
  GridTensor eps;
  draw_timestep_and_noise(pass_seed, sample_index, schedule.T, x0, &t, &eps);
  const GridTensor x_t = forward_sample(x0, t, eps, schedule);
  const GridTensor target = guided_target_score(x_t, t, eps, entry.x_star, entry.instance,
                                                entry.lambda, schedule, cfg.guidance);

  DenoiserTrace trace;
  const GridTensor pred =
      denoiser_forward(params, net, x_t, t, entry.embedding, grads ? &trace : nullptr);

  const int n_real = x0.real_cells();
  GridTensor d_out(1, cfg.grid_h, cfg.grid_w);
  d_out.pad_mask = x0.pad_mask;
  double loss = 0.0;
  for (int p = 0; p < d_out.cells(); ++p) {
    if (!d_out.pad_mask[p]) continue;
    const double diff = pred.values[p] - target.values[p];
    loss += diff * diff;
    d_out.values[p] = 2.0 * diff / n_real * grad_scale;
  }
  loss /= n_real;

  if (grads != nullptr) {
    ParamSet g = denoiser_backward(params, net, trace, entry.embedding, d_out);
    for (size_t i = 0; i < grads->tensors.size(); ++i) {
      auto& acc = grads->tensors[i].data;
      const auto& gi = g.tensors[i].data;
      for (size_t j = 0; j < acc.size(); ++j) acc[j] += gi[j];
    }
  }
  return {loss};
}

}  // namespace

double evaluate_loss(const ParamSet& params, const DenoiserConfig& net,
                     const std::vector<DatasetEntry>& dataset, const TrainConfig& cfg,
                     const NoiseSchedule& schedule, uint64_t pass_seed) {
  double total = 0.0;
  for (size_t i = 0; i < dataset.size(); ++i) {
    total += sample_loss_and_grad(params, net, dataset[i], cfg, schedule, pass_seed, i, nullptr,
                                  0.0)
                 .loss;
  }
  return total / static_cast<double>(dataset.size());
}

TrainOutput train(const std::vector<DatasetEntry>& dataset, const TrainConfig& cfg) {
  cfg.validate();
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  const int n = dataset[0].instance.num_vars();
  if (n > cfg.grid_h * cfg.grid_w) {
    throw std::invalid_argument("train: grid too small for instance size");
  }

  TrainOutput out;
  out.net.channels = cfg.channels;
  out.net.heads = cfg.heads;
  out.net.token_dim = dataset[0].embedding.D;
  out.net.grid_h = cfg.grid_h;
  out.net.grid_w = cfg.grid_w;
  out.net.validate();
  out.schedule = schedule_for(cfg);

  Rng init_rng(mix_seed(cfg.seed, 0x1A17));
  out.params = make_denoiser_params(out.net, init_rng);

  out.loss_curve.push_back(evaluate_loss(out.params, out.net, dataset, cfg, out.schedule,
                                         mix_seed(cfg.seed, kInitPassTag)));

  AdamState adam = make_adam_state(out.params);
  AdamConfig adam_cfg;
  adam_cfg.learning_rate = cfg.learning_rate;

  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const uint64_t epoch_seed = mix_seed(cfg.seed, kEpochTagBase + epoch);
    Rng shuffle_rng(epoch_seed);
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.uniform_int(0, static_cast<int>(i) - 1)]);
    }

    double epoch_loss = 0.0;
    size_t pos = 0;
    int batch_id = 0;
    while (pos < order.size()) {
      const size_t batch_end = std::min(order.size(), pos + cfg.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(batch_end - pos);
      ParamSet grads = out.params.zeros_like();
      for (size_t i = pos; i < batch_end; ++i) {
        const SampleLoss sl =
            sample_loss_and_grad(out.params, out.net, dataset[order[i]], cfg, out.schedule,
                                 epoch_seed, i, &grads, inv_batch);
        if (std::isnan(sl.loss)) {
          throw std::runtime_error("train: NaN loss in epoch " + std::to_string(epoch) +
                                   " batch " + std::to_string(batch_id));
        }
        epoch_loss += sl.loss;
      }
      adam_step(out.params, grads, adam, adam_cfg);
      pos = batch_end;
      ++batch_id;
    }
    out.loss_curve.push_back(epoch_loss / static_cast<double>(order.size()));
  }
  return out;
}

std::vector<double> sample_ddpm(const ParamSet& params, const DenoiserConfig& net, int n,
                                const ConditionEmbedding& emb, const NoiseSchedule& schedule,
                                uint64_t seed, std::vector<std::vector<double>>* trajectory) {
  Rng rng(seed);
  GridTensor x(1, net.grid_h, net.grid_w);
  {
    const GridTensor shape = reshape_to_grid(std::vector<double>(n, 0.0), net.grid_h, net.grid_w);
    x = masked_noise(net.grid_h, net.grid_w, shape.pad_mask, rng);
  }
  if (trajectory != nullptr) trajectory->push_back(flatten_from_grid(x));
  for (int t = schedule.T; t >= 1; --t) {
    const GridTensor s = denoiser_forward(params, net, x, t, emb);
    const double beta = schedule.beta_at(t);
    const double abar = schedule.alpha_bar_at(t);
    const double inv_sqrt_alpha = 1.0 / std::sqrt(schedule.alpha_at(t));
    const double coef = beta / std::sqrt(1.0 - abar);
    for (int p = 0; p < x.cells(); ++p) {
      if (!x.pad_mask[p]) continue;
      x.values[p] = inv_sqrt_alpha * (x.values[p] - coef * s.values[p]);
    }
    if (t > 1) {
      const double root_beta = std::sqrt(beta);
      for (int p = 0; p < x.cells(); ++p) {
        if (!x.pad_mask[p]) continue;
        x.values[p] += root_beta * rng.normal();
      }
    }
    if (trajectory != nullptr) trajectory->push_back(flatten_from_grid(x));
  }
  return flatten_from_grid(x);
}

std::vector<double> sample_ddim_earlystop(const ParamSet& params, const DenoiserConfig& net,
                                          int n, const ConditionEmbedding& emb,
                                          const NoiseSchedule& schedule, int sample_steps,
                                          int stop_index, uint64_t seed,
                                          std::vector<std::vector<double>>* trajectory) {
  if (sample_steps <= 0 || sample_steps > schedule.T) sample_steps = schedule.T;
  if (stop_index < 0 || stop_index > schedule.T) {
    throw std::invalid_argument("sample_ddim_earlystop: stop_index out of range");
  }
  // Evenly strided subsequence T = tau_0 > tau_1 > ... > tau_{k-1} >= 1.
  std::vector<int> taus;
  for (int i = 0; i < sample_steps; ++i) {
    const double f = sample_steps == 1
                         ? 0.0
                         : static_cast<double>(i) / static_cast<double>(sample_steps - 1);
    const int t = static_cast<int>(std::lround(schedule.T - f * (schedule.T - 1)));
    if (taus.empty() || taus.back() != t) taus.push_back(t);
  }

  Rng rng(seed);
  const GridTensor shape = reshape_to_grid(std::vector<double>(n, 0.0), net.grid_h, net.grid_w);
  GridTensor x = masked_noise(net.grid_h, net.grid_w, shape.pad_mask, rng);
  if (trajectory != nullptr) trajectory->push_back(flatten_from_grid(x));

  for (size_t i = 0; i < taus.size(); ++i) {
    const int t = taus[i];
    if (t <= stop_index) break;
    const GridTensor s = denoiser_forward(params, net, x, t, emb);
    const double abar = schedule.alpha_bar_at(t);
    int t_next = i + 1 < taus.size() ? taus[i + 1] : 0;
    if (t_next < stop_index) t_next = stop_index;
    const double abar_next = schedule.alpha_bar_at(t_next);
    const double ra = std::sqrt(abar), rb = std::sqrt(1.0 - abar);
    const double ran = std::sqrt(abar_next), rbn = std::sqrt(1.0 - abar_next);
    for (int p = 0; p < x.cells(); ++p) {
      if (!x.pad_mask[p]) continue;
      const double eps_hat = s.values[p];
      const double x0_hat = (x.values[p] - rb * eps_hat) / ra;
      x.values[p] = ran * x0_hat + rbn * eps_hat;
    }
    if (trajectory != nullptr) trajectory->push_back(flatten_from_grid(x));
  }
  return flatten_from_grid(x);
}

DiverseResult generate_diverse(const ParamSet& params, const DenoiserConfig& net,
                               const ConditionEmbedding& emb, const NoiseSchedule& schedule,
                               const SampleConfig& cfg, const MilpInstance& inst,
                               const std::vector<double>& lambda,
                               const ValueTransform* transform) {
  cfg.validate(schedule.T);
  const int n = inst.num_vars();
  DiverseResult out;
  for (int j = 0; j < cfg.k; ++j) {
    const uint64_t seed_j = mix_seed(cfg.seed, static_cast<uint64_t>(j));
    std::vector<double> x_norm;
    if (cfg.sampler == SampleConfig::Sampler::ddpm) {
      x_norm = sample_ddpm(params, net, n, emb, schedule, seed_j);
    } else {
      x_norm = sample_ddim_earlystop(params, net, n, emb, schedule, cfg.sample_steps,
                                     cfg.early_stop_index, seed_j);
    }
    out.candidates.push_back(transform != nullptr ? transform->to_instance(x_norm)
                                                  : std::move(x_norm));
  }

  out.penalties.resize(out.candidates.size());
  int best = 0;
  double best_penalty = kInf, best_obj = kInf;
  for (size_t j = 0; j < out.candidates.size(); ++j) {
    out.penalties[j] = penalty_term(out.candidates[j], inst, lambda);
    const double obj = evaluate_objective(inst, out.candidates[j]);
    if (out.penalties[j] < best_penalty ||
        (out.penalties[j] == best_penalty && obj < best_obj)) {
      best = static_cast<int>(j);
      best_penalty = out.penalties[j];
      best_obj = obj;
    }
  }
  out.best_index = best;
  return out;
}

}  // namespace solgen
