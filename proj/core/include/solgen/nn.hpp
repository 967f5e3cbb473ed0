/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "solgen/rng.hpp"

namespace solgen {

struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> shape_) : shape(std::move(shape_)) {
    data.assign(element_count(shape), 0.0);
  }

  static size_t element_count(const std::vector<int>& s) {
    size_t n = 1;
    for (int d : s) n *= static_cast<size_t>(d);
    return n;
  }
  size_t size() const { return data.size(); }
  double& operator[](size_t i) { return data[i]; }
  double operator[](size_t i) const { return data[i]; }
  // 2-D accessors (row-major)
  double& at(int i, int j) { return data[static_cast<size_t>(i) * shape[1] + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * shape[1] + j]; }
};

// Ordered, named parameter collection. Order is part of the serialized
// format, so adding parameters bumps the checkpoint version.
struct ParamSet {
  std::vector<std::string> names;
  std::vector<Tensor> tensors;

  Tensor& add(const std::string& name, std::vector<int> shape) {
    names.push_back(name);
    tensors.emplace_back(std::move(shape));
    return tensors.back();
  }
  Tensor& at(const std::string& name) {
    for (size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return tensors[i];
    }
    throw std::out_of_range("ParamSet: no tensor named " + name);
  }
  const Tensor& at(const std::string& name) const {
    return const_cast<ParamSet*>(this)->at(name);
  }
  ParamSet zeros_like() const {
    ParamSet z;
    z.names = names;
    z.tensors.reserve(tensors.size());
    for (const Tensor& t : tensors) z.tensors.emplace_back(t.shape);
    return z;
  }
  size_t total_size() const {
    size_t n = 0;
    for (const Tensor& t : tensors) n += t.size();
    return n;
  }
  std::vector<double> flatten() const {
    std::vector<double> out;
    out.reserve(total_size());
    for (const Tensor& t : tensors) out.insert(out.end(), t.data.begin(), t.data.end());
    return out;
  }
  void unflatten(const std::vector<double>& flat) {
    size_t k = 0;
    for (Tensor& t : tensors) {
      for (double& v : t.data) v = flat[k++];
    }
    if (k != flat.size()) throw std::invalid_argument("ParamSet::unflatten: size mismatch");
  }
};

// Uniform fan-in init: U(-1/sqrt(fan_in), 1/sqrt(fan_in)); biases zero when
// fan_in == 0 is passed.
inline void init_uniform(Tensor& t, int fan_in, Rng& rng) {
  if (fan_in <= 0) {
    for (double& v : t.data) v = 0.0;
    return;
  }
  const double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (double& v : t.data) v = rng.uniform(-a, a);
}

inline double silu(double x) { return x / (1.0 + std::exp(-x)); }
inline double silu_grad(double x) {
  const double s = 1.0 / (1.0 + std::exp(-x));
  return s * (1.0 + x * (1.0 - s));
}

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  ParamSet m;
  ParamSet v;
  long step = 0;
};

inline AdamState make_adam_state(const ParamSet& params) {
  AdamState s;
  s.m = params.zeros_like();
  s.v = params.zeros_like();
  return s;
}

inline void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state,
                      const AdamConfig& cfg) {
  if (grads.tensors.size() != params.tensors.size()) {
    throw std::invalid_argument("adam_step: grads do not match params");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (size_t t = 0; t < params.tensors.size(); ++t) {
    auto& p = params.tensors[t].data;
    const auto& g = grads.tensors[t].data;
    auto& m = state.m.tensors[t].data;
    auto& v = state.v.tensors[t].data;
    for (size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
  }
}

}  // namespace solgen
