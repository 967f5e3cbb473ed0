/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace solgen {

// Channel-major (c, y, x) grid with a padding mask. Real variables occupy
// the first n cells in row-major order; padded cells hold zero after every
// operation that writes them.
struct GridTensor {
  int channels = 1;
  int h = 0;
  int w = 0;
  std::vector<double> values;     // channels * h * w
  std::vector<uint8_t> pad_mask;  // h * w, 1 = real-variable cell

  GridTensor() = default;
  GridTensor(int channels_, int h_, int w_)
      : channels(channels_),
        h(h_),
        w(w_),
        values(static_cast<size_t>(channels_) * h_ * w_, 0.0),
        pad_mask(static_cast<size_t>(h_) * w_, 1) {}

  int cells() const { return h * w; }
  int real_cells() const {
    int n = 0;
    for (uint8_t m : pad_mask) n += m;
    return n;
  }
  double& at(int c, int y, int x) { return values[(static_cast<size_t>(c) * h + y) * w + x]; }
  double at(int c, int y, int x) const { return values[(static_cast<size_t>(c) * h + y) * w + x]; }

  void zero_pads() {
    for (int c = 0; c < channels; ++c) {
      for (int p = 0; p < cells(); ++p) {
        if (!pad_mask[p]) values[static_cast<size_t>(c) * cells() + p] = 0.0;
      }
    }
  }
};

// Row-major bijection onto the first n cells; the rest are zero-padded and
// masked. flatten_from_grid(reshape_to_grid(x, h, w)) == x exactly.
GridTensor reshape_to_grid(const std::vector<double>& x, int h, int w);
std::vector<double> flatten_from_grid(const GridTensor& g);

inline GridTensor reshape_to_grid(const std::vector<double>& x, int h, int w) {
  const int n = static_cast<int>(x.size());
  if (n > h * w) throw std::invalid_argument("reshape_to_grid: h*w < n");
  GridTensor g(1, h, w);
  for (int p = 0; p < h * w; ++p) {
    if (p < n) {
      g.values[p] = x[p];
    } else {
      g.pad_mask[p] = 0;
    }
  }
  return g;
}

inline std::vector<double> flatten_from_grid(const GridTensor& g) {
  if (g.channels != 1) throw std::invalid_argument("flatten_from_grid: expects 1 channel");
  std::vector<double> x;
  x.reserve(g.cells());
  for (int p = 0; p < g.cells(); ++p) {
    if (g.pad_mask[p]) x.push_back(g.values[p]);
  }
  return x;
}

}  // namespace solgen
