/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <stdexcept>
#include <vector>

namespace solgen {

// beta_t, alpha_t = 1 - beta_t and cumulative alpha_bar_t over T steps,
// indexed t = 1..T. alpha_bar(0) == 1 by convention.
struct NoiseSchedule {
  int T = 0;
  std::vector<double> beta;       // length T
  std::vector<double> alpha;      // length T
  std::vector<double> alpha_bar;  // length T, strictly decreasing

  double beta_at(int t) const { return beta.at(t - 1); }
  double alpha_at(int t) const { return alpha.at(t - 1); }
  double alpha_bar_at(int t) const {
    if (t == 0) return 1.0;
    return alpha_bar.at(t - 1);
  }
};

// Linear beta schedule.
NoiseSchedule make_schedule(int T, double beta_start = 1e-4, double beta_end = 0.02);

}  // namespace solgen
