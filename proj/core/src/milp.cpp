/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/milp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace solgen {

void SparseMatrix::add_row(const std::vector<int>& cols_in, const std::vector<double>& vals_in) {
  if (cols_in.size() != vals_in.size()) {
    throw std::invalid_argument("SparseMatrix::add_row: cols/vals length mismatch");
  }
  std::vector<int> order(cols_in.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return cols_in[a] < cols_in[b]; });
  int prev = -1;
  for (int k : order) {
    int j = cols_in[k];
    if (j < 0 || (cols > 0 && j >= cols)) {
      throw std::invalid_argument("SparseMatrix::add_row: column index out of range");
    }
    if (j == prev) {
      throw std::invalid_argument("SparseMatrix::add_row: duplicate column index");
    }
    prev = j;
    col_index.push_back(j);
    value.push_back(vals_in[k]);
    cols = std::max(cols, j + 1);
  }
  ++rows;
  row_start.push_back(nnz());
}

double SparseMatrix::row_dot(int row, const std::vector<double>& x) const {
  double s = 0.0;
  for (int k = row_start[row]; k < row_start[row + 1]; ++k) {
    s += value[k] * x[col_index[k]];
  }
  return s;
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> out(rows, 0.0);
  for (int i = 0; i < rows; ++i) out[i] = row_dot(i, x);
  return out;
}

std::vector<double> SparseMatrix::multiply_transpose(const std::vector<double>& y) const {
  std::vector<double> out(cols, 0.0);
  for (int i = 0; i < rows; ++i) {
    for (int k = row_start[i]; k < row_start[i + 1]; ++k) {
      out[col_index[k]] += value[k] * y[i];
    }
  }
  return out;
}

std::vector<std::vector<double>> SparseMatrix::to_dense() const {
  std::vector<std::vector<double>> d(rows, std::vector<double>(cols, 0.0));
  for (int i = 0; i < rows; ++i) {
    for (int k = row_start[i]; k < row_start[i + 1]; ++k) {
      d[i][col_index[k]] = value[k];
    }
  }
  return d;
}

bool MilpInstance::is_canonical_min() const {
  if (sense != Sense::minimize) return false;
  return std::all_of(row_sense.begin(), row_sense.end(),
                     [](RowSense s) { return s == RowSense::geq; });
}

std::vector<int> MilpInstance::integer_indices() const {
  std::vector<int> idx;
  for (int j = 0; j < num_vars(); ++j) {
    if (integrality[j]) idx.push_back(j);
  }
  return idx;
}

void MilpInstance::validate() const {
  const size_t n = c.size();
  const size_t m = b.size();
  if (A.rows != static_cast<int>(m) || A.cols > static_cast<int>(n)) {
    throw std::invalid_argument("MilpInstance: A dimensions inconsistent with c/b");
  }
  if (lower.size() != n || upper.size() != n || integrality.size() != n) {
    throw std::invalid_argument("MilpInstance: bound/integrality vectors must have length n");
  }
  if (row_sense.size() != m) {
    throw std::invalid_argument("MilpInstance: row_sense must have length m");
  }
  for (size_t j = 0; j < n; ++j) {
    if (lower[j] > upper[j]) {
      throw std::invalid_argument("MilpInstance: lower[j] > upper[j]");
    }
  }
}

double evaluate_objective(const MilpInstance& inst, const std::vector<double>& x) {
  if (x.size() != inst.c.size()) {
    throw std::invalid_argument("evaluate_objective: x has wrong dimension");
  }
  double s = 0.0;
  for (size_t j = 0; j < x.size(); ++j) s += inst.c[j] * x[j];
  return s;
}

std::vector<double> violation_vector(const MilpInstance& inst, const std::vector<double>& x) {
  if (x.size() != static_cast<size_t>(inst.num_vars())) {
    throw std::invalid_argument("violation_vector: x has wrong dimension");
  }
  std::vector<double> v(inst.num_rows(), 0.0);
  for (int i = 0; i < inst.num_rows(); ++i) {
    const double ax = inst.A.row_dot(i, x);
    const double gap = inst.row_sense[i] == RowSense::geq ? inst.b[i] - ax : ax - inst.b[i];
    v[i] = std::max(gap, 0.0);
  }
  return v;
}

bool is_feasible(const MilpInstance& inst, const std::vector<double>& x, double tolerance) {
  if (tolerance < 0.0) throw std::invalid_argument("is_feasible: negative tolerance");
  const auto v = violation_vector(inst, x);
  for (double vi : v) {
    if (vi > tolerance) return false;
  }
  for (int j = 0; j < inst.num_vars(); ++j) {
    if (x[j] < inst.lower[j] - tolerance || x[j] > inst.upper[j] + tolerance) return false;
    if (inst.integrality[j] && std::abs(x[j] - std::round(x[j])) > tolerance) return false;
  }
  return true;
}

Solution evaluate_solution(const MilpInstance& inst, const std::vector<double>& x,
                           double tolerance) {
  Solution s;
  s.x = x;
  s.objective = evaluate_objective(inst, x);
  const auto v = violation_vector(inst, x);
  s.max_violation = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  s.feasible = is_feasible(inst, x, tolerance);
  return s;
}

MilpInstance to_canonical_min(const MilpInstance& inst) {
  MilpInstance out = inst;
  if (inst.sense == Sense::maximize) {
    out.sense = Sense::minimize;
    for (double& cj : out.c) cj = -cj;
  }
  for (int i = 0; i < out.num_rows(); ++i) {
    if (out.row_sense[i] == RowSense::leq) {
      out.row_sense[i] = RowSense::geq;
      out.b[i] = -out.b[i];
      for (int k = out.A.row_start[i]; k < out.A.row_start[i + 1]; ++k) {
        out.A.value[k] = -out.A.value[k];
      }
    }
  }
  return out;
}

double display_objective(const MilpInstance& original, double canonical_min_objective) {
  return original.sense == Sense::maximize ? -canonical_min_objective : canonical_min_objective;
}

}  // namespace solgen
