/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace solgen {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerances used across the solver stack. Feasibility checks and the
// simplex ratio test use `feasibility`; reduced-cost optimality tests use
// `optimality`; integrality checks use `integrality`.
namespace tol {
inline constexpr double feasibility = 1e-7;
inline constexpr double optimality = 1e-9;
inline constexpr double integrality = 1e-6;
}  // namespace tol

enum class Sense : uint8_t { minimize, maximize };
enum class RowSense : uint8_t { geq, leq };

// Row-compressed sparse matrix. Rows are appended in order; column indices
// within a row are kept sorted and unique.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_start{0};
  std::vector<int> col_index;
  std::vector<double> value;

  int nnz() const { return static_cast<int>(col_index.size()); }
  void add_row(const std::vector<int>& cols_in, const std::vector<double>& vals_in);
  double row_dot(int row, const std::vector<double>& x) const;
  std::vector<double> multiply(const std::vector<double>& x) const;
  std::vector<double> multiply_transpose(const std::vector<double>& y) const;
  std::vector<std::vector<double>> to_dense() const;
  bool operator==(const SparseMatrix&) const = default;
};

struct MilpInstance {
  std::string name;
  Sense sense = Sense::minimize;
  std::vector<double> c;
  SparseMatrix A;
  std::vector<double> b;
  std::vector<RowSense> row_sense;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<uint8_t> integrality;  // 1 = integer-constrained

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_rows() const { return static_cast<int>(b.size()); }
  bool is_canonical_min() const;
  std::vector<int> integer_indices() const;

  // Throws std::invalid_argument if the dimension invariants or the
  // lower <= upper requirement are violated.
  void validate() const;
};

struct Solution {
  std::vector<double> x;
  double objective = 0.0;
  bool feasible = false;
  double max_violation = 0.0;
};

// c.x under the instance's stored sense convention (no sign flip).
double evaluate_objective(const MilpInstance& inst, const std::vector<double>& x);

// Elementwise positive constraint violation, length m. For geq rows this is
// max{b - Ax, 0}; for leq rows max{Ax - b, 0}.
std::vector<double> violation_vector(const MilpInstance& inst, const std::vector<double>& x);

// True iff all row violations are <= tolerance, bounds hold within tolerance,
// and every integrality-masked coordinate is within tolerance of an integer.
bool is_feasible(const MilpInstance& inst, const std::vector<double>& x, double tolerance);

// Convenience: fills a Solution record against `inst` as stored.
Solution evaluate_solution(const MilpInstance& inst, const std::vector<double>& x,
                           double tolerance = tol::integrality);

// Returns an equivalent instance with sense = minimize and every row in
// Ax >= b orientation. Idempotent.
MilpInstance to_canonical_min(const MilpInstance& inst);

// Objective value of the original-sense instance given the canonical-min
// objective value (maximization instances re-flip the sign for display).
double display_objective(const MilpInstance& original, double canonical_min_objective);

}  // namespace solgen
