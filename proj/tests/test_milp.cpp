/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "solgen/generators.hpp"
#include "solgen/instance_io.hpp"
#include "solgen/milp.hpp"
#include "solgen/rng.hpp"
#include "test_util.hpp"

using namespace solgen;
using solgen::testing::make_binary_instance;
using solgen::testing::make_instance;
using solgen::testing::RowSpec;

TEST_CASE("evaluate_objective is a plain inner product") {
  const MilpInstance inst = make_binary_instance({2.0, 3.0}, {});
  CHECK(evaluate_objective(inst, {1.0, 0.0}) == 2.0);
  CHECK(evaluate_objective(inst, {0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(evaluate_objective(inst, {1.0}), std::invalid_argument);
}

TEST_CASE("toy instance objective at the origin is zero") {
  const MilpInstance toy = fixed_toy_instance();
  CHECK(toy.c[0] == 2.0828);
  CHECK(toy.c[1] == 4.0374);
  CHECK(evaluate_objective(toy, {0.0, 0.0}) == 0.0);
}

TEST_CASE("violation_vector on identity constraints") {
  const MilpInstance inst =
      make_instance({0.0, 0.0}, {{{1.0, 0.0}, RowSense::geq, 1.0}, {{0.0, 1.0}, RowSense::geq, 1.0}},
                    {0.0, 0.0}, {2.0, 2.0}, {0, 0});
  CHECK(violation_vector(inst, {1.0, 1.0}) == std::vector<double>{0.0, 0.0});
  CHECK(violation_vector(inst, {0.0, 0.0}) == std::vector<double>{1.0, 1.0});
}

TEST_CASE("toy instance violations at the origin sit exactly on rows with positive rhs") {
  // Rows 6..10 (1-based) have b > 0; the violation there equals b itself.
  const MilpInstance toy = fixed_toy_instance();
  const auto v = violation_vector(toy, {0.0, 0.0});
  const std::vector<int> expect_rows = {5, 6, 7, 8, 9};  // 0-based
  const std::vector<double> expect_vals = {0.0208, 0.1056, 0.3568, 0.2732, 0.0117};
  for (int i = 0; i < toy.num_rows(); ++i) {
    bool expected_positive = false;
    for (size_t k = 0; k < expect_rows.size(); ++k) {
      if (expect_rows[k] == i) {
        expected_positive = true;
        CHECK(v[i] == doctest::Approx(expect_vals[k]).epsilon(1e-12));
      }
    }
    if (!expected_positive) CHECK(v[i] == 0.0);
  }
}

TEST_CASE("is_feasible checks rows, bounds and integrality") {
  const MilpInstance inst = make_binary_instance(
      {1.0, 1.0, 1.0}, {{{1.0, 1.0, 0.0}, RowSense::geq, 1.0}});
  CHECK(is_feasible(inst, {0.0, 1.0, 0.0}, 1e-6));
  CHECK_FALSE(is_feasible(inst, {0.5, 1.0, 0.0}, 1e-6));  // fractional integer var
  CHECK_FALSE(is_feasible(inst, {0.0, 0.0, 0.0}, 1e-6));  // row violated
  CHECK_FALSE(is_feasible(inst, {0.0, 2.0, 0.0}, 1e-6));  // bound violated
  CHECK_THROWS_AS(is_feasible(inst, {0.0, 1.0, 0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("violation_vector is nonnegative and zero exactly on the feasible set") {
  const MilpInstance toy = fixed_toy_instance();
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> x = {rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)};
    const auto v = violation_vector(toy, x);
    double worst = 0.0;
    for (double vi : v) {
      CHECK(vi >= 0.0);
      worst = std::max(worst, vi);
    }
    bool rows_ok = true;
    for (int i = 0; i < toy.num_rows(); ++i) {
      if (toy.A.row_dot(i, x) < toy.b[i] - 1e-12) rows_ok = false;
    }
    CHECK((worst <= 1e-12) == rows_ok);
  }
}

TEST_CASE("to_canonical_min flips sense and row orientation") {
  const MilpInstance orig = make_instance({5.0}, {{{1.0}, RowSense::leq, 1.0}}, {0.0}, {2.0},
                                          {0}, Sense::maximize);
  const MilpInstance canon = to_canonical_min(orig);
  CHECK(canon.sense == Sense::minimize);
  CHECK(canon.c[0] == -5.0);
  CHECK(canon.row_sense[0] == RowSense::geq);
  CHECK(canon.b[0] == -1.0);
  CHECK(canon.A.value[0] == -1.0);
  CHECK(canon.is_canonical_min());

  // idempotent
  const MilpInstance twice = to_canonical_min(canon);
  CHECK(instance_to_json_string(twice) == instance_to_json_string(canon));
}

TEST_CASE("to_canonical_min preserves the argmin on binary instances") {
  for (uint64_t seed : {3u, 4u, 5u, 6u}) {
    GeneratorConfig cfg;
    cfg.benchmark = Benchmark::mis;
    cfg.mis_nodes = 10;
    cfg.mis_edge_prob = 0.3;
    cfg.seed = seed;
    const MilpInstance orig = gen_max_independent_set(cfg);
    const MilpInstance canon = to_canonical_min(orig);

    const auto best = oracles::brute_force_milp(canon);
    REQUIRE(best.feasible);
    // exhaustive max over the original instance
    double best_orig = -kInf;
    const int n = orig.num_vars();
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<double> x(n, 0.0);
      for (int j = 0; j < n; ++j) x[j] = (mask >> j) & 1;
      bool ok = true;
      for (int i = 0; i < orig.num_rows(); ++i) {
        if (orig.A.row_dot(i, x) > orig.b[i] + 1e-9) ok = false;
      }
      if (ok) best_orig = std::max(best_orig, evaluate_objective(orig, x));
    }
    CHECK(best.objective == doctest::Approx(-best_orig).epsilon(1e-12));
    CHECK(evaluate_objective(orig, best.x) == doctest::Approx(best_orig).epsilon(1e-12));
  }
}

TEST_CASE("display_objective re-flips maximization values") {
  const MilpInstance orig = make_instance({5.0}, {}, {0.0}, {1.0}, {1}, Sense::maximize);
  CHECK(display_objective(orig, -5.0) == 5.0);
  const MilpInstance m = make_instance({5.0}, {}, {0.0}, {1.0}, {1}, Sense::minimize);
  CHECK(display_objective(m, 5.0) == 5.0);
}

TEST_CASE("validate rejects inconsistent dimensions and crossed bounds") {
  MilpInstance inst = make_binary_instance({1.0}, {});
  inst.lower[0] = 2.0;
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  MilpInstance inst2 = make_binary_instance({1.0, 2.0}, {});
  inst2.integrality.pop_back();
  CHECK_THROWS_AS(inst2.validate(), std::invalid_argument);
}

TEST_CASE("evaluate_solution fills the record") {
  const MilpInstance inst = make_binary_instance({1.0, 2.0}, {{{1.0, 1.0}, RowSense::geq, 1.0}});
  const Solution s = evaluate_solution(inst, {1.0, 0.0});
  CHECK(s.feasible);
  CHECK(s.objective == 1.0);
  CHECK(s.max_violation == 0.0);
  const Solution bad = evaluate_solution(inst, {0.0, 0.0});
  CHECK_FALSE(bad.feasible);
  CHECK(bad.max_violation == 1.0);
}
