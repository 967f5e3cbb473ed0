/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "solgen/instance_io.hpp"
#include "solgen/pipeline.hpp"

using namespace solgen;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// drop the *_seconds columns for determinism comparisons
std::string strip_time_columns(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  std::vector<bool> keep;
  bool header = true;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header) {
      for (const auto& c : cells) keep.push_back(c.find("seconds") == std::string::npos);
      header = false;
    }
    bool first = true;
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i < keep.size() && !keep[i]) continue;
      out << (first ? "" : ",") << cells[i];
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

ExperimentConfig mini_sc_config(const std::string& dir, uint64_t seed) {
  ExperimentConfig cfg = desk_config(Benchmark::set_cover, seed);
  cfg.generator.sc_sets = 12;
  cfg.generator.sc_elements = 8;
  cfg.generator.sc_density = 0.3;
  cfg.train_count = 6;
  cfg.test_count = 3;
  cfg.train_cfg.grid_h = 3;
  cfg.train_cfg.grid_w = 4;
  cfg.train_cfg.channels = 8;
  cfg.train_cfg.heads = 2;
  cfg.train_cfg.epochs = 4;
  cfg.train_cfg.batch_size = 6;
  cfg.sample_cfg.k = 3;
  cfg.sample_cfg.sample_steps = 3;
  cfg.sample_cfg.trust_radius = 3;
  cfg.search_limits.node_limit = 60;
  cfg.output_dir = dir;
  return cfg;
}

}  // namespace

TEST_CASE("gap improvement reproduces the worked reference example") {
  const auto g = gap_improvement(29.07, 29.05, 29.06);
  REQUIRE(g.has_value());
  CHECK(std::abs(*g - 200.0) <= 1e-9);
}

TEST_CASE("gap improvement edge cases") {
  const auto same = gap_improvement(5.0, 5.0, 3.0);
  REQUIRE(same.has_value());
  CHECK(*same == 0.0);
  const auto plug = gap_improvement(5.0, 3.0, 0.0);
  REQUIRE(plug.has_value());
  CHECK(*plug == doctest::Approx(40.0));
  CHECK_FALSE(gap_improvement(3.0, 2.0, 3.0).has_value());  // zero baseline gap
}

TEST_CASE("empty method list yields a header-only CSV") {
  CHECK(metrics_to_csv({}) ==
        "method,mean_objective,std_objective,mean_nodes,feasibility_rate,"
        "mean_generate_seconds,mean_repair_seconds,mean_search_seconds,std_search_seconds\n");
}

TEST_CASE("dataset creation, training and evaluation run end to end") {
  const std::string dir = (fs::temp_directory_path() / "solgen_pipe_test").string();
  fs::remove_all(dir);
  ExperimentConfig cfg = mini_sc_config(dir, 7);

  make_dataset(cfg);
  CHECK(fs::exists(cfg.output_dir + "/dataset.json"));
  CHECK(fs::exists(cfg.output_dir + "/train/instances/0000.milp.json"));
  CHECK(fs::exists(cfg.output_dir + "/train/labels/0005.json"));
  CHECK(fs::exists(cfg.output_dir + "/test/embeddings/0002.json"));

  // labels are verified-feasible optima; re-solve independently
  const std::vector<DatasetEntry> entries = load_split(cfg, "train");
  REQUIRE(entries.size() == 6);
  for (const auto& e : entries) {
    CHECK(e.optimal);
    CHECK(is_feasible(e.instance, e.x_star, 1e-6));
    const auto oracle = oracles::brute_force_milp(e.instance);
    CHECK(evaluate_objective(e.instance, e.x_star) ==
          doctest::Approx(oracle.objective).epsilon(1e-9));
  }

  // same seed, fresh directory: byte-identical label files
  const std::string dir2 = dir + "_rerun";
  fs::remove_all(dir2);
  ExperimentConfig cfg2 = mini_sc_config(dir2, 7);
  make_dataset(cfg2);
  for (int i = 0; i < cfg.train_count; ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "%04d", i);
    CHECK(slurp(cfg.output_dir + "/train/labels/" + name + ".json") ==
          slurp(cfg2.output_dir + "/train/labels/" + name + ".json"));
  }

  const std::string ckpt_path = train_model(cfg);
  CHECK(fs::exists(ckpt_path));

  const auto rows = evaluate(cfg, {"baseline", "guided"});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.feasibility_rate >= 0.0);
    CHECK(r.feasibility_rate <= 1.0);
    CHECK(r.std_objective >= 0.0);
  }
  CHECK(fs::exists(cfg.output_dir + "/results/metrics.csv"));
  CHECK(fs::exists(cfg.output_dir + "/results/log.json"));
  CHECK(fs::exists(cfg.output_dir + "/results/primal_bound_trajectories.svg"));
  CHECK(fs::exists(cfg.output_dir + "/results/penalty_trajectories.svg"));

  // every guided solution reported feasible passes is_feasible at 1e-6
  const json log = json::parse(slurp(cfg.output_dir + "/results/log.json"));
  for (size_t i = 0; i < log.at("instances").size(); ++i) {
    const auto& irec = log.at("instances")[i];
    CHECK(irec.at("guided").at("feasible").get<bool>());
  }

  // trajectory y-values are monotone for canonical-min displays
  for (const auto& irec : log.at("instances")) {
    const auto& traj = irec.at("baseline").at("trajectory");
    for (size_t k = 1; k < traj.size(); ++k) {
      CHECK(traj[k].at("bound").get<double>() <= traj[k - 1].at("bound").get<double>() + 1e-12);
    }
  }

  // penalty plot values equal the logged series
  const std::string svg = slurp(cfg.output_dir + "/results/penalty_trajectories.svg");
  const size_t desc_start = svg.find("<desc>");
  const size_t desc_end = svg.find("</desc>");
  REQUIRE(desc_start != std::string::npos);
  const json embedded =
      json::parse(svg.substr(desc_start + 6, desc_end - desc_start - 6));
  REQUIRE(embedded.size() == 1);
  const auto& pts = embedded[0].at("points");
  size_t steps = 0;
  for (const auto& irec : log.at("instances")) {
    steps = std::max(steps, irec.at("guided").at("penalty_trajectory").size());
  }
  REQUIRE(pts.size() == steps);
  for (size_t k = 0; k < steps; ++k) {
    double sum = 0.0;
    int cnt = 0;
    for (const auto& irec : log.at("instances")) {
      const auto& pt = irec.at("guided").at("penalty_trajectory");
      if (k < pt.size()) {
        sum += pt[k].get<double>();
        ++cnt;
      }
    }
    CHECK(pts[k][1].get<double>() == doctest::Approx(sum / cnt).epsilon(1e-12));
  }

  // plots regenerate bit-identically
  const std::string before = slurp(cfg.output_dir + "/results/penalty_trajectories.svg");
  emit_plots(cfg.output_dir + "/results");
  CHECK(slurp(cfg.output_dir + "/results/penalty_trajectories.svg") == before);

  // evaluation reruns agree on everything but wall-clock columns
  const std::string csv1 = strip_time_columns(slurp(cfg.output_dir + "/results/metrics.csv"));
  evaluate(cfg, {"baseline", "guided"});
  const std::string csv2 = strip_time_columns(slurp(cfg.output_dir + "/results/metrics.csv"));
  CHECK(csv1 == csv2);

  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("guided solve respects trust-region semantics on radius extremes") {
  const std::string dir = (fs::temp_directory_path() / "solgen_pipe_radius").string();
  fs::remove_all(dir);
  ExperimentConfig cfg = mini_sc_config(dir, 21);
  make_dataset(cfg);
  train_model(cfg);
  const ModelCheckpoint model = load_checkpoint(DatasetPaths{cfg.output_dir}.checkpoint_file());

  const std::vector<DatasetEntry> test = load_split(cfg, "test");
  const DatasetEntry& e = test[0];
  SolveLimits limits;
  limits.node_limit = 100000;
  limits.gap_tolerance = 0.0;

  SampleConfig wide = cfg.sample_cfg;
  wide.trust_radius = e.instance.num_vars();
  const GuidedSolveOutcome full =
      run_guided_solve(e.instance, model, wide, 1.0, limits, e.lambda);
  REQUIRE(full.search.status == MilpStatus::optimal);
  const auto oracle = oracles::brute_force_milp(e.instance);
  CHECK(full.search.incumbent.objective == doctest::Approx(oracle.objective).epsilon(1e-9));

  SampleConfig pin = cfg.sample_cfg;
  pin.trust_radius = 0;
  const GuidedSolveOutcome pinned =
      run_guided_solve(e.instance, model, pin, 1.0, limits, e.lambda);
  REQUIRE(pinned.search.incumbent.feasible);
  if (!pinned.fallback) {
    CHECK(pinned.search.incumbent.objective ==
          doctest::Approx(pinned.repaired_center.objective).epsilon(1e-9));
  }
  fs::remove_all(dir);
}

TEST_CASE("toy experiment smoke run emits figures and stats") {
  ToyConfig cfg;
  cfg.train_instances = 30;
  cfg.epochs = 2;
  cfg.steps = 10;
  cfg.sample_count = 8;
  cfg.seed = 5;
  cfg.output_dir = (fs::temp_directory_path() / "solgen_toy_smoke").string();
  fs::remove_all(cfg.output_dir);
  const ToyStats stats = toy_experiment(cfg);
  CHECK(stats.mean_distance_per_step.size() == 11);  // init + 10 steps
  CHECK(stats.initial_mean_distance > 0.0);
  CHECK(fs::exists(cfg.output_dir + "/toy_scatter.svg"));
  CHECK(fs::exists(cfg.output_dir + "/toy_distance.svg"));
  CHECK(fs::exists(cfg.output_dir + "/toy_stats.json"));
  fs::remove_all(cfg.output_dir);
}
