/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "solgen/bnb.hpp"
#include "solgen/instance_io.hpp"
#include "solgen/lagrangian.hpp"
#include "solgen/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitFallback = 3;
constexpr int kExitNumerical = 4;

std::string resolve_out(const std::string& path) {
  const char* root = std::getenv("SOLGEN_OUTPUT_ROOT");
  if (root != nullptr && !path.empty() && !std::filesystem::path(path).is_absolute()) {
    return std::string(root) + "/" + path;
  }
  return path;
}

struct CommonOpts {
  std::string benchmark = "set_cover";
  std::string out = "out";
  uint64_t seed = 0;
  int train_count = 60;
  int test_count = 20;
};

solgen::ExperimentConfig build_config(const CommonOpts& opts) {
  solgen::ExperimentConfig cfg =
      solgen::desk_config(solgen::benchmark_from_name(opts.benchmark), opts.seed);
  cfg.train_count = opts.train_count;
  cfg.test_count = opts.test_count;
  cfg.output_dir = resolve_out(opts.out);
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--benchmark", opts.benchmark, "set_cover|mis|ca|cfl|toy2d");
  cmd->add_option("--out", opts.out, "dataset/output directory");
  cmd->add_option("--seed", opts.seed, "master seed");
  cmd->add_option("--train-count", opts.train_count, "training instances");
  cmd->add_option("--test-count", opts.test_count, "test instances");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solgen: score-guided solution generation and exact search for MILP"};
  app.require_subcommand(1);

  CommonOpts gen_opts, label_opts, train_opts, eval_opts;
  int train_epochs = -1;

  CLI::App* cmd_gen = app.add_subcommand("gen", "generate benchmark instances");
  add_common(cmd_gen, gen_opts);

  CLI::App* cmd_label = app.add_subcommand("label", "solve instances and cache labels");
  add_common(cmd_label, label_opts);

  CLI::App* cmd_train = app.add_subcommand("train", "train the denoiser on a labeled dataset");
  add_common(cmd_train, train_opts);
  cmd_train->add_option("--epochs", train_epochs, "override training epochs");

  std::string solve_instance, solve_checkpoint, solve_result = "result.json";
  long solve_nodes = 100000;
  int solve_radius = -1;
  bool solve_baseline = false;
  CLI::App* cmd_solve = app.add_subcommand("solve", "solve one instance");
  cmd_solve->add_option("--instance", solve_instance, ".milp.json input")->required();
  cmd_solve->add_option("--checkpoint", solve_checkpoint, "model checkpoint (guided mode)");
  cmd_solve->add_option("--result", solve_result, "output SearchResult JSON");
  cmd_solve->add_option("--nodes", solve_nodes, "node limit");
  cmd_solve->add_option("--radius", solve_radius, "trust-region radius override");
  cmd_solve->add_flag("--baseline", solve_baseline, "cold-start search, no model");

  std::vector<std::string> eval_methods = {"baseline", "guided"};
  CLI::App* cmd_eval = app.add_subcommand("eval", "run methods over the test split");
  add_common(cmd_eval, eval_opts);
  cmd_eval->add_option("--methods", eval_methods, "methods to evaluate");

  solgen::ToyConfig toy_cfg;
  CLI::App* cmd_toy = app.add_subcommand("toy", "2D LP generation experiment");
  cmd_toy->add_option("--out", toy_cfg.output_dir, "output directory");
  cmd_toy->add_option("--seed", toy_cfg.seed, "master seed");
  cmd_toy->add_option("--train-instances", toy_cfg.train_instances, "training LP count");
  cmd_toy->add_option("--epochs", toy_cfg.epochs, "training epochs");

  std::string mps_in, mps_out;
  CLI::App* cmd_mps = app.add_subcommand("export-mps", "write an instance as fixed-format MPS");
  cmd_mps->add_option("--instance", mps_in, ".milp.json input")->required();
  cmd_mps->add_option("--mps", mps_out, "output .mps path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) {
      solgen::generate_instances(build_config(gen_opts));
      std::cout << "instances written to " << resolve_out(gen_opts.out) << "\n";
    } else if (cmd_label->parsed()) {
      solgen::label_dataset(build_config(label_opts));
      std::cout << "labels written to " << resolve_out(label_opts.out) << "\n";
    } else if (cmd_train->parsed()) {
      solgen::ExperimentConfig cfg = build_config(train_opts);
      if (train_epochs >= 0) cfg.train_cfg.epochs = train_epochs;
      const std::string path = solgen::train_model(cfg);
      std::cout << "checkpoint written to " << path << "\n";
    } else if (cmd_solve->parsed()) {
      const solgen::MilpInstance raw = solgen::read_instance(solve_instance);
      const solgen::MilpInstance inst = solgen::to_canonical_min(raw);
      solgen::SolveLimits limits;
      limits.node_limit = solve_nodes;
      limits.gap_tolerance = 1e-4;
      bool fallback = false;
      solgen::SearchResult sr;
      if (solve_baseline || solve_checkpoint.empty()) {
        sr = solgen::solve_milp(inst, limits);
      } else {
        const solgen::ModelCheckpoint model = solgen::load_checkpoint(solve_checkpoint);
        solgen::SubgradientConfig sg;
        const solgen::DualState dual = solgen::subgradient_solve(inst, sg);
        const std::vector<double> lambda = solgen::guidance_multiplier(inst, dual.best_lambda);
        solgen::SampleConfig scfg;
        scfg.sampler = solgen::SampleConfig::Sampler::ddim_earlystop;
        scfg.sample_steps = model.schedule.T;
        scfg.k = 8;
        scfg.trust_radius = solve_radius >= 0
                                ? solve_radius
                                : std::max<int>(1, inst.integer_indices().size() / 5);
        const solgen::GuidedSolveOutcome go =
            solgen::run_guided_solve(inst, model, scfg, 1.0, limits, lambda);
        sr = go.search;
        fallback = go.fallback;
      }
      std::ofstream out(solve_result);
      out << solgen::search_result_to_json_string(sr) << "\n";
      std::cout << solgen::milp_status_name(sr.status) << " objective "
                << solgen::display_objective(raw, sr.incumbent.objective) << " nodes "
                << sr.nodes << "\n";
      if (fallback) return kExitFallback;
    } else if (cmd_eval->parsed()) {
      const solgen::ExperimentConfig cfg = build_config(eval_opts);
      const auto rows = solgen::evaluate(cfg, eval_methods);
      std::cout << solgen::metrics_to_csv(rows);
      std::ifstream log(cfg.output_dir + "/results/log.json");
      nlohmann::json j;
      log >> j;
      for (const auto& irec : j.at("instances")) {
        if (irec.contains("guided") && irec.at("guided").value("fallback", false)) {
          return kExitFallback;
        }
      }
    } else if (cmd_toy->parsed()) {
      toy_cfg.output_dir = resolve_out(toy_cfg.output_dir);
      const solgen::ToyStats stats = solgen::toy_experiment(toy_cfg);
      std::cout << "initial mean distance " << stats.initial_mean_distance
                << ", final mean distance " << stats.final_mean_distance << "\n";
    } else if (cmd_mps->parsed()) {
      solgen::write_mps(solgen::read_instance(mps_in), mps_out);
      std::cout << "MPS written to " << mps_out << "\n";
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
