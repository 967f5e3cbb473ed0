/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "solgen/instance_io.hpp"
#include "solgen/lagrangian.hpp"
#include "solgen/plots.hpp"
#include "solgen/rng.hpp"
#include "solgen/simplex.hpp"

namespace solgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double now_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// seed stream tags
constexpr uint64_t kTrainInstanceTag = 1000;
constexpr uint64_t kTestInstanceTag = 2000;
constexpr uint64_t kEncoderTag = 3;
constexpr uint64_t kTrainTag = 4;
constexpr uint64_t kSampleTag = 5;

std::string index_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", i);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

json encoder_params_to_json(const ParamSet& p) {
  json arr = json::array();
  for (size_t i = 0; i < p.names.size(); ++i) {
    arr.push_back({{"name", p.names[i]},
                   {"shape", p.tensors[i].shape},
                   {"data", p.tensors[i].data}});
  }
  return arr;
}

ParamSet encoder_params_from_json(const json& arr) {
  ParamSet p;
  for (const auto& e : arr) {
    Tensor& t = p.add(e.at("name").get<std::string>(), e.at("shape").get<std::vector<int>>());
    t.data = e.at("data").get<std::vector<double>>();
  }
  return p;
}

std::vector<int> grid_for(int n) {
  // keep h*w == n with the most balanced factorization, h <= w
  int best_h = 1;
  for (int h = 1; h * h <= n; ++h) {
    if (n % h == 0) best_h = h;
  }
  return {best_h, n / best_h};
}

}  // namespace

void ExperimentConfig::validate() const {
  generator.validate();
  train_cfg.validate();
  search_limits.validate();
  if (train_count < 1 || test_count < 1) {
    throw std::invalid_argument("ExperimentConfig: dataset counts must be >= 1");
  }
  if (repair_budget_seconds < 0.0 || subgradient_iterations < 1) {
    throw std::invalid_argument("ExperimentConfig: invalid solve settings");
  }
  if (output_dir.empty()) throw std::invalid_argument("ExperimentConfig: output_dir empty");
}

ExperimentConfig desk_config(Benchmark b, uint64_t master_seed) {
  ExperimentConfig cfg;
  cfg.master_seed = master_seed;
  cfg.generator.benchmark = b;
  cfg.train_cfg.seed = mix_seed(master_seed, kTrainTag);
  cfg.sample_cfg.seed = mix_seed(master_seed, kSampleTag);
  cfg.sample_cfg.sampler = SampleConfig::Sampler::ddim_earlystop;
  cfg.sample_cfg.k = 8;

  // Reference scales: SC n=500 (T=20, Ts=3, D=100), MIS n=500 (T=20, Ts=5,
  // D=30), CA n=500 (T=5, Ts=5, D=250), CFL n=2550 (T=50, Ts=50, D=500).
  // Trust radius and sampler steps scale with n; T carries over. Guidance
  // coefficients apply to unit-normalized direction fields (see
  // guidance_multiplier and the cost scaling in train_model): gamma_c takes
  // the generalized (signed) range because through the epsilon-style sampler
  // update the positive sign steers iterates away from the feasible region,
  // the negative one into it; magnitudes are desk-calibrated so the
  // feasibility push does not drown the conditional signal.
  int n = 0;
  switch (b) {
    case Benchmark::set_cover: {
      cfg.generator.sc_sets = 48;
      cfg.generator.sc_elements = 30;
      cfg.generator.sc_density = 0.15;
      n = 48;
      cfg.train_cfg.T = 20;
      cfg.train_cfg.guidance.gamma_o = 1.0;
      cfg.train_cfg.guidance.gamma_c = -0.5;
      cfg.sample_cfg.sample_steps = 3;
      cfg.sample_cfg.trust_radius = std::max(1, static_cast<int>(std::lround(100.0 * n / 500.0)));
      cfg.search_limits.node_limit = 100;
      break;
    }
    case Benchmark::mis: {
      cfg.generator.mis_nodes = 45;
      cfg.generator.mis_edge_prob = 0.08;
      n = 45;
      cfg.train_cfg.T = 20;
      cfg.train_cfg.guidance.gamma_o = 3.0;
      cfg.train_cfg.guidance.gamma_c = -0.25;
      cfg.sample_cfg.sample_steps = 5;
      cfg.sample_cfg.trust_radius = std::max(1, static_cast<int>(std::lround(30.0 * n / 500.0)));
      cfg.search_limits.node_limit = 300;
      break;
    }
    case Benchmark::ca: {
      cfg.generator.ca_bids = 48;
      cfg.generator.ca_items = 24;
      n = 48;
      cfg.train_cfg.T = 5;
      cfg.train_cfg.guidance.gamma_o = 0.05;
      cfg.train_cfg.guidance.gamma_c = -0.5;
      cfg.sample_cfg.sample_steps = 5;
      cfg.sample_cfg.trust_radius = std::max(1, static_cast<int>(std::lround(250.0 * n / 500.0)));
      cfg.search_limits.node_limit = 150;
      break;
    }
    case Benchmark::cfl: {
      cfg.generator.cfl_facilities = 3;
      cfg.generator.cfl_customers = 4;
      n = 3 + 3 * 4;
      cfg.train_cfg.T = 50;
      cfg.train_cfg.guidance.gamma_o = 0.05;
      cfg.train_cfg.guidance.gamma_c = -0.25;
      cfg.sample_cfg.sample_steps = 50;
      cfg.sample_cfg.trust_radius = std::max(1, static_cast<int>(std::lround(500.0 * n / 2550.0)));
      cfg.search_limits.node_limit = 100;
      break;
    }
    case Benchmark::toy2d: {
      n = 2;
      cfg.train_cfg.T = 50;
      cfg.train_cfg.guidance.gamma_o = 0.1;
      cfg.train_cfg.guidance.gamma_c = 0.3;
      cfg.sample_cfg.sample_steps = 50;
      cfg.search_limits.node_limit = 100;
      break;
    }
  }
  if (cfg.train_cfg.guidance.gamma_c < 0.0) {
    cfg.train_cfg.guidance.mode = GuidanceConfig::Mode::generalized;
  }
  const auto hw = grid_for(n);
  cfg.train_cfg.grid_h = hw[0];
  cfg.train_cfg.grid_w = hw[1];
  cfg.search_limits.gap_tolerance = 1e-4;
  return cfg;
}

void generate_instances(const ExperimentConfig& cfg) {
  cfg.validate();
  DatasetPaths paths{cfg.output_dir};
  for (const std::string split : {"train", "test"}) {
    fs::create_directories(paths.instances_dir(split));
    const bool is_train = split == "train";
    const int count = is_train ? cfg.train_count : cfg.test_count;
    const uint64_t tag = is_train ? kTrainInstanceTag : kTestInstanceTag;
    for (int i = 0; i < count; ++i) {
      GeneratorConfig g = cfg.generator;
      g.seed = mix_seed(cfg.master_seed, tag + static_cast<uint64_t>(i));
      const MilpInstance inst = generate(g);
      write_instance(inst, paths.instances_dir(split) + "/" + index_name(i) + ".milp.json");
    }
  }
  json manifest;
  manifest["benchmark"] = benchmark_name(cfg.generator.benchmark);
  manifest["train_count"] = cfg.train_count;
  manifest["test_count"] = cfg.test_count;
  manifest["master_seed"] = cfg.master_seed;
  manifest["grid"] = {cfg.train_cfg.grid_h, cfg.train_cfg.grid_w};
  write_text(paths.manifest(), manifest.dump(2));
}

void label_dataset(const ExperimentConfig& cfg) {
  cfg.validate();
  DatasetPaths paths{cfg.output_dir};

  Rng enc_rng(mix_seed(cfg.master_seed, kEncoderTag));
  const ParamSet encoder = make_encoder_params(cfg.encoder_cfg, enc_rng);
  write_text(paths.encoder_file(), encoder_params_to_json(encoder).dump());

  SolveLimits label_limits;
  label_limits.gap_tolerance = 0.0;  // labels must be proven optima
  label_limits.node_limit = 2000000;

  for (const std::string split : {"train", "test"}) {
    fs::create_directories(paths.labels_dir(split));
    fs::create_directories(paths.embeddings_dir(split));
    const int count = split == "train" ? cfg.train_count : cfg.test_count;
    for (int i = 0; i < count; ++i) {
      const std::string name = index_name(i);
      const MilpInstance raw =
          read_instance(paths.instances_dir(split) + "/" + name + ".milp.json");
      const MilpInstance inst = to_canonical_min(raw);

      const SearchResult sr = solve_milp(inst, label_limits);
      if (sr.status != MilpStatus::optimal && sr.status != MilpStatus::feasible) {
        throw std::runtime_error("label_dataset: no solution for " + raw.name);
      }
      SubgradientConfig sg;
      sg.max_iterations = cfg.subgradient_iterations;
      sg.step_scale = cfg.subgradient_step;
      const DualState dual = subgradient_solve(inst, sg);

      json label;
      label["objective"] = sr.incumbent.objective;  // canonical-min value
      label["display_objective"] = display_objective(raw, sr.incumbent.objective);
      label["x"] = sr.incumbent.x;
      label["status"] = milp_status_name(sr.status);
      label["optimal"] = sr.status == MilpStatus::optimal;
      label["nodes"] = sr.nodes;
      label["dual_bound"] = sr.dual_bound;
      label["lambda"] = dual.best_lambda;
      label["guidance_lambda"] = guidance_multiplier(inst, dual.best_lambda);
      label["lagrangian_bound"] = dual.dual_bound;
      write_text(paths.labels_dir(split) + "/" + name + ".json", label.dump(2));

      const BipartiteGraph graph = build_bipartite(inst);
      const ConditionEmbedding emb = encode(graph, encoder, cfg.encoder_cfg);
      json ej;
      ej["L"] = emb.L;
      ej["D"] = emb.D;
      ej["tokens"] = emb.tokens;
      ej["instance_id"] = raw.name;
      write_text(paths.embeddings_dir(split) + "/" + name + ".json", ej.dump());
    }
  }
}

void make_dataset(const ExperimentConfig& cfg) {
  generate_instances(cfg);
  label_dataset(cfg);
}

std::vector<DatasetEntry> load_split(const ExperimentConfig& cfg, const std::string& split) {
  DatasetPaths paths{cfg.output_dir};
  const int count = split == "train" ? cfg.train_count : cfg.test_count;
  std::vector<DatasetEntry> entries;
  entries.reserve(count);
  for (int i = 0; i < count; ++i) {
    const std::string name = index_name(i);
    DatasetEntry e;
    const MilpInstance raw =
        read_instance(paths.instances_dir(split) + "/" + name + ".milp.json");
    e.instance = to_canonical_min(raw);

    const json label = read_json(paths.labels_dir(split) + "/" + name + ".json");
    e.x_star = label.at("x").get<std::vector<double>>();
    e.lambda = label.at("guidance_lambda").get<std::vector<double>>();
    e.optimal = label.at("optimal").get<bool>();

    const json ej = read_json(paths.embeddings_dir(split) + "/" + name + ".json");
    e.embedding.L = ej.at("L").get<int>();
    e.embedding.D = ej.at("D").get<int>();
    e.embedding.tokens = ej.at("tokens").get<std::vector<double>>();
    e.embedding.instance_id = ej.value("instance_id", "");

    // Solutions are trained in normalized coordinates; every supported
    // family lives natively in [0,1] per variable, so the transform must be
    // the identity.
    if (!ValueTransform::from_bounds(e.instance).is_identity()) {
      throw std::runtime_error("load_split: non-identity value transform unsupported");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string train_model(const ExperimentConfig& cfg) {
  cfg.validate();
  DatasetPaths paths{cfg.output_dir};
  const std::vector<DatasetEntry> dataset = load_split(cfg, "train");

  // Calibrate the optimality guidance to the family's cost scale so the
  // c .* delta target component stays at most gamma_o per coordinate
  // (the multiplier side is normalized the same way when labels are cached).
  TrainConfig tc = cfg.train_cfg;
  double cost_scale = 1.0;
  for (const auto& e : dataset) {
    for (double cj : e.instance.c) cost_scale = std::max(cost_scale, std::abs(cj));
  }
  tc.guidance.gamma_o /= cost_scale;

  const TrainOutput out = train(dataset, tc);

  ModelCheckpoint ckpt;
  ckpt.denoiser_cfg = out.net;
  ckpt.encoder_cfg = cfg.encoder_cfg;
  ckpt.guidance = tc.guidance;  // effective, cost-calibrated coefficients
  ckpt.denoiser = out.params;
  ckpt.encoder = encoder_params_from_json(read_json(paths.encoder_file()));
  ckpt.schedule = out.schedule;
  ckpt.benchmark = benchmark_name(cfg.generator.benchmark);
  fs::create_directories(paths.root + "/checkpoints");
  save_checkpoint(ckpt, paths.checkpoint_file());

  json curve;
  curve["loss_curve"] = out.loss_curve;
  write_text(paths.root + "/checkpoints/loss_curve.json", curve.dump(2));
  return paths.checkpoint_file();
}

GuidedSolveOutcome run_guided_solve(const MilpInstance& canonical, const ModelCheckpoint& model,
                                    const SampleConfig& sample_cfg, double repair_budget_seconds,
                                    const SolveLimits& search_limits,
                                    const std::vector<double>& lambda) {
  if (!canonical.is_canonical_min()) {
    throw std::invalid_argument("run_guided_solve: instance must be canonical-min");
  }
  GuidedSolveOutcome out;
  const auto t0 = std::chrono::steady_clock::now();

  const BipartiteGraph graph = build_bipartite(canonical);
  const ConditionEmbedding emb = encode(graph, model.encoder, model.encoder_cfg);

  const ValueTransform transform = ValueTransform::from_bounds(canonical);
  const DiverseResult gen =
      generate_diverse(model.denoiser, model.denoiser_cfg, emb, model.schedule, sample_cfg,
                       canonical, lambda, &transform);
  out.best_candidate = gen.best_index;
  out.candidate_penalties = gen.penalties;

  // Replay the winning sample with its trajectory to log P(x_t) per step.
  {
    const uint64_t seed_j = mix_seed(sample_cfg.seed, static_cast<uint64_t>(gen.best_index));
    std::vector<std::vector<double>> traj;
    if (sample_cfg.sampler == SampleConfig::Sampler::ddpm) {
      sample_ddpm(model.denoiser, model.denoiser_cfg, canonical.num_vars(), emb, model.schedule,
                  seed_j, &traj);
    } else {
      sample_ddim_earlystop(model.denoiser, model.denoiser_cfg, canonical.num_vars(), emb,
                            model.schedule, sample_cfg.sample_steps,
                            sample_cfg.early_stop_index, seed_j, &traj);
    }
    for (const auto& x_norm : traj) {
      out.penalty_trajectory.push_back(
          penalty_term(transform.to_instance(x_norm), canonical, lambda));
    }
  }
  out.generate_seconds = now_seconds(t0);

  const auto t1 = std::chrono::steady_clock::now();
  out.repaired_center =
      repair_heuristic(canonical, gen.candidates[gen.best_index], repair_budget_seconds);
  out.repair_seconds = now_seconds(t1);

  if (out.repaired_center.feasible) {
    const std::vector<int> idx = canonical.integer_indices();
    TrustRegionSpec spec;
    spec.radius = sample_cfg.trust_radius;
    spec.center.reserve(idx.size());
    for (int j : idx) spec.center.push_back(std::floor(out.repaired_center.x[j] + 0.5));
    const MilpInstance restricted = add_trust_region(canonical, spec);
    Solution warm = out.repaired_center;
    out.search = solve_milp(restricted, search_limits, &warm);
    if (out.search.incumbent.feasible) {
      // Report against the original instance (drops the appended row).
      out.search.incumbent = evaluate_solution(canonical, out.search.incumbent.x);
      return out;
    }
  }

  out.fallback = true;
  out.search = solve_milp(canonical, search_limits);
  return out;
}

std::vector<double> guidance_multiplier(const MilpInstance& inst,
                                        const std::vector<double>& lambda) {
  const std::vector<double> atl = inst.A.multiply_transpose(lambda);
  double scale = 1.0;
  for (double v : atl) scale = std::max(scale, std::abs(v));
  std::vector<double> out = lambda;
  for (double& l : out) l /= scale;
  return out;
}

std::optional<double> gap_improvement(double obj_baseline, double obj_method, double obj_ref) {
  const double gap_baseline = obj_baseline - obj_ref;
  const double gap_method = obj_method - obj_ref;
  if (gap_baseline == 0.0) return std::nullopt;
  return (gap_baseline - gap_method) / std::abs(gap_baseline) * 100.0;
}

namespace {

std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

struct RunningStats {
  double sum = 0.0, sum2 = 0.0;
  int count = 0;
  void add(double v) {
    sum += v;
    sum2 += v * v;
    ++count;
  }
  double mean() const { return count > 0 ? sum / count : 0.0; }
  double stddev() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, sum2 / count - m * m));
  }
};

}  // namespace

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out << "method,mean_objective,std_objective,mean_nodes,feasibility_rate,"
         "mean_generate_seconds,mean_repair_seconds,mean_search_seconds,std_search_seconds\n";
  for (const auto& r : rows) {
    out << r.method << "," << csv_num(r.mean_objective) << "," << csv_num(r.std_objective) << ","
        << csv_num(r.mean_nodes) << "," << csv_num(r.feasibility_rate) << ","
        << csv_num(r.mean_generate_seconds) << "," << csv_num(r.mean_repair_seconds) << ","
        << csv_num(r.mean_search_seconds) << "," << csv_num(r.std_search_seconds) << "\n";
  }
  return out.str();
}

std::vector<MetricsRow> evaluate(const ExperimentConfig& cfg,
                                 const std::vector<std::string>& methods) {
  cfg.validate();
  DatasetPaths paths{cfg.output_dir};
  fs::create_directories(paths.results_dir());

  ModelCheckpoint model;
  bool model_loaded = false;
  for (const auto& m : methods) {
    if (m == "guided") {
      model = load_checkpoint(paths.checkpoint_file());
      model_loaded = true;
    } else if (m != "baseline") {
      throw std::invalid_argument("evaluate: unknown method " + m);
    }
  }
  (void)model_loaded;

  json log;
  log["benchmark"] = benchmark_name(cfg.generator.benchmark);
  log["instances"] = json::array();

  std::vector<MetricsRow> rows;
  for (const auto& method : methods) {
    rows.push_back(MetricsRow{method});
  }

  std::vector<RunningStats> obj_stats(methods.size()), node_stats(methods.size()),
      search_time(methods.size()), gen_time(methods.size()), rep_time(methods.size());
  std::vector<int> feasible_count(methods.size(), 0);

  for (int i = 0; i < cfg.test_count; ++i) {
    const std::string name = index_name(i);
    const MilpInstance raw =
        read_instance(paths.instances_dir("test") + "/" + name + ".milp.json");
    const MilpInstance inst = to_canonical_min(raw);
    const json label = read_json(paths.labels_dir("test") + "/" + name + ".json");
    const std::vector<double> lambda = label.at("guidance_lambda").get<std::vector<double>>();

    json irec;
    irec["name"] = raw.name;
    irec["reference_objective"] = label.at("display_objective").get<double>();

    for (size_t mi = 0; mi < methods.size(); ++mi) {
      json mrec;
      SearchResult sr;
      if (methods[mi] == "baseline") {
        sr = solve_milp(inst, cfg.search_limits);
      } else {
        SampleConfig scfg = cfg.sample_cfg;
        scfg.seed = mix_seed(cfg.sample_cfg.seed, static_cast<uint64_t>(i));
        const GuidedSolveOutcome go = run_guided_solve(
            inst, model, scfg, cfg.repair_budget_seconds, cfg.search_limits, lambda);
        sr = go.search;
        mrec["fallback"] = go.fallback;
        mrec["penalty_trajectory"] = go.penalty_trajectory;
        mrec["candidate_penalties"] = go.candidate_penalties;
        mrec["generate_seconds"] = go.generate_seconds;
        mrec["repair_seconds"] = go.repair_seconds;
        gen_time[mi].add(go.generate_seconds);
        rep_time[mi].add(go.repair_seconds);
      }
      const bool ok = sr.incumbent.feasible;
      mrec["status"] = milp_status_name(sr.status);
      mrec["feasible"] = ok;
      mrec["nodes"] = sr.nodes;
      mrec["search_seconds"] = sr.wall_time;
      if (ok) {
        mrec["objective"] = display_objective(raw, sr.incumbent.objective);
        mrec["canonical_objective"] = sr.incumbent.objective;
        obj_stats[mi].add(display_objective(raw, sr.incumbent.objective));
        ++feasible_count[mi];
      }
      json traj = json::array();
      for (const auto& p : sr.trajectory) {
        traj.push_back({{"nodes", p.nodes},
                        {"bound", display_objective(raw, p.bound)},
                        {"seconds", p.time}});
      }
      mrec["trajectory"] = traj;
      node_stats[mi].add(static_cast<double>(sr.nodes));
      search_time[mi].add(sr.wall_time);
      irec[methods[mi]] = mrec;
    }
    log["instances"].push_back(irec);
  }

  for (size_t mi = 0; mi < methods.size(); ++mi) {
    rows[mi].mean_objective = obj_stats[mi].mean();
    rows[mi].std_objective = obj_stats[mi].stddev();
    rows[mi].mean_nodes = node_stats[mi].mean();
    rows[mi].feasibility_rate =
        cfg.test_count > 0 ? static_cast<double>(feasible_count[mi]) / cfg.test_count : 0.0;
    rows[mi].mean_generate_seconds = gen_time[mi].mean();
    rows[mi].mean_repair_seconds = rep_time[mi].mean();
    rows[mi].mean_search_seconds = search_time[mi].mean();
    rows[mi].std_search_seconds = search_time[mi].stddev();
  }

  write_text(paths.results_dir() + "/metrics.csv", metrics_to_csv(rows));
  write_text(paths.results_dir() + "/log.json", log.dump(2));
  emit_plots(paths.results_dir());
  return rows;
}

void emit_plots(const std::string& results_dir) {
  const json log = read_json(results_dir + "/log.json");

  // best-so-far bound vs nodes, averaged over instances per method
  std::vector<std::string> methods;
  for (const auto& key : {"baseline", "guided"}) {
    if (!log.at("instances").empty() && log.at("instances")[0].contains(key)) {
      methods.push_back(key);
    }
  }

  std::vector<PlotSeries> bound_series;
  long max_nodes = 1;
  for (const auto& irec : log.at("instances")) {
    for (const auto& m : methods) {
      for (const auto& p : irec.at(m).at("trajectory")) {
        max_nodes = std::max(max_nodes, p.at("nodes").get<long>());
      }
    }
  }
  for (const auto& m : methods) {
    PlotSeries s;
    s.name = m;
    for (long nodes = 0; nodes <= max_nodes; ++nodes) {
      double sum = 0.0;
      int cnt = 0;
      for (const auto& irec : log.at("instances")) {
        const auto& traj = irec.at(m).at("trajectory");
        double best = kInf;
        bool seen = false;
        for (const auto& p : traj) {
          if (p.at("nodes").get<long>() <= nodes) {
            best = p.at("bound").get<double>();
            seen = true;
          }
        }
        if (seen) {
          sum += best;
          ++cnt;
        }
      }
      if (cnt == static_cast<int>(log.at("instances").size())) {
        s.points.push_back({static_cast<double>(nodes), sum / cnt});
      }
    }
    bound_series.push_back(std::move(s));
  }
  write_line_plot_svg(results_dir + "/primal_bound_trajectories.svg",
                      "Best-so-far primal bound", "nodes", "objective", bound_series);

  // mean penalty per sampling step (guided runs only)
  if (std::find(methods.begin(), methods.end(), "guided") != methods.end()) {
    size_t steps = 0;
    for (const auto& irec : log.at("instances")) {
      steps = std::max(steps, irec.at("guided").at("penalty_trajectory").size());
    }
    PlotSeries s;
    s.name = "mean penalty";
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
      if (cnt > 0) s.points.push_back({static_cast<double>(k), sum / cnt});
    }
    write_line_plot_svg(results_dir + "/penalty_trajectories.svg",
                        "Constraint penalty during sampling", "step", "P(x_t)", {s});
  }
}

ToyStats toy_experiment(const ToyConfig& cfg) {
  fs::create_directories(cfg.output_dir);

  EncoderConfig enc_cfg;
  Rng enc_rng(mix_seed(cfg.seed, kEncoderTag));
  const ParamSet encoder = make_encoder_params(enc_cfg, enc_rng);

  SubgradientConfig sg;
  sg.max_iterations = 200;

  std::vector<DatasetEntry> dataset;
  dataset.reserve(cfg.train_instances);
  for (int i = 0; i < cfg.train_instances; ++i) {
    DatasetEntry e;
    e.instance = gen_toy_2d_lp(mix_seed(cfg.seed, kTrainInstanceTag + i));
    const LpResult lp = solve_lp(e.instance);
    if (lp.status != LpStatus::optimal) {
      throw std::runtime_error("toy_experiment: generated LP not solvable");
    }
    e.x_star = lp.x;
    e.lambda = guidance_multiplier(e.instance, subgradient_solve(e.instance, sg).best_lambda);
    e.embedding = encode(build_bipartite(e.instance), encoder, enc_cfg);
    dataset.push_back(std::move(e));
  }

  TrainConfig tc;
  tc.grid_h = 1;
  tc.grid_w = 2;
  tc.T = cfg.steps;
  tc.guidance.gamma_o = cfg.gamma_o;
  tc.guidance.gamma_c = cfg.gamma_c;
  tc.batch_size = cfg.batch_size;
  tc.epochs = cfg.epochs;
  tc.seed = mix_seed(cfg.seed, kTrainTag);
  const TrainOutput trained = train(dataset, tc);

  const MilpInstance fixed = fixed_toy_instance();
  const LpResult fixed_lp = solve_lp(fixed);
  if (fixed_lp.status != LpStatus::optimal) {
    throw std::runtime_error("toy_experiment: reference LP not solvable");
  }
  const ConditionEmbedding fixed_emb = encode(build_bipartite(fixed), encoder, enc_cfg);

  // 64 deterministic DDIM trajectories; entry 0 is the Gaussian init.
  std::vector<std::vector<std::vector<double>>> trajectories;
  for (int j = 0; j < cfg.sample_count; ++j) {
    std::vector<std::vector<double>> traj;
    sample_ddim_earlystop(trained.params, trained.net, 2, fixed_emb, trained.schedule,
                          cfg.steps, 0, mix_seed(cfg.seed, 7000 + j), &traj);
    trajectories.push_back(std::move(traj));
  }

  ToyStats stats;
  const size_t steps = trajectories[0].size();
  for (size_t k = 0; k < steps; ++k) {
    double sum = 0.0;
    for (const auto& traj : trajectories) {
      const double dx = traj[k][0] - fixed_lp.x[0];
      const double dy = traj[k][1] - fixed_lp.x[1];
      sum += std::sqrt(dx * dx + dy * dy);
    }
    stats.mean_distance_per_step.push_back(sum / trajectories.size());
  }
  stats.initial_mean_distance = stats.mean_distance_per_step.front();
  stats.final_mean_distance = stats.mean_distance_per_step.back();

  // scatter of samples at a few checkpoints along the trajectory
  std::vector<PlotSeries> scatter;
  const std::vector<double> marks = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (double f : marks) {
    const size_t k = std::min(steps - 1, static_cast<size_t>(f * (steps - 1)));
    PlotSeries s;
    s.name = "step " + std::to_string(k);
    for (const auto& traj : trajectories) s.points.push_back({traj[k][0], traj[k][1]});
    scatter.push_back(std::move(s));
  }
  PlotSeries openum;
  openum.name = "optimum";
  openum.points.push_back({fixed_lp.x[0], fixed_lp.x[1]});
  scatter.push_back(openum);
  write_line_plot_svg(cfg.output_dir + "/toy_scatter.svg", "Samples over denoising steps",
                      "x1", "x2", scatter, /*scatter=*/true);

  PlotSeries dist;
  dist.name = "mean distance";
  for (size_t k = 0; k < steps; ++k) {
    dist.points.push_back({static_cast<double>(k), stats.mean_distance_per_step[k]});
  }
  write_line_plot_svg(cfg.output_dir + "/toy_distance.svg", "Mean distance to optimum", "step",
                      "distance", {dist});

  json sj;
  sj["initial_mean_distance"] = stats.initial_mean_distance;
  sj["final_mean_distance"] = stats.final_mean_distance;
  sj["mean_distance_per_step"] = stats.mean_distance_per_step;
  sj["optimum"] = fixed_lp.x;
  sj["loss_curve"] = trained.loss_curve;
  write_text(cfg.output_dir + "/toy_stats.json", sj.dump(2));
  return stats;
}

}  // namespace solgen
