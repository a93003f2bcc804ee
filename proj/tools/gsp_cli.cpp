#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gsp/harness.hpp"

namespace {

struct NoiseOptions {
  gsp::NoiseModel model;

  void attach(CLI::App* app) {
    app->add_option("--mu-match", model.mu_match, "mean similarity at the true goal");
    app->add_option("--mu-nonmatch", model.mu_nonmatch, "mean similarity elsewhere");
    app->add_option("--sigma", model.sigma, "similarity noise stddev");
    app->add_option("--p-bad-view", model.p_bad_view, "marginal bad-view probability");
    app->add_option("--mu-bad", model.mu_bad, "true-goal mean on bad views");
    app->add_option("--persistence", model.quality_persistence,
                    "view-quality chain persistence");
    app->add_option("--temperature", model.temperature, "softmax temperature");
    app->add_option("--views", model.num_views, "views per object");
  }
};

struct ConfigOptions {
  gsp::EpisodeConfig config;

  void attach(CLI::App* app) {
    app->add_option("--budget", config.step_budget, "planning step budget b");
    app->add_option("--max-see-steps", config.max_see_steps,
                    "see actions per in-hand session");
    app->add_option("--p-grasp-fail", config.p_grasp_fail, "grasp failure probability");
    app->add_option("--p-rotate-fail", config.p_rotate_fail,
                    "rotation failure probability");
    app->add_option("--lambda", config.lambda, "rotation-failure penalty weight");
    app->add_option("--mu", config.mu, "action-magnitude penalty weight");
    app->add_option("--omega-m", config.thresholds.omega_m,
                    "see termination offset omega_m");
    app->add_option("--omega-g", config.thresholds.omega_g,
                    "goal classification offset omega_g");
    app->add_option("--fusion", fusion_name, "mean|latest")
        ->check(CLI::IsMember({"mean", "latest"}));
  }

  gsp::EpisodeConfig resolve() const {
    gsp::EpisodeConfig out = config;
    out.fusion =
        fusion_name == "latest" ? gsp::FusionMode::LatestOnly : gsp::FusionMode::Mean;
    return out;
  }

  std::string fusion_name = "mean";
};

struct ScenarioOptions {
  gsp::ScenarioParams params;

  void attach(CLI::App* app) {
    params.num_goal_objects = 4;
    app->add_option("--goals", params.num_goal_objects, "goal objects (= goals N)");
    app->add_option("--nongoal", params.num_nongoal_objects, "non-goal objects");
    app->add_option("--cycles", params.cycle_type, "cycle lengths, each >= 2");
    app->add_option("--fraction-at-goal", params.fraction_at_goal,
                    "fraction of acyclic goal objects starting on their goal");
  }
};

gsp::GraspPolicyKind parse_grasp(const std::string& name) {
  if (name == "pi0") return gsp::GraspPolicyKind::Pi0;
  if (name == "greedy") return gsp::GraspPolicyKind::GreedyFreeGoal;
  return gsp::GraspPolicyKind::RandomGrasp;
}

gsp::SeePolicyKind parse_see(const std::string& name) {
  if (name == "nosee") return gsp::SeePolicyKind::NoSee;
  if (name == "randsee") return gsp::SeePolicyKind::RandomSee;
  if (name == "greedysee") return gsp::SeePolicyKind::GreedySee;
  return gsp::SeePolicyKind::OracleSee;
}

gsp::PlaceVariant parse_place(const std::string& name) {
  return name == "scene" ? gsp::PlaceVariant::Pi0Place : gsp::PlaceVariant::Pi1Place;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabletop rearrangement planning under noisy matching"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "emit a scenario file");
  ScenarioOptions gen_scenario;
  gen_scenario.attach(gen);
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "scenario seed");
  gen->add_option("--out", gen_out, "output path (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "run a single episode, trace to stdout/file");
  ScenarioOptions run_scenario;
  run_scenario.attach(run);
  NoiseOptions run_noise;
  run_noise.attach(run);
  ConfigOptions run_config;
  run_config.attach(run);
  std::string run_scene_file, run_grasp = "pi0", run_see = "nosee",
              run_place = "scene", run_out;
  std::uint64_t run_seed = 0;
  run->add_option("--scene", run_scene_file, "scenario file (overrides --goals etc.)");
  run->add_option("--grasp", run_grasp, "pi0|greedy|random")
      ->check(CLI::IsMember({"pi0", "greedy", "random"}));
  run->add_option("--see", run_see, "nosee|randsee|greedysee|oraclesee")
      ->check(CLI::IsMember({"nosee", "randsee", "greedysee", "oraclesee"}));
  run->add_option("--place", run_place, "scene|hand")
      ->check(CLI::IsMember({"scene", "hand"}));
  run->add_option("--seed", run_seed, "episode seed");
  run->add_option("--out", run_out, "trace output path (default stdout)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "policy/noise/budget grid");
  ScenarioOptions exp_scenario;
  exp_scenario.attach(experiment);
  NoiseOptions exp_noise;
  exp_noise.attach(experiment);
  ConfigOptions exp_config;
  exp_config.attach(experiment);
  std::uint64_t exp_seed = 0;
  int exp_episodes = 100;
  std::vector<int> exp_budgets{15, 20, 30};
  std::vector<std::string> exp_grasps{"pi0"};
  std::vector<std::string> exp_sees{"nosee", "randsee"};
  std::vector<std::string> exp_places{"scene", "hand"};
  std::vector<double> exp_bad_levels;
  std::string exp_out, exp_text_out;
  experiment->add_option("--seed", exp_seed, "master seed")->required();
  experiment->add_option("--episodes", exp_episodes, "episodes per grid cell");
  experiment->add_option("--budgets", exp_budgets, "step budget grid");
  experiment->add_option("--grasps", exp_grasps, "grasp policy grid")
      ->check(CLI::IsMember({"pi0", "greedy", "random"}));
  experiment->add_option("--sees", exp_sees, "see policy grid")
      ->check(CLI::IsMember({"nosee", "randsee", "greedysee", "oraclesee"}));
  experiment->add_option("--places", exp_places, "place variant grid")
      ->check(CLI::IsMember({"scene", "hand"}));
  experiment->add_option("--bad-view-grid", exp_bad_levels,
                         "override p-bad-view grid (default: single point)");
  experiment->add_option("--out", exp_out, "CSV output path (default stdout)");
  experiment->add_option("--text-out", exp_text_out, "aligned text table path");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "confidence-offset sweep");
  NoiseOptions cal_noise;
  cal_noise.model.mu_match = 0.3;
  cal_noise.model.sigma = 0.05;
  cal_noise.model.p_bad_view = 0.35;
  cal_noise.attach(calibrate);
  std::uint64_t cal_seed = 0;
  int cal_samples = 10000;
  int cal_goals = 5;
  std::vector<double> cal_omegas{0.0, 0.04, 0.08, 0.12, 0.16, 0.2};
  std::string cal_out;
  calibrate->add_option("--seed", cal_seed, "sweep seed");
  calibrate->add_option("--samples", cal_samples, "samples per omega")
      ->check(CLI::Range(100, 10000000));
  calibrate->add_option("--goals", cal_goals, "goal count N");
  calibrate->add_option("--omegas", cal_omegas, "offsets to sweep");
  calibrate->add_option("--out", cal_out, "CSV output path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "optimality and step-dominance report");
  std::uint64_t verify_seed = 0;
  int verify_scenes = 1000;
  int verify_episodes = 2000;
  int verify_resamples = 1000;
  std::string verify_out;
  verify->add_option("--seed", verify_seed, "master seed")->required();
  verify->add_option("--scenes", verify_scenes, "scenes for the optimality block");
  verify->add_option("--episodes", verify_episodes, "paired episodes per noise point");
  verify->add_option("--resamples", verify_resamples, "bootstrap resamples");
  verify->add_option("--out", verify_out, "report path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      gsp::ScenarioParams params = gen_scenario.params;
      params.rng_seed = gen_seed;
      const gsp::SceneSpec spec = gsp::generate_scene(params);
      write_output(gen_out, gsp::scene_to_json(spec, &params) + "\n");
    } else if (run->parsed()) {
      gsp::SceneSpec spec;
      if (!run_scene_file.empty()) {
        std::ifstream in(run_scene_file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open scene file: " + run_scene_file);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        spec = gsp::scene_from_json(text);
      } else {
        gsp::ScenarioParams params = run_scenario.params;
        params.rng_seed = gsp::split_seed(run_seed, 0xA11CE);
        spec = gsp::generate_scene(params);
      }
      gsp::EpisodeConfig config = run_config.resolve();
      config.rng_seed = run_seed;
      const gsp::EpisodeTrace trace =
          gsp::run_episode(spec, parse_grasp(run_grasp), parse_see(run_see),
                           parse_place(run_place), run_noise.model, config);
      write_output(run_out, gsp::trace_to_jsonl(trace));
    } else if (experiment->parsed()) {
      gsp::ExperimentSpec spec;
      spec.scenarios.push_back(exp_scenario.params);
      for (const auto& g : exp_grasps) spec.grasp_kinds.push_back(parse_grasp(g));
      for (const auto& s : exp_sees) spec.see_kinds.push_back(parse_see(s));
      for (const auto& p : exp_places) spec.place_variants.push_back(parse_place(p));
      if (exp_bad_levels.empty()) {
        spec.noise_grid.push_back({"base", exp_noise.model});
      } else {
        for (double level : exp_bad_levels) {
          gsp::NoiseModel model = exp_noise.model;
          model.p_bad_view = level;
          char label[32];
          std::snprintf(label, sizeof(label), "bad%.2f", level);
          spec.noise_grid.push_back({label, model});
        }
      }
      spec.step_budgets = exp_budgets;
      spec.episodes_per_cell = exp_episodes;
      spec.master_seed = exp_seed;
      spec.base_config = exp_config.resolve();
      const auto rows = gsp::run_experiment(spec);
      write_output(exp_out, gsp::metrics_to_csv(rows));
      if (!exp_text_out.empty()) {
        write_output(exp_text_out, gsp::metrics_to_text(rows));
      }
    } else if (calibrate->parsed()) {
      const auto rows = gsp::calibrate_thresholds(cal_noise.model, cal_omegas,
                                                  cal_samples, cal_goals, cal_seed);
      write_output(cal_out, gsp::calibration_to_csv(rows));
    } else if (verify->parsed()) {
      gsp::VerifyConfig config;
      config.master_seed = verify_seed;
      config.optimality_scenes = verify_scenes;
      config.dominance_episodes = verify_episodes;
      config.bootstrap_resamples = verify_resamples;
      const gsp::VerifyReport report = gsp::verify_theorems(config);
      write_output(verify_out, report.text);
      if (!report.optimality_pass || !report.dominance_pass) return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
