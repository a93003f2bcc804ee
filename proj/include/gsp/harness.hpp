#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gsp/simulator.hpp"

namespace gsp {

struct NoiseGridPoint {
  std::string label;
  NoiseModel model;
};

struct ExperimentSpec {
  std::vector<ScenarioParams> scenarios;  // base params; seeds re-derived per episode
  std::vector<GraspPolicyKind> grasp_kinds;
  std::vector<SeePolicyKind> see_kinds;
  std::vector<PlaceVariant> place_variants;
  std::vector<NoiseGridPoint> noise_grid;
  std::vector<int> step_budgets;
  int episodes_per_cell = 100;
  std::uint64_t master_seed = 0;
  EpisodeConfig base_config;
};

struct MetricsRow {
  std::string scenario;
  std::string policy;
  std::string noise;
  int budget = 0;
  int episodes = 0;
  double task_completion = 0.0;  // percent
  double completion_steps_mean = 0.0;
  double completion_steps_std = 0.0;
  double overall_steps_mean = 0.0;
  double overall_steps_std = 0.0;
  double see_steps_per_completion = 0.0;
  double match_success = 0.0;  // percent
  double mean_reward_grasp = 0.0;
  double mean_reward_see = 0.0;
  int errors = 0;
};

std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec);

std::string metrics_to_csv(const std::vector<MetricsRow>& rows);
std::string metrics_to_text(const std::vector<MetricsRow>& rows);

std::string scenario_label(const ScenarioParams& params);
std::string policy_label(GraspPolicyKind grasp, SeePolicyKind see, PlaceVariant place);

// BFS over the full ideal-perception action space; independent optimality oracle
int brute_force_min_steps(const SceneSpec& spec, int object_cap = 6);

struct CalibrationRow {
  double omega = 0.0;
  int samples = 0;
  double below_threshold_match_rate = 0.0;   // single-view samples with m < zeta_m
  double termination_rate = 0.0;             // see sessions that self-terminated
  double precision_at_termination = 0.0;
  double mean_see_steps = 0.0;
  double goal_classification_accuracy = 0.0;  // omega applied as omega_g
};

std::vector<CalibrationRow> calibrate_thresholds(const NoiseModel& noise,
                                                 const std::vector<double>& omegas,
                                                 int samples, int num_goals,
                                                 std::uint64_t seed);

std::string calibration_to_csv(const std::vector<CalibrationRow>& rows);

struct VerifyConfig {
  std::uint64_t master_seed = 0;
  int optimality_scenes = 1000;
  int optimality_max_objects = 6;
  int dominance_episodes = 2000;
  int bootstrap_resamples = 1000;
  SeePolicyKind see_kind = SeePolicyKind::RandomSee;
};

struct DominancePoint {
  std::string label;
  double single_view_accuracy = 0.0;  // percent
  double fused_accuracy = 0.0;        // percent
  double accuracy_gap = 0.0;
  double mean_step_diff = 0.0;  // scene-place minus hand-place, positive favors hand
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool pass = false;
};

struct VerifyReport {
  bool optimality_pass = false;
  bool dominance_pass = false;
  int optimality_mismatches = 0;
  std::vector<DominancePoint> points;
  std::string text;
};

struct SeeSessionResult {
  bool terminated = false;
  int see_steps = 0;
  MatchingDistribution final_dist;
};

// one in-hand matching session in isolation: free view-1 observation, then see
// actions until the confidence terminal or the budget
SeeSessionResult simulate_see_session(const NoiseModel& noise, const SceneSpec& spec,
                                      const LatentViews& latent, ObjectId obj,
                                      SeePolicyKind see_kind, const Thresholds& th,
                                      int max_see_steps, Rng& rng);

VerifyReport verify_theorems(const VerifyConfig& config);

// deterministic reduction helper; thread count from GSP_THREADS (default 1)
void parallel_for(int count, const std::function<void(int)>& body);

ScenarioParams random_small_scenario(int max_objects, std::uint64_t seed);

}  // namespace gsp
