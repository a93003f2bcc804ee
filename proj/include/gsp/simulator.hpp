#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsp/policy.hpp"

namespace gsp {

enum class PlaceVariant { Pi0Place, Pi1Place };

struct EpisodeConfig {
  int step_budget = 30;
  int max_see_steps = 5;
  double p_grasp_fail = 0.0;
  double p_rotate_fail = 0.0;
  double lambda = 0.2;  // rotation-failure penalty weight
  double mu = 0.18;     // action-magnitude penalty weight
  Thresholds thresholds;
  FusionMode fusion = FusionMode::Mean;
  std::uint64_t rng_seed = 0;
};

struct SeeRecord {
  int view = 0;
  double delta_entropy = 0.0;
  bool match_correct = false;
  bool rotate_ok = true;
  double magnitude = 0.0;
  double reward = 0.0;
  double entropy_before = 0.0;
  double entropy_after = 0.0;
};

struct StepRecord {
  ObjectId grasp = 0;
  bool grasp_failed = false;
  std::vector<SeeRecord> see_actions;
  PlaceTarget place;
  double reward_grasp = 0.0;
  bool match_correct = false;               // matching result used for the place
  std::vector<double> final_distribution;   // snapshot fed to the place rule
};

struct EpisodeTrace {
  std::vector<StepRecord> steps;
  bool completed = false;
  bool stalled = false;
  int planning_steps = 0;  // |steps| when completed, budget b otherwise
  int see_steps_total = 0;
  int match_attempts = 0;
  int match_successes = 0;
  SceneState final_state;
};

bool check_completion(const SceneSpec& spec, const SceneState& state);

// reward of one completed pick-n-place
double compute_RG(bool was_at_goal_before, bool placed_on_true_goal, bool placed_in_buffer);

// R_S = 1_m + dH - lambda*(1 - 1_r) - mu*|a_S|
double compute_RS(bool match_correct, double delta_entropy, bool rotate_ok,
                  double action_magnitude, double lambda, double mu);

EpisodeTrace run_episode(const SceneSpec& spec, GraspPolicyKind grasp_kind,
                         SeePolicyKind see_kind, PlaceVariant place_variant,
                         const NoiseModel& noise, const EpisodeConfig& config);

// line-delimited records, one step per line plus a summary line; stable field order
std::string trace_to_jsonl(const EpisodeTrace& trace);

}  // namespace gsp
