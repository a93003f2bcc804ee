#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace gsp {

using ObjectId = int;  // 1..M
using GoalId = int;    // 1..N, kNonGoal for objects without a goal
inline constexpr GoalId kNonGoal = 0;

using Cell = int;
using Footprint = std::set<Cell>;

struct ScenarioParams {
  int num_goal_objects = 0;
  int num_nongoal_objects = 0;
  std::vector<int> cycle_type;  // multiset of cycle lengths, each >= 2
  double fraction_at_goal = 0.0;
  std::uint64_t rng_seed = 0;
};

struct SceneSpec {
  int num_objects = 0;  // M
  int num_goals = 0;    // N
  std::map<ObjectId, GoalId> true_goal;
  std::map<ObjectId, Footprint> initial_footprint;
  std::map<GoalId, Footprint> goal_footprint;
  std::set<Cell> cell_universe;

  bool is_goal_object(ObjectId i) const { return true_goal.at(i) != kNonGoal; }
};

enum class LocKind { Placed, InBuffer, Outside, InHand };

struct Location {
  LocKind kind = LocKind::Placed;
  Footprint footprint;  // meaningful only when Placed
};

struct SceneState {
  std::map<ObjectId, Location> location;
  int step_count = 0;
};

struct PlaceTarget {
  enum class Kind { Goal, Outside, Buffer };
  Kind kind = Kind::Buffer;
  GoalId goal = kNonGoal;

  static PlaceTarget ToGoal(GoalId j) { return {Kind::Goal, j}; }
  static PlaceTarget ToOutside() { return {Kind::Outside, kNonGoal}; }
  static PlaceTarget ToBuffer() { return {Kind::Buffer, kNonGoal}; }
};

bool footprints_intersect(const Footprint& a, const Footprint& b);

// true iff no Placed object other than `ignore` intersects goal j's footprint
bool goal_free(const SceneSpec& spec, const SceneState& state, GoalId j,
               ObjectId ignore = 0);

SceneSpec generate_scene(const ScenarioParams& params);
SceneState initial_state(const SceneSpec& spec);

bool is_at_goal(const SceneSpec& spec, const SceneState& state, ObjectId i);

void apply_grasp(SceneState& state, ObjectId i);
void apply_place(const SceneSpec& spec, SceneState& state, ObjectId i,
                 const PlaceTarget& target);

std::string scene_to_json(const SceneSpec& spec, const ScenarioParams* params_echo = nullptr);
SceneSpec scene_from_json(const std::string& text);

}  // namespace gsp
