#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "gsp/scene.hpp"

using namespace gsp;

namespace {

ScenarioParams params(int goals, int nongoal, std::vector<int> cycles = {},
                      double fraction = 0.0, std::uint64_t seed = 1) {
  ScenarioParams p;
  p.num_goal_objects = goals;
  p.num_nongoal_objects = nongoal;
  p.cycle_type = std::move(cycles);
  p.fraction_at_goal = fraction;
  p.rng_seed = seed;
  return p;
}

}  // namespace

TEST_CASE("footprint intersection") {
  CHECK(footprints_intersect({1, 2}, {2, 3}));
  CHECK_FALSE(footprints_intersect({1, 2}, {3, 4}));
  CHECK_FALSE(footprints_intersect({}, {1}));
}

TEST_CASE("generated scene has consistent structure") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SceneSpec spec = generate_scene(params(4, 2, {2}, 0.0, seed));
    CHECK(spec.num_objects == 6);
    CHECK(spec.num_goals == 4);
    CHECK(spec.true_goal.size() == 6);
    CHECK(spec.initial_footprint.size() == 6);
    CHECK(spec.goal_footprint.size() == 4);

    // goal assignment is a bijection over goal objects
    std::set<GoalId> assigned;
    int nongoal = 0;
    for (const auto& [i, g] : spec.true_goal) {
      if (g == kNonGoal) {
        ++nongoal;
      } else {
        CHECK(g >= 1);
        CHECK(g <= 4);
        assigned.insert(g);
      }
    }
    CHECK(nongoal == 2);
    CHECK(assigned.size() == 4);

    // initial placements never overlap each other
    for (const auto& [a, fa] : spec.initial_footprint) {
      for (const auto& [b, fb] : spec.initial_footprint) {
        if (a < b) CHECK_FALSE(footprints_intersect(fa, fb));
      }
    }
    // goal footprints pairwise disjoint
    for (const auto& [a, fa] : spec.goal_footprint) {
      for (const auto& [b, fb] : spec.goal_footprint) {
        if (a < b) CHECK_FALSE(footprints_intersect(fa, fb));
      }
    }
  }
}

TEST_CASE("cycle members occupy each other's goals") {
  const SceneSpec spec = generate_scene(params(3, 0, {3}, 0.0, 11));
  // every object's initial pose must sit on some other object's goal
  int on_foreign_goal = 0;
  for (const auto& [i, fp] : spec.initial_footprint) {
    for (const auto& [k, g] : spec.true_goal) {
      if (k == i) continue;
      if (fp == spec.goal_footprint.at(g)) ++on_foreign_goal;
    }
  }
  CHECK(on_foreign_goal == 3);
}

TEST_CASE("fraction_at_goal places acyclic goal objects on their goals") {
  const SceneSpec spec = generate_scene(params(4, 0, {}, 1.0, 3));
  const SceneState state = initial_state(spec);
  for (ObjectId i = 1; i <= 4; ++i) CHECK(is_at_goal(spec, state, i));

  const SceneSpec half = generate_scene(params(4, 0, {}, 0.5, 3));
  const SceneState half_state = initial_state(half);
  int at = 0;
  for (ObjectId i = 1; i <= 4; ++i) {
    if (is_at_goal(half, half_state, i)) ++at;
  }
  CHECK(at == 2);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate_scene(params(3, 0, {1})), std::invalid_argument);
  CHECK_THROWS_AS(generate_scene(params(3, 0, {2, 2})), std::invalid_argument);
  CHECK_THROWS_AS(generate_scene(params(3, 0, {}, 1.5)), std::invalid_argument);
  CHECK_THROWS_AS(generate_scene(params(-1, 0)), std::invalid_argument);
}

TEST_CASE("scene generation is deterministic in the seed") {
  const auto a = scene_to_json(generate_scene(params(5, 1, {2}, 0.3, 77)));
  const auto b = scene_to_json(generate_scene(params(5, 1, {2}, 0.3, 77)));
  const auto c = scene_to_json(generate_scene(params(5, 1, {2}, 0.3, 78)));
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("grasp and place mechanics") {
  const SceneSpec spec = generate_scene(params(2, 0, {2}, 0.0, 5));
  SceneState state = initial_state(spec);

  apply_grasp(state, 1);
  CHECK(state.location.at(1).kind == LocKind::InHand);
  CHECK_THROWS_AS(apply_grasp(state, 2), std::logic_error);

  apply_place(spec, state, 1, PlaceTarget::ToBuffer());
  CHECK(state.location.at(1).kind == LocKind::InBuffer);
  CHECK(state.step_count == 1);

  apply_grasp(state, 2);
  const GoalId g2 = spec.true_goal.at(2);
  apply_place(spec, state, 2, PlaceTarget::ToGoal(g2));
  CHECK(is_at_goal(spec, state, 2));
  CHECK(state.step_count == 2);

  // goal g2 is now occupied
  apply_grasp(state, 1);
  CHECK_THROWS_AS(apply_place(spec, state, 1, PlaceTarget::ToGoal(g2)),
                  std::logic_error);
  apply_place(spec, state, 1, PlaceTarget::ToGoal(spec.true_goal.at(1)));
  CHECK(is_at_goal(spec, state, 1));
  CHECK(state.step_count == 3);
}

TEST_CASE("goal_free honors the ignore argument") {
  const SceneSpec spec = generate_scene(params(2, 0, {2}, 0.0, 5));
  SceneState state = initial_state(spec);
  // object 1 sits on object 2's goal and vice versa
  const GoalId g1 = spec.true_goal.at(1);
  CHECK_FALSE(goal_free(spec, state, g1));
  // ignore the occupant that blocks g1
  ObjectId blocker = 0;
  for (const auto& [i, fp] : spec.initial_footprint) {
    if (fp == spec.goal_footprint.at(g1)) blocker = i;
  }
  REQUIRE(blocker != 0);
  CHECK(goal_free(spec, state, g1, blocker));
}

TEST_CASE("outside and in-hand objects cannot be grasped") {
  const SceneSpec spec = generate_scene(params(2, 1, {}, 0.0, 9));
  SceneState state = initial_state(spec);
  apply_grasp(state, 1);
  apply_place(spec, state, 1, PlaceTarget::ToOutside());
  CHECK(state.location.at(1).kind == LocKind::Outside);
  CHECK_THROWS_AS(apply_grasp(state, 1), std::logic_error);
  CHECK_THROWS_AS(apply_place(spec, state, 2, PlaceTarget::ToBuffer()),
                  std::logic_error);
}

TEST_CASE("json round trip") {
  const ScenarioParams p = params(4, 2, {2}, 0.5, 123);
  const SceneSpec spec = generate_scene(p);
  const SceneSpec back = scene_from_json(scene_to_json(spec, &p));
  CHECK(back.num_objects == spec.num_objects);
  CHECK(back.num_goals == spec.num_goals);
  CHECK(back.true_goal == spec.true_goal);
  CHECK(back.initial_footprint == spec.initial_footprint);
  CHECK(back.goal_footprint == spec.goal_footprint);
  CHECK(back.cell_universe == spec.cell_universe);
}
