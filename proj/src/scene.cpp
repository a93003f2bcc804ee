#include "gsp/scene.hpp"

#include <algorithm>
#include <stdexcept>

#include "gsp/rng.hpp"
#include "json.hpp"

namespace gsp {

bool footprints_intersect(const Footprint& a, const Footprint& b) {
  const Footprint& small = a.size() <= b.size() ? a : b;
  const Footprint& large = a.size() <= b.size() ? b : a;
  for (Cell c : small) {
    if (large.count(c)) return true;
  }
  return false;
}

bool goal_free(const SceneSpec& spec, const SceneState& state, GoalId j,
               ObjectId ignore) {
  const Footprint& goal = spec.goal_footprint.at(j);
  for (const auto& [i, loc] : state.location) {
    if (i == ignore || loc.kind != LocKind::Placed) continue;
    if (footprints_intersect(loc.footprint, goal)) return false;
  }
  return true;
}

namespace {

void validate_params(const ScenarioParams& p) {
  if (p.num_goal_objects < 0 || p.num_nongoal_objects < 0) {
    throw std::invalid_argument("object counts must be non-negative");
  }
  int cycle_sum = 0;
  for (int len : p.cycle_type) {
    if (len < 2) throw std::invalid_argument("cycle length must be >= 2");
    cycle_sum += len;
  }
  if (cycle_sum > p.num_goal_objects) {
    throw std::invalid_argument("cycle lengths exceed goal object count");
  }
  if (p.fraction_at_goal < 0.0 || p.fraction_at_goal > 1.0) {
    throw std::invalid_argument("fraction_at_goal must be in [0,1]");
  }
}

Footprint footprint_at(int base) { return Footprint{base, base + 1}; }

}  // namespace

SceneSpec generate_scene(const ScenarioParams& params) {
  validate_params(params);
  Rng rng(split_seed(params.rng_seed, 0));

  const int num_goals = params.num_goal_objects;
  const int num_objects = params.num_goal_objects + params.num_nongoal_objects;

  SceneSpec spec;
  spec.num_objects = num_objects;
  spec.num_goals = num_goals;

  // goal j occupies cells {10j, 10j+1}; off-goal spots start past the goals
  for (GoalId j = 1; j <= num_goals; ++j) {
    spec.goal_footprint[j] = footprint_at(10 * j);
  }

  std::vector<ObjectId> ids(static_cast<std::size_t>(num_objects));
  for (int i = 0; i < num_objects; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
  rng.shuffle(ids);

  std::vector<ObjectId> goal_objects(ids.begin(), ids.begin() + num_goals);
  std::vector<ObjectId> nongoal_objects(ids.begin() + num_goals, ids.end());

  // random bijection onto goals 1..N
  std::vector<GoalId> goals(static_cast<std::size_t>(num_goals));
  for (int j = 0; j < num_goals; ++j) goals[static_cast<std::size_t>(j)] = j + 1;
  rng.shuffle(goals);
  for (int k = 0; k < num_goals; ++k) {
    spec.true_goal[goal_objects[static_cast<std::size_t>(k)]] =
        goals[static_cast<std::size_t>(k)];
  }
  for (ObjectId i : nongoal_objects) spec.true_goal[i] = kNonGoal;

  // cycle members first, drawn from the shuffled goal-object order
  std::size_t cursor = 0;
  for (int len : params.cycle_type) {
    std::vector<ObjectId> cycle(goal_objects.begin() + static_cast<long>(cursor),
                                goal_objects.begin() + static_cast<long>(cursor + static_cast<std::size_t>(len)));
    cursor += static_cast<std::size_t>(len);
    // cycle[k] sits on the goal of cycle[k+1]; dependency arcs then form one len-cycle
    for (int k = 0; k < len; ++k) {
      ObjectId obj = cycle[static_cast<std::size_t>(k)];
      ObjectId next = cycle[static_cast<std::size_t>((k + 1) % len)];
      spec.initial_footprint[obj] = spec.goal_footprint.at(spec.true_goal.at(next));
    }
  }

  std::vector<ObjectId> rest(goal_objects.begin() + static_cast<long>(cursor),
                             goal_objects.end());
  const int at_goal_count = static_cast<int>(
      params.fraction_at_goal * static_cast<double>(rest.size()) + 0.5);
  int next_free_base = 10 * (num_goals + 1);
  for (std::size_t k = 0; k < rest.size(); ++k) {
    ObjectId obj = rest[k];
    if (static_cast<int>(k) < at_goal_count) {
      spec.initial_footprint[obj] = spec.goal_footprint.at(spec.true_goal.at(obj));
    } else {
      spec.initial_footprint[obj] = footprint_at(next_free_base);
      next_free_base += 10;
    }
  }
  for (ObjectId obj : nongoal_objects) {
    spec.initial_footprint[obj] = footprint_at(next_free_base);
    next_free_base += 10;
  }

  for (const auto& [j, fp] : spec.goal_footprint) {
    spec.cell_universe.insert(fp.begin(), fp.end());
  }
  for (const auto& [i, fp] : spec.initial_footprint) {
    spec.cell_universe.insert(fp.begin(), fp.end());
  }
  return spec;
}

SceneState initial_state(const SceneSpec& spec) {
  SceneState state;
  for (const auto& [i, fp] : spec.initial_footprint) {
    state.location[i] = Location{LocKind::Placed, fp};
  }
  return state;
}

bool is_at_goal(const SceneSpec& spec, const SceneState& state, ObjectId i) {
  const Location& loc = state.location.at(i);
  if (loc.kind != LocKind::Placed) return false;
  GoalId j = spec.true_goal.at(i);
  if (j == kNonGoal) return false;
  return loc.footprint == spec.goal_footprint.at(j);
}

void apply_grasp(SceneState& state, ObjectId i) {
  Location& loc = state.location.at(i);
  if (loc.kind == LocKind::Outside || loc.kind == LocKind::InHand) {
    throw std::logic_error("object not graspable");
  }
  for (const auto& [k, other] : state.location) {
    if (other.kind == LocKind::InHand) {
      throw std::logic_error("another object already in hand");
    }
  }
  loc = Location{LocKind::InHand, {}};
}

void apply_place(const SceneSpec& spec, SceneState& state, ObjectId i,
                 const PlaceTarget& target) {
  Location& loc = state.location.at(i);
  if (loc.kind != LocKind::InHand) {
    throw std::logic_error("place requires the object to be in hand");
  }
  switch (target.kind) {
    case PlaceTarget::Kind::Goal: {
      if (!goal_free(spec, state, target.goal, i)) {
        throw std::logic_error("place target goal is occupied");
      }
      loc = Location{LocKind::Placed, spec.goal_footprint.at(target.goal)};
      break;
    }
    case PlaceTarget::Kind::Outside:
      loc = Location{LocKind::Outside, {}};
      break;
    case PlaceTarget::Kind::Buffer:
      loc = Location{LocKind::InBuffer, {}};
      break;
  }
  state.step_count += 1;
}

std::string scene_to_json(const SceneSpec& spec, const ScenarioParams* params_echo) {
  nlohmann::ordered_json doc;
  doc["num_objects"] = spec.num_objects;
  doc["num_goals"] = spec.num_goals;
  doc["objects"] = nlohmann::ordered_json::array();
  for (const auto& [i, fp] : spec.initial_footprint) {
    nlohmann::ordered_json obj;
    obj["id"] = i;
    GoalId j = spec.true_goal.at(i);
    if (j == kNonGoal) {
      obj["true_goal"] = "nongoal";
    } else {
      obj["true_goal"] = j;
    }
    obj["cells"] = std::vector<Cell>(fp.begin(), fp.end());
    doc["objects"].push_back(obj);
  }
  doc["goals"] = nlohmann::ordered_json::array();
  for (const auto& [j, fp] : spec.goal_footprint) {
    nlohmann::ordered_json g;
    g["id"] = j;
    g["cells"] = std::vector<Cell>(fp.begin(), fp.end());
    doc["goals"].push_back(g);
  }
  doc["cells"] = std::vector<Cell>(spec.cell_universe.begin(), spec.cell_universe.end());
  if (params_echo != nullptr) {
    nlohmann::ordered_json p;
    p["num_goal_objects"] = params_echo->num_goal_objects;
    p["num_nongoal_objects"] = params_echo->num_nongoal_objects;
    p["cycle_type"] = params_echo->cycle_type;
    p["fraction_at_goal"] = params_echo->fraction_at_goal;
    p["rng_seed"] = params_echo->rng_seed;
    doc["params"] = p;
  }
  return doc.dump(2);
}

SceneSpec scene_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  SceneSpec spec;
  spec.num_objects = doc.at("num_objects").get<int>();
  spec.num_goals = doc.at("num_goals").get<int>();
  for (const auto& obj : doc.at("objects")) {
    ObjectId i = obj.at("id").get<ObjectId>();
    const auto& g = obj.at("true_goal");
    spec.true_goal[i] = g.is_string() ? kNonGoal : g.get<GoalId>();
    const auto cells = obj.at("cells").get<std::vector<Cell>>();
    spec.initial_footprint[i] = Footprint(cells.begin(), cells.end());
  }
  for (const auto& g : doc.at("goals")) {
    const auto cells = g.at("cells").get<std::vector<Cell>>();
    spec.goal_footprint[g.at("id").get<GoalId>()] = Footprint(cells.begin(), cells.end());
  }
  const auto cells = doc.at("cells").get<std::vector<Cell>>();
  spec.cell_universe = std::set<Cell>(cells.begin(), cells.end());
  return spec;
}

}  // namespace gsp
