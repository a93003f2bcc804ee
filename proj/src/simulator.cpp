#include "gsp/simulator.hpp"

#include "json.hpp"

namespace gsp {

bool check_completion(const SceneSpec& spec, const SceneState& state) {
  for (const auto& [i, goal] : spec.true_goal) {
    if (goal == kNonGoal) {
      if (state.location.at(i).kind != LocKind::Outside) return false;
    } else {
      if (!is_at_goal(spec, state, i)) return false;
    }
  }
  return true;
}

double compute_RG(bool was_at_goal_before, bool placed_on_true_goal,
                  bool placed_in_buffer) {
  if (was_at_goal_before) return -1.5;
  if (placed_on_true_goal) return 1.0;
  if (placed_in_buffer) return 0.0;
  return 0.0;  // wrong goal / outside: no explicit reward case
}

double compute_RS(bool match_correct, double delta_entropy, bool rotate_ok,
                  double action_magnitude, double lambda, double mu) {
  return (match_correct ? 1.0 : 0.0) + delta_entropy -
         lambda * (rotate_ok ? 0.0 : 1.0) - mu * action_magnitude;
}

namespace {

bool matching_correct(const SceneSpec& spec, ObjectId i, const MatchingDistribution& d,
                      const Thresholds& thresholds) {
  return classify_goal(d, spec.num_goals, thresholds) == spec.true_goal.at(i);
}

}  // namespace

EpisodeTrace run_episode(const SceneSpec& spec, GraspPolicyKind grasp_kind,
                         SeePolicyKind see_kind, PlaceVariant place_variant,
                         const NoiseModel& noise, const EpisodeConfig& config) {
  Rng latent_rng(split_seed(config.rng_seed, 0));
  Rng rng(split_seed(config.rng_seed, 1));
  const LatentViews latent = make_latent_views(noise, spec, latent_rng);
  const int num_goals = spec.num_goals;

  EpisodeTrace trace;
  SceneState state = initial_state(spec);
  int stalls = 0;

  while (state.step_count < config.step_budget) {
    if (check_completion(spec, state)) {
      trace.completed = true;
      break;
    }

    const auto scene_dists = observe_scene(noise, spec, state, latent, rng);
    Assignment estimated;
    for (const auto& [i, d] : scene_dists) {
      estimated[i] = classify_goal(d, num_goals, config.thresholds);
    }
    const auto graph = build_dependency_graph(spec, state, estimated);
    const auto membership = classify_membership(graph);
    FvsResult fvs;
    if (membership.free.empty() && !membership.blocked.empty()) {
      fvs = min_fvs_exact(graph);
    }
    const auto grasp = select_grasp(grasp_kind, membership, fvs, rng);
    if (!grasp) {
      // estimation may transiently see nothing movable; fresh noise next round
      if (++stalls > config.step_budget) {
        trace.stalled = true;
        break;
      }
      continue;
    }
    stalls = 0;

    const ObjectId obj = grasp->object;
    StepRecord rec;
    rec.grasp = obj;
    const bool was_at_goal = is_at_goal(spec, state, obj);

    if (rng.bernoulli(config.p_grasp_fail)) {
      rec.grasp_failed = true;
      state.step_count += 1;
      trace.steps.push_back(rec);
      continue;
    }
    apply_grasp(state, obj);

    // grasping grants one free in-hand observation (view 1)
    ViewState vs;
    vs.object = obj;
    std::set<int> excluded{1};
    fuse_views(vs, 1, sample_view(noise, spec, latent, obj, 1, rng), config.fusion);
    MatchingDistribution d_current = to_distribution(vs.fused, noise.temperature);
    int current_view = 1;

    if (place_variant == PlaceVariant::Pi1Place) {
      while (static_cast<int>(rec.see_actions.size()) < config.max_see_steps) {
        if (should_terminate(d_current, num_goals, config.thresholds)) break;
        const auto action = select_view(see_kind, vs, excluded, noise, latent,
                                        d_current, config.fusion, rng);
        if (!action) break;
        SeeRecord see;
        see.view = action->view;
        see.entropy_before = d_current.entropy();
        see.magnitude = view_action_magnitude(current_view, action->view, noise.num_views);
        excluded.insert(action->view);
        see.rotate_ok = !rng.bernoulli(config.p_rotate_fail);
        if (see.rotate_ok) {
          fuse_views(vs, action->view,
                     sample_view(noise, spec, latent, obj, action->view, rng),
                     config.fusion);
          d_current = to_distribution(vs.fused, noise.temperature);
          current_view = action->view;
        }
        see.entropy_after = d_current.entropy();
        see.delta_entropy = see.entropy_before - see.entropy_after;
        see.match_correct = matching_correct(spec, obj, d_current, config.thresholds);
        see.reward = compute_RS(see.match_correct, see.delta_entropy, see.rotate_ok,
                                see.magnitude, config.lambda, config.mu);
        rec.see_actions.push_back(see);
        trace.see_steps_total += 1;
      }
    }

    const MatchingDistribution& d_place =
        place_variant == PlaceVariant::Pi1Place ? d_current : scene_dists.at(obj);
    const PlaceTarget target =
        place_variant == PlaceVariant::Pi1Place
            ? select_place(d_place, spec, state, obj, config.thresholds)
            : select_place_pi0(d_place, spec, state, obj, config.thresholds);
    apply_place(spec, state, obj, target);

    rec.place = target;
    rec.match_correct = matching_correct(spec, obj, d_place, config.thresholds);
    trace.match_attempts += 1;
    if (rec.match_correct) trace.match_successes += 1;
    const bool on_true_goal =
        target.kind == PlaceTarget::Kind::Goal && target.goal == spec.true_goal.at(obj);
    rec.reward_grasp =
        compute_RG(was_at_goal, on_true_goal, target.kind == PlaceTarget::Kind::Buffer);
    rec.final_distribution.assign(d_place.probs.data(),
                                  d_place.probs.data() + d_place.probs.size());
    trace.steps.push_back(rec);
  }

  if (!trace.completed) trace.completed = check_completion(spec, state);
  trace.planning_steps = trace.completed ? state.step_count : config.step_budget;
  trace.final_state = state;
  return trace;
}

std::string trace_to_jsonl(const EpisodeTrace& trace) {
  std::string out;
  for (const auto& step : trace.steps) {
    nlohmann::ordered_json line;
    line["grasp"] = step.grasp;
    line["grasp_failed"] = step.grasp_failed;
    nlohmann::ordered_json sees = nlohmann::ordered_json::array();
    for (const auto& see : step.see_actions) {
      nlohmann::ordered_json s;
      s["view"] = see.view;
      s["delta_entropy"] = see.delta_entropy;
      s["match_correct"] = see.match_correct;
      s["rotate_ok"] = see.rotate_ok;
      s["magnitude"] = see.magnitude;
      s["reward"] = see.reward;
      sees.push_back(s);
    }
    line["see_actions"] = sees;
    if (!step.grasp_failed) {
      switch (step.place.kind) {
        case PlaceTarget::Kind::Goal:
          line["place"] = step.place.goal;
          break;
        case PlaceTarget::Kind::Outside:
          line["place"] = "outside";
          break;
        case PlaceTarget::Kind::Buffer:
          line["place"] = "buffer";
          break;
      }
      line["reward_grasp"] = step.reward_grasp;
      line["match_correct"] = step.match_correct;
      line["distribution"] = step.final_distribution;
    }
    out += line.dump();
    out += "\n";
  }
  nlohmann::ordered_json summary;
  summary["completed"] = trace.completed;
  summary["stalled"] = trace.stalled;
  summary["planning_steps"] = trace.planning_steps;
  summary["see_steps_total"] = trace.see_steps_total;
  summary["match_attempts"] = trace.match_attempts;
  summary["match_successes"] = trace.match_successes;
  out += summary.dump();
  out += "\n";
  return out;
}

}  // namespace gsp
