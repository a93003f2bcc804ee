#include "gsp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <queue>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace gsp {

void parallel_for(int count, const std::function<void(int)>& body) {
  int threads = 1;
  if (const char* env = std::getenv("GSP_THREADS")) {
    threads = std::atoi(env);
  }
  threads = std::min(std::max(threads, 1), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

struct RunningStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  int count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    count += 1;
  }
  double mean() const { return count > 0 ? sum / count : 0.0; }
  double stddev() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, sum_sq / count - m * m));
  }
};

// look-alike assignment used whenever a noise model carries bad views but no
// explicit confuser table: goal g confuses with goal (g mod N) + 1
NoiseModel with_confusers(const NoiseModel& base, const SceneSpec& spec) {
  NoiseModel model = base;
  if (!model.confuser.empty() || model.p_bad_view <= 0.0 || spec.num_goals < 2) {
    return model;
  }
  for (const auto& [i, g] : spec.true_goal) {
    if (g != kNonGoal) model.confuser[i] = (g % spec.num_goals) + 1;
  }
  return model;
}

struct EpisodeOutcome {
  bool error = false;
  bool completed = false;
  int planning_steps = 0;
  int see_steps = 0;
  int match_attempts = 0;
  int match_successes = 0;
  double reward_grasp_sum = 0.0;
  int place_count = 0;
  double reward_see_sum = 0.0;
  int see_count = 0;
};

EpisodeOutcome run_cell_episode(const ScenarioParams& base_params,
                                GraspPolicyKind grasp, SeePolicyKind see,
                                PlaceVariant place, const NoiseModel& noise,
                                const EpisodeConfig& base_config, int budget,
                                std::uint64_t scene_seed, std::uint64_t episode_seed) {
  EpisodeOutcome out;
  try {
    ScenarioParams params = base_params;
    params.rng_seed = scene_seed;
    const SceneSpec spec = generate_scene(params);
    EpisodeConfig config = base_config;
    config.step_budget = budget;
    config.rng_seed = episode_seed;
    const EpisodeTrace trace =
        run_episode(spec, grasp, see, place, with_confusers(noise, spec), config);
    out.completed = trace.completed;
    out.planning_steps = trace.planning_steps;
    out.see_steps = trace.see_steps_total;
    out.match_attempts = trace.match_attempts;
    out.match_successes = trace.match_successes;
    for (const auto& step : trace.steps) {
      if (!step.grasp_failed) {
        out.reward_grasp_sum += step.reward_grasp;
        out.place_count += 1;
      }
      for (const auto& s : step.see_actions) {
        out.reward_see_sum += s.reward;
        out.see_count += 1;
      }
    }
  } catch (const std::exception&) {
    out.error = true;
  }
  return out;
}

}  // namespace

std::string scenario_label(const ScenarioParams& params) {
  std::ostringstream os;
  os << "g" << params.num_goal_objects << "n" << params.num_nongoal_objects;
  for (int len : params.cycle_type) os << "c" << len;
  if (params.fraction_at_goal > 0.0) {
    os << "f" << format_double(params.fraction_at_goal);
  }
  return os.str();
}

std::string policy_label(GraspPolicyKind grasp, SeePolicyKind see, PlaceVariant place) {
  std::string out;
  switch (grasp) {
    case GraspPolicyKind::Pi0: out = "pi0"; break;
    case GraspPolicyKind::GreedyFreeGoal: out = "greedy"; break;
    case GraspPolicyKind::RandomGrasp: out = "randgrasp"; break;
  }
  out += "/";
  switch (see) {
    case SeePolicyKind::NoSee: out += "nosee"; break;
    case SeePolicyKind::RandomSee: out += "randsee"; break;
    case SeePolicyKind::GreedySee: out += "greedysee"; break;
    case SeePolicyKind::OracleSee: out += "oraclesee"; break;
  }
  out += place == PlaceVariant::Pi0Place ? "/sceneplace" : "/handplace";
  return out;
}

std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec) {
  std::vector<MetricsRow> rows;
  std::uint64_t cell_index = 0;
  for (const auto& scenario : spec.scenarios) {
    for (const auto grasp : spec.grasp_kinds) {
      for (const auto see : spec.see_kinds) {
        for (const auto place : spec.place_variants) {
          for (const auto& point : spec.noise_grid) {
            // one seed per (scenario, policy, noise) cell, shared across the
            // budget grid: a truncated episode is a prefix of the longer run,
            // so task completion is monotone in b by construction
            const std::uint64_t cell_seed = split_seed(spec.master_seed, cell_index);
            cell_index += 1;
            for (const int budget : spec.step_budgets) {
              const int episodes = spec.episodes_per_cell;
              std::vector<EpisodeOutcome> outcomes(
                  static_cast<std::size_t>(episodes));
              parallel_for(episodes, [&](int e) {
                outcomes[static_cast<std::size_t>(e)] = run_cell_episode(
                    scenario, grasp, see, place, point.model, spec.base_config,
                    budget, split_seed(cell_seed, static_cast<std::uint64_t>(2 * e)),
                    split_seed(cell_seed, static_cast<std::uint64_t>(2 * e + 1)));
              });

              MetricsRow row;
              row.scenario = scenario_label(scenario);
              row.policy = policy_label(grasp, see, place);
              row.noise = point.label;
              row.budget = budget;
              row.episodes = episodes;
              RunningStats completion_steps;
              RunningStats overall_steps;
              int completions = 0;
              int see_on_completion = 0;
              long long attempts = 0;
              long long successes = 0;
              double rg_sum = 0.0;
              long long places = 0;
              double rs_sum = 0.0;
              long long sees = 0;
              for (const auto& o : outcomes) {
                if (o.error) {
                  row.errors += 1;
                  continue;
                }
                overall_steps.add(o.completed ? o.planning_steps : budget);
                if (o.completed) {
                  completions += 1;
                  completion_steps.add(o.planning_steps);
                  see_on_completion += o.see_steps;
                }
                attempts += o.match_attempts;
                successes += o.match_successes;
                rg_sum += o.reward_grasp_sum;
                places += o.place_count;
                rs_sum += o.reward_see_sum;
                sees += o.see_count;
              }
              const int valid = episodes - row.errors;
              row.task_completion = valid > 0 ? 100.0 * completions / valid : 0.0;
              row.completion_steps_mean = completion_steps.mean();
              row.completion_steps_std = completion_steps.stddev();
              row.overall_steps_mean = overall_steps.mean();
              row.overall_steps_std = overall_steps.stddev();
              row.see_steps_per_completion =
                  completions > 0 ? static_cast<double>(see_on_completion) / completions
                                  : 0.0;
              row.match_success =
                  attempts > 0 ? 100.0 * static_cast<double>(successes) / attempts : 0.0;
              row.mean_reward_grasp = places > 0 ? rg_sum / places : 0.0;
              row.mean_reward_see = sees > 0 ? rs_sum / sees : 0.0;
              rows.push_back(row);
            }
          }
        }
      }
    }
  }
  return rows;
}

namespace {

std::vector<std::string> row_fields(const MetricsRow& r) {
  return {r.scenario,
          r.policy,
          r.noise,
          std::to_string(r.budget),
          std::to_string(r.episodes),
          format_double(r.task_completion),
          format_double(r.completion_steps_mean),
          format_double(r.completion_steps_std),
          format_double(r.overall_steps_mean),
          format_double(r.overall_steps_std),
          format_double(r.see_steps_per_completion),
          format_double(r.match_success),
          format_double(r.mean_reward_grasp),
          format_double(r.mean_reward_see),
          std::to_string(r.errors)};
}

const std::vector<std::string>& metrics_header() {
  static const std::vector<std::string> header = {"scenario",
                                                  "policy",
                                                  "noise",
                                                  "budget",
                                                  "episodes",
                                                  "task_completion",
                                                  "completion_steps_mean",
                                                  "completion_steps_std",
                                                  "overall_steps_mean",
                                                  "overall_steps_std",
                                                  "see_steps_per_completion",
                                                  "match_success",
                                                  "mean_reward_grasp",
                                                  "mean_reward_see",
                                                  "errors"};
  return header;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out += ",";
    out += fields[k];
  }
  out += "\n";
  return out;
}

}  // namespace

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
  std::string out = join_csv(metrics_header());
  for (const auto& r : rows) out += join_csv(row_fields(r));
  return out;
}

std::string metrics_to_text(const std::vector<MetricsRow>& rows) {
  std::vector<std::vector<std::string>> table;
  table.push_back(metrics_header());
  for (const auto& r : rows) table.push_back(row_fields(r));
  std::vector<std::size_t> width(table[0].size(), 0);
  for (const auto& row : table) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      width[k] = std::max(width[k], row[k].size());
    }
  }
  std::string out;
  for (const auto& row : table) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out += "  ";
      out += row[k];
      out.append(width[k] - row[k].size(), ' ');
    }
    out += "\n";
  }
  return out;
}

namespace {

// BFS state codes per object: 0 = initial pose, 1..N = on goal j,
// N+1 = buffer, N+2 = outside
struct BfsContext {
  const SceneSpec& spec;
  int num_goals;
  std::vector<std::vector<GoalId>> init_overlap;  // goals blocked by initial pose
  std::vector<GoalId> init_at_goal;               // goal whose footprint equals pose

  explicit BfsContext(const SceneSpec& s) : spec(s), num_goals(s.num_goals) {
    init_overlap.resize(static_cast<std::size_t>(s.num_objects));
    init_at_goal.assign(static_cast<std::size_t>(s.num_objects), kNonGoal);
    for (ObjectId i = 1; i <= s.num_objects; ++i) {
      const Footprint& fp = s.initial_footprint.at(i);
      for (GoalId j = 1; j <= num_goals; ++j) {
        const Footprint& gfp = s.goal_footprint.at(j);
        if (footprints_intersect(fp, gfp)) {
          init_overlap[static_cast<std::size_t>(i - 1)].push_back(j);
          if (fp == gfp) init_at_goal[static_cast<std::size_t>(i - 1)] = j;
        }
      }
    }
  }

  bool goal_occupied(const std::vector<int>& codes, GoalId j, int skip) const {
    for (int k = 0; k < spec.num_objects; ++k) {
      if (k == skip) continue;
      const int c = codes[static_cast<std::size_t>(k)];
      if (c == j) return true;
      if (c == 0) {
        for (GoalId g : init_overlap[static_cast<std::size_t>(k)]) {
          if (g == j) return true;
        }
      }
    }
    return false;
  }

  bool done(const std::vector<int>& codes) const {
    for (ObjectId i = 1; i <= spec.num_objects; ++i) {
      const GoalId goal = spec.true_goal.at(i);
      const int c = codes[static_cast<std::size_t>(i - 1)];
      if (goal == kNonGoal) {
        if (c != num_goals + 2) return false;
      } else if (c != goal &&
                 !(c == 0 && init_at_goal[static_cast<std::size_t>(i - 1)] == goal)) {
        return false;
      }
    }
    return true;
  }

  std::uint64_t encode(const std::vector<int>& codes) const {
    std::uint64_t key = 0;
    const std::uint64_t base = static_cast<std::uint64_t>(num_goals + 3);
    for (int c : codes) key = key * base + static_cast<std::uint64_t>(c);
    return key;
  }
};

}  // namespace

int brute_force_min_steps(const SceneSpec& spec, int object_cap) {
  if (spec.num_objects > object_cap) {
    throw std::invalid_argument("brute_force_min_steps: object cap exceeded");
  }
  const BfsContext ctx(spec);
  const int buffer_code = spec.num_goals + 1;
  const int outside_code = spec.num_goals + 2;

  std::vector<int> start(static_cast<std::size_t>(spec.num_objects), 0);
  if (ctx.done(start)) return 0;

  std::unordered_map<std::uint64_t, int> dist;
  dist[ctx.encode(start)] = 0;
  std::queue<std::vector<int>> queue;
  queue.push(start);

  while (!queue.empty()) {
    const std::vector<int> codes = queue.front();
    queue.pop();
    const int d = dist.at(ctx.encode(codes));
    for (int k = 0; k < spec.num_objects; ++k) {
      if (codes[static_cast<std::size_t>(k)] == outside_code) continue;
      std::vector<int> targets;
      for (GoalId j = 1; j <= spec.num_goals; ++j) {
        if (!ctx.goal_occupied(codes, j, k)) targets.push_back(j);
      }
      targets.push_back(buffer_code);
      targets.push_back(outside_code);
      for (int target : targets) {
        if (target == codes[static_cast<std::size_t>(k)]) continue;
        std::vector<int> next = codes;
        next[static_cast<std::size_t>(k)] = target;
        const std::uint64_t key = ctx.encode(next);
        if (dist.count(key)) continue;
        if (ctx.done(next)) return d + 1;
        dist[key] = d + 1;
        queue.push(next);
      }
    }
  }
  throw std::logic_error("brute_force_min_steps: no completing sequence found");
}

SeeSessionResult simulate_see_session(const NoiseModel& noise, const SceneSpec& spec,
                                      const LatentViews& latent, ObjectId obj,
                                      SeePolicyKind see_kind, const Thresholds& th,
                                      int max_see_steps, Rng& rng) {
  SeeSessionResult result;
  ViewState vs;
  vs.object = obj;
  std::set<int> excluded{1};
  fuse_views(vs, 1, sample_view(noise, spec, latent, obj, 1, rng), FusionMode::Mean);
  MatchingDistribution d = to_distribution(vs.fused, noise.temperature);
  while (result.see_steps < max_see_steps) {
    if (should_terminate(d, spec.num_goals, th)) {
      result.terminated = true;
      break;
    }
    const auto action =
        select_view(see_kind, vs, excluded, noise, latent, d, FusionMode::Mean, rng);
    if (!action) break;
    excluded.insert(action->view);
    fuse_views(vs, action->view,
               sample_view(noise, spec, latent, obj, action->view, rng),
               FusionMode::Mean);
    d = to_distribution(vs.fused, noise.temperature);
    result.see_steps += 1;
  }
  if (!result.terminated) {
    result.terminated = should_terminate(d, spec.num_goals, th);
  }
  result.final_dist = d;
  return result;
}

std::vector<CalibrationRow> calibrate_thresholds(const NoiseModel& noise,
                                                 const std::vector<double>& omegas,
                                                 int samples, int num_goals,
                                                 std::uint64_t seed) {
  ScenarioParams goal_params;
  goal_params.num_goal_objects = num_goals;
  goal_params.rng_seed = split_seed(seed, 0);
  const SceneSpec goal_scene = generate_scene(goal_params);

  ScenarioParams mixed_params;
  mixed_params.num_goal_objects = num_goals;
  mixed_params.num_nongoal_objects = num_goals;
  mixed_params.rng_seed = split_seed(seed, 1);
  const SceneSpec mixed_scene = generate_scene(mixed_params);

  const NoiseModel& goal_noise = noise;
  const NoiseModel& mixed_noise = noise;

  std::vector<CalibrationRow> rows(omegas.size());
  parallel_for(static_cast<int>(omegas.size()), [&](int oi) {
    CalibrationRow row;
    row.omega = omegas[static_cast<std::size_t>(oi)];
    row.samples = samples;
    Thresholds th;
    th.omega_m = row.omega;
    Thresholds th_g;
    th_g.omega_g = row.omega;

    long long below = 0, below_match = 0;
    long long terminated = 0, terminated_match = 0;
    long long see_steps = 0;
    long long classify_ok = 0;
    for (int t = 0; t < samples; ++t) {
      // latent views shared across omegas so the sweep is paired
      Rng latent_rng(split_seed(seed, 1000 + static_cast<std::uint64_t>(t)));
      Rng rng(split_seed(split_seed(seed, 2 + static_cast<std::uint64_t>(oi)),
                         static_cast<std::uint64_t>(t)));

      const ObjectId obj = (t % goal_scene.num_objects) + 1;
      const LatentViews latent = make_latent_views(goal_noise, goal_scene, latent_rng);
      const GoalId truth = goal_scene.true_goal.at(obj);

      const SimilarityVector s1 =
          sample_view(goal_noise, goal_scene, latent, obj, 1, rng);
      const MatchingDistribution d1 = to_distribution(s1, goal_noise.temperature);
      if (d1.score() < th.zeta_m(num_goals)) {
        below += 1;
        if (d1.argmax() == truth) below_match += 1;
      }

      const SeeSessionResult session = simulate_see_session(
          goal_noise, goal_scene, latent, obj, SeePolicyKind::RandomSee, th, 5, rng);
      see_steps += session.see_steps;
      if (session.terminated) {
        terminated += 1;
        if (session.final_dist.argmax() == truth) terminated_match += 1;
      }

      const ObjectId mixed_obj = (t % mixed_scene.num_objects) + 1;
      const LatentViews mixed_latent =
          make_latent_views(mixed_noise, mixed_scene, latent_rng);
      const SimilarityVector ms =
          sample_view(mixed_noise, mixed_scene, mixed_latent, mixed_obj, 1, rng);
      const MatchingDistribution md = to_distribution(ms, mixed_noise.temperature);
      if (classify_goal(md, num_goals, th_g) == mixed_scene.true_goal.at(mixed_obj)) {
        classify_ok += 1;
      }
    }
    row.below_threshold_match_rate =
        below > 0 ? static_cast<double>(below_match) / below : 0.0;
    row.termination_rate = static_cast<double>(terminated) / samples;
    row.precision_at_termination =
        terminated > 0 ? static_cast<double>(terminated_match) / terminated : 0.0;
    row.mean_see_steps = static_cast<double>(see_steps) / samples;
    row.goal_classification_accuracy = static_cast<double>(classify_ok) / samples;
    rows[static_cast<std::size_t>(oi)] = row;
  });
  return rows;
}

std::string calibration_to_csv(const std::vector<CalibrationRow>& rows) {
  std::string out =
      "omega,samples,below_threshold_match_rate,termination_rate,"
      "precision_at_termination,mean_see_steps,goal_classification_accuracy\n";
  for (const auto& r : rows) {
    out += join_csv({format_double(r.omega), std::to_string(r.samples),
                     format_double(r.below_threshold_match_rate),
                     format_double(r.termination_rate),
                     format_double(r.precision_at_termination),
                     format_double(r.mean_see_steps),
                     format_double(r.goal_classification_accuracy)});
  }
  return out;
}

ScenarioParams random_small_scenario(int max_objects, std::uint64_t seed) {
  Rng rng(split_seed(seed, 7));
  ScenarioParams params;
  params.num_goal_objects = rng.uniform_int(2, std::max(2, max_objects - 1));
  params.num_nongoal_objects =
      rng.uniform_int(0, max_objects - params.num_goal_objects);
  if (params.num_goal_objects >= 2 && rng.bernoulli(0.6)) {
    params.cycle_type.push_back(rng.uniform_int(2, params.num_goal_objects));
    const int rest = params.num_goal_objects - params.cycle_type.front();
    if (rest >= 2 && rng.bernoulli(0.3)) {
      params.cycle_type.push_back(rng.uniform_int(2, rest));
    }
  }
  const double fractions[] = {0.0, 0.0, 0.3, 0.5};
  params.fraction_at_goal = fractions[rng.uniform_int(0, 3)];
  params.rng_seed = split_seed(seed, 8);
  return params;
}

namespace {

struct BootstrapCI {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

BootstrapCI paired_bootstrap(const std::vector<double>& diffs, int resamples,
                             std::uint64_t seed) {
  BootstrapCI ci;
  const int n = static_cast<int>(diffs.size());
  double sum = 0.0;
  for (double d : diffs) sum += d;
  ci.mean = sum / n;
  Rng rng(seed);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      acc += diffs[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
    }
    means[static_cast<std::size_t>(b)] = acc / n;
  }
  std::sort(means.begin(), means.end());
  const auto quantile = [&](double q) {
    const int idx = std::min(resamples - 1,
                             static_cast<int>(q * (resamples - 1) + 0.5));
    return means[static_cast<std::size_t>(idx)];
  };
  ci.lo = quantile(0.025);
  ci.hi = quantile(0.975);
  return ci;
}

}  // namespace

VerifyReport verify_theorems(const VerifyConfig& config) {
  VerifyReport report;
  std::ostringstream text;

  // optimality block: episode step count, graph lower bound, and exhaustive
  // search must coincide on every scene under exact perception
  const NoiseModel ideal;
  std::vector<int> t1_fail(static_cast<std::size_t>(config.optimality_scenes), 0);
  std::vector<std::string> t1_detail(static_cast<std::size_t>(config.optimality_scenes));
  parallel_for(config.optimality_scenes, [&](int s) {
    const std::uint64_t scene_seed =
        split_seed(config.master_seed, static_cast<std::uint64_t>(s));
    const ScenarioParams params =
        random_small_scenario(config.optimality_max_objects, scene_seed);
    const SceneSpec spec = generate_scene(params);
    const SceneState start = initial_state(spec);
    const int lower = optimal_step_lower_bound(spec, start);
    const int bfs = brute_force_min_steps(spec);
    EpisodeConfig ep;
    ep.rng_seed = split_seed(config.master_seed,
                             1000000 + static_cast<std::uint64_t>(s));
    const EpisodeTrace trace = run_episode(spec, GraspPolicyKind::Pi0,
                                           SeePolicyKind::NoSee,
                                           PlaceVariant::Pi0Place, ideal, ep);
    if (!trace.completed || trace.planning_steps != lower || lower != bfs) {
      t1_fail[static_cast<std::size_t>(s)] = 1;
      std::ostringstream d;
      d << "scene " << s << " (" << scenario_label(params)
        << "): episode=" << trace.planning_steps << " completed=" << trace.completed
        << " bound=" << lower << " search=" << bfs;
      t1_detail[static_cast<std::size_t>(s)] = d.str();
    }
  });
  int t1_failures = 0;
  for (int s = 0; s < config.optimality_scenes; ++s) {
    if (t1_fail[static_cast<std::size_t>(s)]) {
      t1_failures += 1;
      if (t1_failures <= 5) text << "  mismatch: " << t1_detail[static_cast<std::size_t>(s)] << "\n";
    }
  }
  report.optimality_pass = t1_failures == 0;
  report.optimality_mismatches = t1_failures;
  text << "optimality block: " << config.optimality_scenes << " scenes, "
       << t1_failures << " mismatches -> "
       << (report.optimality_pass ? "PASS" : "FAIL") << "\n";

  // decoupled-perception block: paired-seed step comparison across scene-noise
  // levels; positive diff means the in-hand place variant used fewer steps
  struct GridPoint {
    std::string label;
    double p_bad;
  };
  const GridPoint grid[] = {{"lownoise", 0.20}, {"midnoise", 0.30}, {"highnoise", 0.45}};
  report.dominance_pass = true;
  int point_index = 0;
  for (const auto& point : grid) {
    // bad views are uninformative (near-uniform scores); fused in-hand sessions
    // recover by rotating to a good view, single scene views cannot
    NoiseModel noise;
    noise.mu_match = 0.3;
    noise.mu_nonmatch = 0.0;
    noise.sigma = 0.03;
    noise.p_bad_view = point.p_bad;
    noise.mu_bad = 0.0;
    noise.quality_persistence = 0.5;
    noise.num_views = 8;

    const std::uint64_t point_seed =
        split_seed(config.master_seed, 2000000 + static_cast<std::uint64_t>(point_index));

    // matching accuracy, single scene view vs fused in-hand session
    ScenarioParams acc_params;
    acc_params.num_goal_objects = 5;
    acc_params.rng_seed = split_seed(point_seed, 0);
    const SceneSpec acc_scene = generate_scene(acc_params);
    const NoiseModel& acc_noise = noise;
    const int acc_trials = 2000;
    Thresholds th;
    long long single_ok = 0, fused_ok = 0;
    for (int t = 0; t < acc_trials; ++t) {
      Rng latent_rng(split_seed(point_seed, 10 + static_cast<std::uint64_t>(t)));
      Rng rng(split_seed(point_seed, 500000 + static_cast<std::uint64_t>(t)));
      const ObjectId obj = (t % acc_scene.num_objects) + 1;
      const GoalId truth = acc_scene.true_goal.at(obj);
      const LatentViews latent = make_latent_views(acc_noise, acc_scene, latent_rng);
      const SimilarityVector s1 = sample_view(acc_noise, acc_scene, latent, obj, 1, rng);
      if (classify_goal(to_distribution(s1, acc_noise.temperature), acc_scene.num_goals,
                        th) == truth) {
        single_ok += 1;
      }
      const SeeSessionResult session = simulate_see_session(
          acc_noise, acc_scene, latent, obj, config.see_kind, th, 5, rng);
      if (classify_goal(session.final_dist, acc_scene.num_goals, th) == truth) {
        fused_ok += 1;
      }
    }
    const double single_acc = 100.0 * static_cast<double>(single_ok) / acc_trials;
    const double fused_acc = 100.0 * static_cast<double>(fused_ok) / acc_trials;
    const double gap = fused_acc - single_acc;

    std::vector<double> diffs(static_cast<std::size_t>(config.dominance_episodes));
    parallel_for(config.dominance_episodes, [&](int e) {
      const std::uint64_t ep_seed =
          split_seed(point_seed, 3000000 + static_cast<std::uint64_t>(e));
      ScenarioParams params = random_small_scenario(5, ep_seed);
      params.num_nongoal_objects = 0;
      params.rng_seed = split_seed(ep_seed, 1);
      const SceneSpec spec = generate_scene(params);
      EpisodeConfig ep;
      ep.rng_seed = split_seed(ep_seed, 2);
      const EpisodeTrace scene_place =
          run_episode(spec, GraspPolicyKind::Pi0, SeePolicyKind::NoSee,
                      PlaceVariant::Pi0Place, noise, ep);
      const EpisodeTrace hand_place =
          run_episode(spec, GraspPolicyKind::Pi0, config.see_kind,
                      PlaceVariant::Pi1Place, noise, ep);
      const int steps0 =
          scene_place.completed ? scene_place.planning_steps : ep.step_budget;
      const int steps1 =
          hand_place.completed ? hand_place.planning_steps : ep.step_budget;
      diffs[static_cast<std::size_t>(e)] = static_cast<double>(steps0 - steps1);
    });
    const BootstrapCI ci = paired_bootstrap(diffs, config.bootstrap_resamples,
                                            split_seed(point_seed, 4000000));

    bool point_pass = ci.mean >= 0.0 && gap >= 10.0;
    if (gap >= 20.0) point_pass = point_pass && ci.lo > 0.0;
    report.dominance_pass = report.dominance_pass && point_pass;
    DominancePoint stats;
    stats.label = point.label;
    stats.single_view_accuracy = single_acc;
    stats.fused_accuracy = fused_acc;
    stats.accuracy_gap = gap;
    stats.mean_step_diff = ci.mean;
    stats.ci_lo = ci.lo;
    stats.ci_hi = ci.hi;
    stats.pass = point_pass;
    report.points.push_back(stats);
    text << "noise point " << point.label << ": single-view acc "
         << format_double(single_acc) << "%, fused acc " << format_double(fused_acc)
         << "% (gap " << format_double(gap) << "), mean step diff "
         << format_double(ci.mean) << " CI [" << format_double(ci.lo) << ", "
         << format_double(ci.hi) << "] over " << config.dominance_episodes
         << " paired episodes -> " << (point_pass ? "PASS" : "FAIL") << "\n";
    point_index += 1;
  }
  text << "decoupled-place block: "
       << (report.dominance_pass ? "PASS" : "FAIL") << "\n";

  report.text = text.str();
  return report;
}

}  // namespace gsp
