#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "gsp/policy.hpp"

using namespace gsp;

namespace {

MembershipSets membership(std::set<ObjectId> free, std::set<ObjectId> blocked) {
  MembershipSets sets;
  sets.free = std::move(free);
  sets.blocked = std::move(blocked);
  return sets;
}

SceneSpec goal_scene(int goals, std::uint64_t seed = 1) {
  ScenarioParams p;
  p.num_goal_objects = goals;
  p.rng_seed = seed;
  return generate_scene(p);
}

SimilarityVector vec(std::initializer_list<double> values) {
  SimilarityVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v[k++] = x;
  return v;
}

double log_gauss(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
}

// expected entropy drop by exhaustive enumeration over quality sequences,
// an independent check of the chain-posterior computation
double oracle_expected_drop(const ViewState& vs, const NoiseModel& noise,
                            const MatchingDistribution& current, int candidate) {
  const int V = noise.num_views;
  const int N = static_cast<int>(current.probs.size());
  const double p = noise.p_bad_view;
  const double rho = noise.quality_persistence;
  const double sigma = std::max(noise.sigma, 1e-3);

  double expected_after = 0.0;
  for (GoalId j = 1; j <= N; ++j) {
    const double weight = current.probs[j - 1];
    if (weight <= 0.0) continue;
    // joint over all 2^V sequences, conditioned on the observed samples
    double post[2] = {0.0, 0.0};  // P(candidate good/bad | data, hypothesis j)
    for (int mask = 0; mask < (1 << V); ++mask) {
      const auto good_at = [&](int view) { return ((mask >> (view - 1)) & 1) == 0; };
      double log_prior = std::log(good_at(1) ? 1.0 - p : p);
      for (int v = 2; v <= V; ++v) {
        const double same = good_at(v) == good_at(v - 1) ? rho : 0.0;
        const double redraw = (1.0 - rho) * (good_at(v) ? 1.0 - p : p);
        log_prior += std::log(same + redraw);
      }
      double log_like = 0.0;
      for (std::size_t k = 0; k < vs.observed_views.size(); ++k) {
        const int view = vs.observed_views[k];
        const SimilarityVector mean =
            mean_similarity(noise, N, vs.object, j, good_at(view));
        for (Eigen::Index c = 0; c < vs.samples[k].size(); ++c) {
          log_like += log_gauss(vs.samples[k][c], mean[c], sigma);
        }
      }
      post[good_at(candidate) ? 0 : 1] += std::exp(log_prior + log_like);
    }
    const double norm = post[0] + post[1];
    for (int q = 0; q < 2; ++q) {
      const double p_quality = post[q] / norm;
      const SimilarityVector mean =
          mean_similarity(noise, N, vs.object, j, q == 0);
      SimilarityVector acc = mean;
      for (const auto& s : vs.samples) acc += s;
      const auto d_after = to_distribution(
          acc / static_cast<double>(vs.samples.size() + 1), noise.temperature);
      expected_after += weight * p_quality * d_after.entropy();
    }
  }
  return current.entropy() - expected_after;
}

}  // namespace

TEST_CASE("pi0 grasps uniformly over the free set") {
  const auto sets = membership({2, 5, 7}, {});
  Rng rng(42);
  std::map<ObjectId, int> counts;
  for (int t = 0; t < 3000; ++t) {
    const auto action = select_grasp(GraspPolicyKind::Pi0, sets, {}, rng);
    REQUIRE(action.has_value());
    counts[action->object] += 1;
  }
  CHECK(counts.size() == 3);
  for (const auto& [obj, n] : counts) {
    CHECK(n > 900);
    CHECK(n < 1100);
  }
}

TEST_CASE("pi0 falls back to the first minimum-FVS member") {
  const auto sets = membership({}, {3, 4, 5});
  FvsResult fvs;
  fvs.members = {4, 5};
  fvs.size = 2;
  Rng rng(1);
  const auto action = select_grasp(GraspPolicyKind::Pi0, sets, fvs, rng);
  REQUIRE(action.has_value());
  CHECK(action->object == 4);
}

TEST_CASE("grasp selection returns nothing on an empty graph") {
  Rng rng(1);
  CHECK_FALSE(select_grasp(GraspPolicyKind::Pi0, {}, {}, rng).has_value());
  CHECK_FALSE(select_grasp(GraspPolicyKind::RandomGrasp, {}, {}, rng).has_value());
}

TEST_CASE("baseline grasp policies") {
  Rng rng(3);
  const auto sets = membership({2, 9}, {4});
  CHECK(select_grasp(GraspPolicyKind::GreedyFreeGoal, sets, {}, rng)->object == 2);
  const auto blocked_only = membership({}, {4, 6});
  CHECK(select_grasp(GraspPolicyKind::GreedyFreeGoal, blocked_only, {}, rng)->object == 4);
  for (int t = 0; t < 50; ++t) {
    const ObjectId o = select_grasp(GraspPolicyKind::RandomGrasp, sets, {}, rng)->object;
    CHECK((o == 2 || o == 4 || o == 9));
  }
}

TEST_CASE("view action magnitude is circular") {
  const double step = 2.0 * M_PI / 12.0;
  CHECK(view_action_magnitude(1, 2, 12) == doctest::Approx(step));
  CHECK(view_action_magnitude(1, 12, 12) == doctest::Approx(step));
  CHECK(view_action_magnitude(1, 7, 12) == doctest::Approx(6 * step));
  CHECK(view_action_magnitude(3, 3, 12) == doctest::Approx(0.0));
}

TEST_CASE("place rule covers the three outcomes") {
  ScenarioParams cycle_params;
  cycle_params.num_goal_objects = 4;
  cycle_params.cycle_type = {2};  // keeps some goals occupied
  cycle_params.rng_seed = 6;
  const SceneSpec spec = generate_scene(cycle_params);
  SceneState state = initial_state(spec);
  const Thresholds th;
  const ObjectId obj = 1;
  apply_grasp(state, obj);

  // below the goal boundary: discard outside
  MatchingDistribution weak{vec({0.26, 0.25, 0.25, 0.24})};
  CHECK(select_place(weak, spec, state, obj, th).kind == PlaceTarget::Kind::Outside);

  // confident and the argmax goal is open
  GoalId open_goal = 0;
  for (GoalId j = 1; j <= spec.num_goals; ++j) {
    if (goal_free(spec, state, j, obj)) open_goal = j;
  }
  REQUIRE(open_goal != 0);
  SimilarityVector conf = SimilarityVector::Zero(4);
  conf[open_goal - 1] = 1.0;
  const auto target = select_place(MatchingDistribution{
      to_distribution(conf, 0.1).probs}, spec, state, obj, th);
  CHECK(target.kind == PlaceTarget::Kind::Goal);
  CHECK(target.goal == open_goal);

  // confident but occupied: buffer detour
  GoalId busy_goal = 0;
  for (GoalId j = 1; j <= spec.num_goals; ++j) {
    if (!goal_free(spec, state, j, obj)) busy_goal = j;
  }
  REQUIRE(busy_goal != 0);
  SimilarityVector busy = SimilarityVector::Zero(4);
  busy[busy_goal - 1] = 1.0;
  const auto detour = select_place(MatchingDistribution{
      to_distribution(busy, 0.1).probs}, spec, state, obj, th);
  CHECK(detour.kind == PlaceTarget::Kind::Buffer);

  // both variants implement the same rule
  CHECK(select_place_pi0(weak, spec, state, obj, th).kind ==
        PlaceTarget::Kind::Outside);
  CHECK(select_place_pi0(MatchingDistribution{to_distribution(busy, 0.1).probs},
                         spec, state, obj, th).kind == PlaceTarget::Kind::Buffer);
}

TEST_CASE("see policy basics") {
  const SceneSpec spec = goal_scene(3, 2);
  NoiseModel noise;
  noise.num_views = 6;
  Rng rng(4);
  LatentViews latent;
  latent.good = {{false, true, false, true, false, false},
                 {true, true, true, true, true, true},
                 {true, true, true, true, true, true}};
  ViewState vs;
  vs.object = 1;
  const MatchingDistribution d{vec({0.4, 0.3, 0.3})};

  CHECK_FALSE(select_view(SeePolicyKind::NoSee, vs, {1}, noise, latent, d,
                          FusionMode::Mean, rng).has_value());

  // oracle: first unobserved good view
  const auto oracle = select_view(SeePolicyKind::OracleSee, vs, {1}, noise, latent, d,
                                  FusionMode::Mean, rng);
  REQUIRE(oracle.has_value());
  CHECK(oracle->view == 2);
  const auto oracle2 = select_view(SeePolicyKind::OracleSee, vs, {1, 2, 4}, noise,
                                   latent, d, FusionMode::Mean, rng);
  CHECK_FALSE(oracle2.has_value());  // only bad views remain

  // random stays within the candidate set
  for (int t = 0; t < 40; ++t) {
    const auto pick = select_view(SeePolicyKind::RandomSee, vs, {1, 3, 5}, noise,
                                  latent, d, FusionMode::Mean, rng);
    REQUIRE(pick.has_value());
    CHECK((pick->view == 2 || pick->view == 4 || pick->view == 6));
  }

  // everything excluded: stop
  CHECK_FALSE(select_view(SeePolicyKind::RandomSee, vs, {1, 2, 3, 4, 5, 6}, noise,
                          latent, d, FusionMode::Mean, rng).has_value());
}

TEST_CASE("expected entropy drop matches exhaustive enumeration") {
  const SceneSpec spec = goal_scene(3, 9);
  NoiseModel noise;
  noise.num_views = 3;
  noise.sigma = 0.2;
  noise.p_bad_view = 0.4;
  noise.quality_persistence = 0.7;
  noise.mu_bad = 0.0;
  noise.temperature = 0.4;
  noise.confuser[1] = (spec.true_goal.at(1) % 3) + 1;

  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const LatentViews latent = make_latent_views(noise, spec, rng);
    ViewState vs;
    vs.object = 1;
    fuse_views(vs, 1, sample_view(noise, spec, latent, 1, 1, rng), FusionMode::Mean);
    if (trial % 2 == 1) {
      fuse_views(vs, 3, sample_view(noise, spec, latent, 1, 3, rng), FusionMode::Mean);
    }
    const auto d = to_distribution(vs.fused, noise.temperature);
    for (int candidate = 1; candidate <= 3; ++candidate) {
      const double got =
          expected_entropy_drop(vs, noise, d, candidate, FusionMode::Mean);
      const double want = oracle_expected_drop(vs, noise, d, candidate);
      CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
  }
}

TEST_CASE("greedy see prefers views that are likely informative") {
  const SceneSpec spec = goal_scene(3, 9);
  NoiseModel noise;
  noise.num_views = 8;
  noise.sigma = 0.1;
  noise.p_bad_view = 0.5;
  noise.quality_persistence = 0.9;
  noise.mu_match = 0.3;
  noise.temperature = 0.1;

  Rng rng(23);
  LatentViews latent;
  latent.good.assign(3, std::vector<bool>(8, true));
  // object 1 view 1 is bad; with strong persistence its neighbors are suspect
  latent.good[0][0] = false;
  ViewState vs;
  vs.object = 1;
  fuse_views(vs, 1, sample_view(noise, spec, latent, 1, 1, rng), FusionMode::Mean);
  const auto d = to_distribution(vs.fused, noise.temperature);
  const auto pick = select_view(SeePolicyKind::GreedySee, vs, {1}, noise, latent, d,
                                FusionMode::Mean, rng);
  REQUIRE(pick.has_value());
  // the chain neighbor of the known-bad view is the least attractive candidate
  CHECK(pick->view != 2);
}
