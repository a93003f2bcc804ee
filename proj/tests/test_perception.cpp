#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "gsp/perception.hpp"

using namespace gsp;

namespace {

SceneSpec goal_scene(int goals, std::uint64_t seed = 1, int nongoal = 0) {
  ScenarioParams p;
  p.num_goal_objects = goals;
  p.num_nongoal_objects = nongoal;
  p.rng_seed = seed;
  return generate_scene(p);
}

SimilarityVector vec(std::initializer_list<double> values) {
  SimilarityVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v[k++] = x;
  return v;
}

}  // namespace

TEST_CASE("softmax on a two-way gap of one at unit temperature") {
  const auto d = to_distribution(vec({1.0, 0.0}), 1.0);
  CHECK(d.probs[0] == doctest::Approx(0.7310585786).epsilon(1e-9));
  CHECK(d.probs[1] == doctest::Approx(0.2689414214).epsilon(1e-9));
  CHECK(d.argmax() == 1);
  CHECK(d.score() == doctest::Approx(0.7310585786).epsilon(1e-9));
}

TEST_CASE("entropy reference values") {
  const auto uniform5 = to_distribution(vec({3, 3, 3, 3, 3}), 0.7);
  CHECK(uniform5.entropy() == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  const auto uniform2 = to_distribution(vec({0, 0}), 1.0);
  CHECK(uniform2.entropy() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  MatchingDistribution point{vec({1.0, 0.0, 0.0})};
  CHECK(point.entropy() == doctest::Approx(0.0));
}

TEST_CASE("threshold arithmetic") {
  Thresholds th;
  CHECK(th.zeta_m(5) == doctest::Approx(0.32));
  CHECK(th.zeta_g(5) == doctest::Approx(0.24));
  CHECK(th.zeta_m(2) == doctest::Approx(0.62));
  // see terminal is stricter than the goal boundary
  for (int n = 2; n <= 10; ++n) CHECK(th.zeta_m(n) > th.zeta_g(n));
}

TEST_CASE("temperature must be positive") {
  CHECK_THROWS_AS(to_distribution(vec({1.0, 0.0}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(to_distribution(vec({1.0, 0.0}), -1.0), std::invalid_argument);
}

TEST_CASE("softmax shift invariance") {
  const auto base = to_distribution(vec({0.4, -0.2, 0.9}), 0.1);
  const auto shifted = to_distribution(vec({100.4, 99.8, 100.9}), 0.1);
  for (int k = 0; k < 3; ++k) {
    CHECK(base.probs[k] == doctest::Approx(shifted.probs[k]).epsilon(1e-12));
  }
}

TEST_CASE("argmax breaks ties toward the lowest goal id") {
  MatchingDistribution d{vec({0.4, 0.4, 0.2})};
  CHECK(d.argmax() == 1);
}

TEST_CASE("noiseless views recover the true assignment") {
  const SceneSpec spec = goal_scene(4, 2, 1);
  const NoiseModel noise;  // sigma 0, no bad views
  Rng rng(5);
  const LatentViews latent = make_latent_views(noise, spec, rng);
  const Thresholds th;
  for (ObjectId i = 1; i <= spec.num_objects; ++i) {
    const auto s = sample_view(noise, spec, latent, i, 1, rng);
    const auto d = to_distribution(s, noise.temperature);
    CHECK(classify_goal(d, spec.num_goals, th) == spec.true_goal.at(i));
    if (spec.true_goal.at(i) != kNonGoal) {
      CHECK(should_terminate(d, spec.num_goals, th));
    } else {
      CHECK_FALSE(should_terminate(d, spec.num_goals, th));
    }
  }
}

TEST_CASE("bad views score the confuser goal") {
  const SceneSpec spec = goal_scene(4, 2);
  NoiseModel noise;
  noise.p_bad_view = 1.0;
  noise.mu_bad = 0.0;
  const ObjectId obj = 1;
  const GoalId truth = spec.true_goal.at(obj);
  const GoalId confuser = (truth % spec.num_goals) + 1;
  noise.confuser[obj] = confuser;
  Rng rng(5);
  const LatentViews latent = make_latent_views(noise, spec, rng);
  const auto s = sample_view(noise, spec, latent, obj, 1, rng);
  const auto d = to_distribution(s, noise.temperature);
  CHECK(d.argmax() == confuser);
}

TEST_CASE("non-goal objects score uniformly regardless of view quality") {
  const auto good = mean_similarity(NoiseModel{}, 4, 1, kNonGoal, true);
  const auto bad = mean_similarity(NoiseModel{}, 4, 1, kNonGoal, false);
  CHECK(good == bad);
  CHECK(good.maxCoeff() == good.minCoeff());
}

TEST_CASE("view index bounds are enforced") {
  const SceneSpec spec = goal_scene(3);
  NoiseModel noise;
  Rng rng(1);
  const LatentViews latent = make_latent_views(noise, spec, rng);
  CHECK_THROWS_AS(sample_view(noise, spec, latent, 1, 0, rng), std::out_of_range);
  CHECK_THROWS_AS(sample_view(noise, spec, latent, 1, noise.num_views + 1, rng),
                  std::out_of_range);
}

TEST_CASE("mean fusion averages raw samples") {
  ViewState vs;
  vs.object = 1;
  fuse_views(vs, 1, vec({1.0, 0.0}), FusionMode::Mean);
  fuse_views(vs, 2, vec({0.0, 1.0}), FusionMode::Mean);
  CHECK(vs.fused[0] == doctest::Approx(0.5));
  CHECK(vs.fused[1] == doctest::Approx(0.5));
  CHECK(vs.observed_views == std::vector<int>{1, 2});

  ViewState latest;
  latest.object = 1;
  fuse_views(latest, 1, vec({1.0, 0.0}), FusionMode::LatestOnly);
  fuse_views(latest, 2, vec({0.0, 1.0}), FusionMode::LatestOnly);
  CHECK(latest.fused[0] == doctest::Approx(0.0));
  CHECK(latest.fused[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(fuse_views(latest, 3, vec({1.0, 0.0, 0.0}), FusionMode::LatestOnly),
                  std::invalid_argument);
}

TEST_CASE("latent view marginal matches p_bad_view under persistence") {
  const SceneSpec spec = goal_scene(5, 3, 0);
  for (double persistence : {0.5, 0.9}) {
    NoiseModel noise;
    noise.p_bad_view = 0.3;
    noise.quality_persistence = persistence;
    noise.num_views = 12;
    Rng rng(11);
    int bad = 0, total = 0;
    for (int rep = 0; rep < 400; ++rep) {
      const LatentViews latent = make_latent_views(noise, spec, rng);
      for (ObjectId i = 1; i <= spec.num_objects; ++i) {
        for (int v = 1; v <= noise.num_views; ++v) {
          ++total;
          if (!latent.is_good(i, v)) ++bad;
        }
      }
    }
    const double rate = static_cast<double>(bad) / total;
    CHECK(rate == doctest::Approx(0.3).epsilon(0.05));
  }
}

TEST_CASE("persistence correlates adjacent view qualities") {
  const SceneSpec spec = goal_scene(5, 3, 0);
  NoiseModel noise;
  noise.p_bad_view = 0.4;
  noise.quality_persistence = 0.9;
  Rng rng(13);
  int agree = 0, total = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const LatentViews latent = make_latent_views(noise, spec, rng);
    for (ObjectId i = 1; i <= spec.num_objects; ++i) {
      for (int v = 1; v < noise.num_views; ++v) {
        ++total;
        if (latent.is_good(i, v) == latent.is_good(i, v + 1)) ++agree;
      }
    }
  }
  // agreement = rho + (1-rho) * P(redraw matches) = 0.9 + 0.1 * 0.52
  const double rate = static_cast<double>(agree) / total;
  CHECK(rate == doctest::Approx(0.952).epsilon(0.02));
}

TEST_CASE("observe_scene covers exactly the non-outside objects") {
  const SceneSpec spec = goal_scene(3, 4, 1);
  SceneState state = initial_state(spec);
  NoiseModel noise;
  Rng rng(2);
  const LatentViews latent = make_latent_views(noise, spec, rng);
  CHECK(observe_scene(noise, spec, state, latent, rng).size() == 4);

  apply_grasp(state, 2);
  apply_place(spec, state, 2, PlaceTarget::ToOutside());
  const auto dists = observe_scene(noise, spec, state, latent, rng);
  CHECK(dists.size() == 3);
  CHECK_FALSE(dists.count(2));
}

TEST_CASE("classification falls back to non-goal below the boundary") {
  const Thresholds th;
  MatchingDistribution near_uniform{vec({0.26, 0.25, 0.25, 0.24})};
  CHECK(classify_goal(near_uniform, 4, th) == kNonGoal);
  MatchingDistribution confident{vec({0.7, 0.1, 0.1, 0.1})};
  CHECK(classify_goal(confident, 4, th) == 1);
}
